// core/jsonio.hpp

// Copyright 2026 The tlbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TLB_CORE_JSONIO_HPP
#define TLB_CORE_JSONIO_HPP

#include <charconv>
#include <string>
#include <system_error>

#include <json.hpp>

namespace tlb {

// All emitted JSON preserves insertion order so that identical runs
// serialize byte-identically.
using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form of a double; used for every number we
/// put in a CSV cell so reruns are byte-identical and values re-parse
/// exactly.
inline std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Quote a CSV cell only when it contains a delimiter, quote or newline.
inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace tlb

#endif  // TLB_CORE_JSONIO_HPP
