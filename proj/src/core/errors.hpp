// core/errors.hpp

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

#ifndef TLB_CORE_ERRORS_HPP
#define TLB_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tlb {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape/alignment violations: mismatched ground sets, ragged vectors.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Value-domain violations: out-of-range parameters, non-binary inputs
/// where XOR is required, degenerate weights.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Config parsing or validation failure.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Explicit refusal of an exact computation that would not finish at
/// desk scale (e.g. 2^m sign enumeration past the cutoff).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failures while writing artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tlb

#endif  // TLB_CORE_ERRORS_HPP
