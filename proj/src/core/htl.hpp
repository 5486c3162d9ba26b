// core/htl.hpp

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

#ifndef TLB_CORE_HTL_HPP
#define TLB_CORE_HTL_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tlb::htl {

/// Target-domain regression data: rows of X paired with labels bounded by
/// |y| <= label_bound.
struct RegressionSample {
  Eigen::MatrixXd xs;  // m x d
  Eigen::VectorXd ys;  // m
  double label_bound;

  std::size_t size() const { return static_cast<std::size_t>(xs.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(xs.cols()); }
};

RegressionSample make_sample(const std::vector<Eigen::VectorXd>& xs,
                             const std::vector<double>& ys,
                             double label_bound);

/// Trained source hypothesis f' with a declared sup-norm bound, verified
/// at every evaluation.
class SourcePredictor {
 public:
  SourcePredictor(std::function<double(const Eigen::VectorXd&)> eval,
                  double sup_norm_bound);

  static SourcePredictor linear(Eigen::VectorXd weights, double bias,
                                double sup_norm_bound);

  double operator()(const Eigen::VectorXd& x) const;
  double sup_norm_bound() const noexcept { return sup_norm_bound_; }

 private:
  std::function<double(const Eigen::VectorXd&)> eval_;
  double sup_norm_bound_;
};

/// Clamp to [-C, C]; C may be infinity (identity).
double truncate(double y, double c);

inline constexpr double kInfiniteTruncation =
    std::numeric_limits<double>::infinity();

/// Output of the regularized least-squares transfer algorithm: linear
/// correction w on top of the source predictor, truncated at level C.
struct HTLModel {
  Eigen::VectorXd w;
  double truncation_c;
  std::shared_ptr<const SourcePredictor> source;
  double lambda_reg;

  double predict(const Eigen::VectorXd& x) const;
};

/// Solves argmin_u (1/m) sum (u.x_i - y_i + f'(x_i))^2 + lambda |u|^2
/// exactly via an LDLT factorization of the SPD normal matrix.
HTLModel train_htl(const RegressionSample& sample,
                   std::shared_ptr<const SourcePredictor> source,
                   double lambda_reg, double truncation_c);

/// Objective of the training problem at an arbitrary u, and its gradient;
/// exposed for optimality and finite-difference checks.
double htl_objective(const RegressionSample& sample,
                     const SourcePredictor& source, double lambda_reg,
                     const Eigen::VectorXd& u);
Eigen::VectorXd htl_gradient(const RegressionSample& sample,
                             const SourcePredictor& source, double lambda_reg,
                             const Eigen::VectorXd& u);

using Predictor = std::function<double(const Eigen::VectorXd&)>;
using Trainer = std::function<Predictor(const RegressionSample&)>;

/// Reference leave-one-out risk: retrains m times on S minus one point and
/// averages the held-out squared losses. Requires m >= 2.
double loo_risk(const RegressionSample& sample, const Trainer& trainer);

/// Closed-form leave-one-out risk for train_htl: one factorization plus a
/// rank-one downdate per point. Matches the naive path to 1e-10.
double loo_risk_closed_form(const RegressionSample& sample,
                            const SourcePredictor& source, double lambda_reg,
                            double truncation_c);

/// Finite-support regression target: the true risk of any predictor is the
/// exact finite sum over support points.
struct RegressionDomain {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> probs;
  std::vector<double> labels;
  double label_bound;

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(points.front().size()); }
};

RegressionDomain make_regression_domain(std::vector<Eigen::VectorXd> points,
                                        std::vector<double> probs,
                                        std::vector<double> labels);

/// Exact squared-loss risk over the finite support.
double true_risk(const RegressionDomain& domain, const Predictor& f);

/// Draw m support points i.i.d. with their deterministic labels.
RegressionSample sample_regression(const RegressionDomain& domain,
                                   std::size_t m, std::uint64_t seed);

struct StabilityConfig {
  RegressionDomain target;
  std::shared_ptr<const SourcePredictor> source;
  std::size_t m;
  double lambda_reg;
  double truncation_c;
};

struct StabilityEstimate {
  double mean_sq_gap;
  double std_error;
  std::size_t trials;
  /// Non-fatal notes, e.g. a violated theorem-branch precondition.
  std::vector<std::string> warnings;
};

/// Monte Carlo estimate of E[(true risk - LOO risk)^2] across seeded
/// trials of size m. Requires trials >= 30.
StabilityEstimate estimate_stability_gap(const StabilityConfig& config,
                                         std::size_t trials,
                                         std::uint64_t seed);

}  // namespace tlb::htl

#endif  // TLB_CORE_HTL_HPP
