// core/htl.cpp

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

#include "core/htl.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace tlb::htl {

RegressionSample make_sample(const std::vector<Eigen::VectorXd>& xs,
                             const std::vector<double>& ys,
                             double label_bound) {
  if (xs.empty() || xs.size() != ys.size())
    throw StructuralError("regression sample requires aligned xs and ys");
  if (!(label_bound >= 0.0))
    throw PreconditionError("label bound must be nonnegative");
  const auto d = xs.front().size();
  RegressionSample s;
  s.xs.resize(static_cast<Eigen::Index>(xs.size()), d);
  s.ys.resize(static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != d)
      throw StructuralError("regression points must share one dimension");
    if (std::abs(ys[i]) > label_bound + 1e-12)
      throw PreconditionError("labels must satisfy |y| <= label bound");
    s.xs.row(static_cast<Eigen::Index>(i)) = xs[i].transpose();
    s.ys(static_cast<Eigen::Index>(i)) = ys[i];
  }
  s.label_bound = label_bound;
  return s;
}

SourcePredictor::SourcePredictor(
    std::function<double(const Eigen::VectorXd&)> eval, double sup_norm_bound)
    : eval_(std::move(eval)), sup_norm_bound_(sup_norm_bound) {
  if (!eval_) throw StructuralError("source predictor requires an evaluator");
  if (!(sup_norm_bound_ >= 0.0))
    throw PreconditionError("sup-norm bound must be nonnegative");
}

SourcePredictor SourcePredictor::linear(Eigen::VectorXd weights, double bias,
                                        double sup_norm_bound) {
  return SourcePredictor(
      [w = std::move(weights), bias](const Eigen::VectorXd& x) {
        return w.dot(x) + bias;
      },
      sup_norm_bound);
}

double SourcePredictor::operator()(const Eigen::VectorXd& x) const {
  const double v = eval_(x);
  if (std::abs(v) > sup_norm_bound_ + 1e-9)
    throw PreconditionError(
        "source predictor exceeded its declared sup-norm bound");
  return v;
}

double truncate(double y, double c) {
  if (!(c > 0.0)) throw PreconditionError("truncation level must be positive");
  return std::min(std::max(y, -c), c);
}

double HTLModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != w.size())
    throw StructuralError("prediction input has the wrong dimension");
  return truncate(x.dot(w), truncation_c) + (*source)(x);
}

namespace {

Eigen::VectorXd residuals(const RegressionSample& sample,
                          const SourcePredictor& source) {
  Eigen::VectorXd r(sample.xs.rows());
  for (Eigen::Index i = 0; i < sample.xs.rows(); ++i)
    r(i) = sample.ys(i) - source(sample.xs.row(i).transpose());
  return r;
}

}  // namespace

HTLModel train_htl(const RegressionSample& sample,
                   std::shared_ptr<const SourcePredictor> source,
                   double lambda_reg, double truncation_c) {
  if (!source) throw StructuralError("train_htl requires a source predictor");
  if (!(lambda_reg > 0.0))
    throw PreconditionError("lambda_reg must be positive");
  if (!(truncation_c > 0.0))
    throw PreconditionError("truncation level must be positive");
  if (sample.size() == 0)
    throw PreconditionError("training requires at least one point");
  const double m = static_cast<double>(sample.size());
  const Eigen::Index d = sample.xs.cols();
  const Eigen::VectorXd r = residuals(sample, *source);
  Eigen::MatrixXd normal = sample.xs.transpose() * sample.xs / m;
  normal.diagonal().array() += lambda_reg;
  const Eigen::VectorXd rhs = sample.xs.transpose() * r / m;
  HTLModel model;
  model.w = Eigen::LDLT<Eigen::MatrixXd>(normal).solve(rhs);
  if (model.w.size() != d) throw Error("ridge solve failed");
  model.truncation_c = truncation_c;
  model.source = std::move(source);
  model.lambda_reg = lambda_reg;
  return model;
}

double htl_objective(const RegressionSample& sample,
                     const SourcePredictor& source, double lambda_reg,
                     const Eigen::VectorXd& u) {
  const double m = static_cast<double>(sample.size());
  const Eigen::VectorXd r = residuals(sample, source);
  const Eigen::VectorXd err = sample.xs * u - r;
  return err.squaredNorm() / m + lambda_reg * u.squaredNorm();
}

Eigen::VectorXd htl_gradient(const RegressionSample& sample,
                             const SourcePredictor& source, double lambda_reg,
                             const Eigen::VectorXd& u) {
  const double m = static_cast<double>(sample.size());
  const Eigen::VectorXd r = residuals(sample, source);
  return 2.0 / m * (sample.xs.transpose() * (sample.xs * u - r)) +
         2.0 * lambda_reg * u;
}

double loo_risk(const RegressionSample& sample, const Trainer& trainer) {
  const std::size_t m = sample.size();
  if (m < 2) throw PreconditionError("leave-one-out risk requires m >= 2");
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    RegressionSample fold;
    fold.xs.resize(static_cast<Eigen::Index>(m - 1), sample.xs.cols());
    fold.ys.resize(static_cast<Eigen::Index>(m - 1));
    Eigen::Index row = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      fold.xs.row(row) = sample.xs.row(static_cast<Eigen::Index>(j));
      fold.ys(row) = sample.ys(static_cast<Eigen::Index>(j));
      ++row;
    }
    fold.label_bound = sample.label_bound;
    const Predictor f = trainer(fold);
    const double pred = f(sample.xs.row(static_cast<Eigen::Index>(i)).transpose());
    const double err = pred - sample.ys(static_cast<Eigen::Index>(i));
    total += err * err;
  }
  return total / static_cast<double>(m);
}

double loo_risk_closed_form(const RegressionSample& sample,
                            const SourcePredictor& source, double lambda_reg,
                            double truncation_c) {
  const std::size_t m = sample.size();
  if (m < 2) throw PreconditionError("leave-one-out risk requires m >= 2");
  if (!(lambda_reg > 0.0))
    throw PreconditionError("lambda_reg must be positive");
  const double mf = static_cast<double>(m);
  const Eigen::VectorXd r = residuals(sample, source);

  // Each fold solves (X'X - x_i x_i' + (m-1) lambda I) w = X'r - x_i r_i.
  // Factor B = X'X + (m-1) lambda I once and apply a Sherman-Morrison
  // downdate per point.
  Eigen::MatrixXd b = sample.xs.transpose() * sample.xs;
  b.diagonal().array() += (mf - 1.0) * lambda_reg;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(b);
  const Eigen::VectorXd g = sample.xs.transpose() * r;
  const Eigen::VectorXd binv_g = ldlt.solve(g);

  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Index ii = static_cast<Eigen::Index>(i);
    const Eigen::VectorXd x_i = sample.xs.row(ii).transpose();
    const Eigen::VectorXd u_i = ldlt.solve(x_i);
    const double q_i = x_i.dot(u_i);  // < 1 since (m-1) lambda > 0
    const Eigen::VectorXd v_i = binv_g - r(ii) * u_i;
    const Eigen::VectorXd w_i = v_i + u_i * (x_i.dot(v_i) / (1.0 - q_i));
    const double pred = truncate(x_i.dot(w_i), truncation_c) + source(x_i);
    const double err = pred - sample.ys(ii);
    total += err * err;
  }
  return total / mf;
}

RegressionDomain make_regression_domain(std::vector<Eigen::VectorXd> points,
                                        std::vector<double> probs,
                                        std::vector<double> labels) {
  if (points.empty() || points.size() != probs.size() ||
      points.size() != labels.size())
    throw StructuralError(
        "regression domain requires aligned points, probs and labels");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw PreconditionError("probabilities must be finite and nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw PreconditionError("probabilities must sum to 1 within 1e-12");
  for (double& p : probs) p /= sum;
  RegressionDomain d;
  d.label_bound = 0.0;
  for (double y : labels) d.label_bound = std::max(d.label_bound, std::abs(y));
  d.points = std::move(points);
  d.probs = std::move(probs);
  d.labels = std::move(labels);
  return d;
}

double true_risk(const RegressionDomain& domain, const Predictor& f) {
  double risk = 0.0;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const double err = f(domain.points[i]) - domain.labels[i];
    risk += domain.probs[i] * err * err;
  }
  return risk;
}

RegressionSample sample_regression(const RegressionDomain& domain,
                                   std::size_t m, std::uint64_t seed) {
  if (m == 0) throw PreconditionError("sample size must be >= 1");
  std::vector<double> cdf(domain.probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < domain.probs.size(); ++i) {
    acc += domain.probs[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  rng::SplitMix64 gen(seed);
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  xs.reserve(m);
  ys.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double u = gen.next_unit();
    const std::size_t idx = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(),
            static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    xs.push_back(domain.points[idx]);
    ys.push_back(domain.labels[idx]);
  }
  return make_sample(xs, ys, domain.label_bound);
}

StabilityEstimate estimate_stability_gap(const StabilityConfig& config,
                                         std::size_t trials,
                                         std::uint64_t seed) {
  if (trials < 30)
    throw PreconditionError("stability estimation requires >= 30 trials");
  if (config.m < 2)
    throw PreconditionError("stability estimation requires m >= 2");
  StabilityEstimate est;
  est.trials = trials;

  const double sup_norm = config.source->sup_norm_bound();
  const double needed = config.target.label_bound + sup_norm;
  if (std::isfinite(config.truncation_c) && config.truncation_c < needed) {
    est.warnings.push_back(
        "truncation level below label_bound + source sup-norm; the "
        "finite-C risk guarantee does not apply to this configuration");
  }
  if (config.lambda_reg < 1.0 / static_cast<double>(config.m)) {
    est.warnings.push_back(
        "lambda_reg below 1/m; the stability guarantee assumes "
        "lambda >= 1/m");
  }

  std::vector<double> sq_gaps(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = rng::derive_stream(seed, t);
    const RegressionSample s =
        sample_regression(config.target, config.m, trial_seed);
    const HTLModel model =
        train_htl(s, config.source, config.lambda_reg, config.truncation_c);
    const Predictor f = [&model](const Eigen::VectorXd& x) {
      return model.predict(x);
    };
    const double exact = true_risk(config.target, f);
    const double loo = loo_risk_closed_form(s, *config.source,
                                            config.lambda_reg,
                                            config.truncation_c);
    const double gap = exact - loo;
    sq_gaps[t] = gap * gap;
  }
  double mean = 0.0;
  for (double v : sq_gaps) mean += v;
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (double v : sq_gaps) var += (v - mean) * (v - mean);
  const double sd =
      trials > 1 ? std::sqrt(var / static_cast<double>(trials - 1)) : 0.0;
  est.mean_sq_gap = mean;
  est.std_error = sd / std::sqrt(static_cast<double>(trials));
  return est;
}

}  // namespace tlb::htl
