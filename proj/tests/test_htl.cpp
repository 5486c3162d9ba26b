#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "core/htl.hpp"
#include "core/rng.hpp"

using namespace tlb;
using namespace tlb::htl;
using tlb::rng::SplitMix64;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

std::shared_ptr<const SourcePredictor> zero_source() {
  return std::make_shared<SourcePredictor>(
      [](const Eigen::VectorXd&) { return 0.0; }, 0.0);
}

RegressionSample random_sample(SplitMix64& rng, std::size_t m,
                               Eigen::Index d) {
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::VectorXd x(d);
    for (Eigen::Index j = 0; j < d; ++j) x(j) = 2.0 * rng.next_unit() - 1.0;
    xs.push_back(x);
    ys.push_back(2.0 * rng.next_unit() - 1.0);
  }
  return make_sample(xs, ys, 1.0);
}

RegressionDomain random_regression_domain(SplitMix64& rng, std::size_t n,
                                          Eigen::Index d, double noise) {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  std::vector<double> labels;
  Eigen::VectorXd w(d);
  for (Eigen::Index j = 0; j < d; ++j) w(j) = 2.0 * rng.next_unit() - 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd x(d);
    for (Eigen::Index j = 0; j < d; ++j) x(j) = 2.0 * rng.next_unit() - 1.0;
    points.push_back(x);
    labels.push_back(w.dot(x) + noise * (2.0 * rng.next_unit() - 1.0));
  }
  return make_regression_domain(points, probs, labels);
}

}  // namespace

TEST_CASE("truncation clamps into [-C, C]") {
  CHECK(truncate(5.0, 2.0) == 2.0);
  CHECK(truncate(-5.0, 2.0) == -2.0);
  CHECK(truncate(1.5, 2.0) == 1.5);
  CHECK(truncate(123.0, kInfiniteTruncation) == 123.0);
  CHECK(truncate(-123.0, kInfiniteTruncation) == -123.0);
  CHECK_THROWS_AS(truncate(1.0, 0.0), PreconditionError);
  CHECK_THROWS_AS(truncate(1.0, -2.0), PreconditionError);
}

TEST_CASE("the scalar normal equation solved by hand") {
  // One point, x = 1, residual 1, lambda = 1: w = (1 + 1)^-1 * 1 = 0.5.
  const RegressionSample s = make_sample({vec1(1.0)}, {1.0}, 1.0);
  const HTLModel model = train_htl(s, zero_source(), 1.0, kInfiniteTruncation);
  CHECK(model.w(0) == 0.5);
}

TEST_CASE("heavy regularization recovers the source hypothesis") {
  SplitMix64 rng(71);
  const RegressionSample s = random_sample(rng, 20, 3);
  auto source = std::make_shared<SourcePredictor>(
      [](const Eigen::VectorXd& x) { return 0.25 * x(0); }, 0.25);
  const HTLModel model = train_htl(s, source, 1e12, 5.0);
  CHECK(model.w.norm() < 1e-10);
  Eigen::VectorXd x(3);
  x << 0.5, -0.2, 0.1;
  CHECK(model.predict(x) == doctest::Approx((*source)(x)).epsilon(1e-9));
}

TEST_CASE("a perfect source leaves nothing to correct") {
  SplitMix64 rng(72);
  Eigen::VectorXd w_true(2);
  w_true << 0.3, -0.6;
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  for (int i = 0; i < 12; ++i) {
    Eigen::VectorXd x(2);
    x << rng.next_unit(), rng.next_unit();
    xs.push_back(x);
    ys.push_back(w_true.dot(x));
  }
  const RegressionSample s = make_sample(xs, ys, 1.0);
  auto source = std::make_shared<SourcePredictor>(
      SourcePredictor::linear(w_true, 0.0, 1.0));
  const HTLModel model = train_htl(s, source, 0.1, kInfiniteTruncation);
  CHECK(model.w.norm() < 1e-12);
}

TEST_CASE("training reaches a stationary point of the objective") {
  SplitMix64 rng(73);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t m = 5 + rng.next_u64() % 30;
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.next_u64() % 6);
    const RegressionSample s = random_sample(rng, m, d);
    auto source = zero_source();
    const double lambda = 0.01 + rng.next_unit();
    const HTLModel model = train_htl(s, source, lambda, kInfiniteTruncation);

    const Eigen::VectorXd r = s.ys;  // zero source, residuals are the labels
    const double grad_norm =
        htl_gradient(s, *source, lambda, model.w).norm();
    CHECK(grad_norm <= 1e-8 * (1.0 + r.norm()));

    // Local optimality along random directions.
    const double at_min = htl_objective(s, *source, lambda, model.w);
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd v(d);
      for (Eigen::Index j = 0; j < d; ++j) v(j) = 2.0 * rng.next_unit() - 1.0;
      CHECK(htl_objective(s, *source, lambda, model.w + 1e-3 * v) >= at_min);
    }
  }
}

TEST_CASE("analytic gradient matches central differences") {
  SplitMix64 rng(74);
  const RegressionSample s = random_sample(rng, 15, 4);
  auto source = std::make_shared<SourcePredictor>(
      [](const Eigen::VectorXd& x) { return 0.2 * x.sum(); }, 0.8);
  const double lambda = 0.3;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd u(4);
    for (Eigen::Index j = 0; j < 4; ++j) u(j) = 2.0 * rng.next_unit() - 1.0;
    const Eigen::VectorXd grad = htl_gradient(s, *source, lambda, u);
    const double h = 1e-6;
    for (Eigen::Index j = 0; j < 4; ++j) {
      Eigen::VectorXd up = u, dn = u;
      up(j) += h;
      dn(j) -= h;
      const double fd = (htl_objective(s, *source, lambda, up) -
                         htl_objective(s, *source, lambda, dn)) /
                        (2.0 * h);
      CHECK(std::abs(grad(j) - fd) <=
            1e-6 * std::max(1.0, std::abs(grad(j))));
    }
  }
}

TEST_CASE("predictions decompose as clamped correction plus source") {
  SplitMix64 rng(75);
  const RegressionSample s = random_sample(rng, 10, 2);
  auto source = std::make_shared<SourcePredictor>(
      [](const Eigen::VectorXd& x) { return 0.5 * x(1); }, 0.5);
  const double c = 0.05;
  const HTLModel model = train_htl(s, source, 0.001, c);
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd x(2);
    x << 2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0;
    const double correction = model.predict(x) - (*source)(x);
    CHECK(correction >= -c - 1e-15);
    CHECK(correction <= c + 1e-15);
    CHECK(std::abs(model.predict(x)) <= c + 0.5 + 1e-15);
  }
  Eigen::VectorXd wrong_dim(3);
  wrong_dim.setZero();
  CHECK_THROWS_AS(model.predict(wrong_dim), StructuralError);
}

TEST_CASE("leave-one-out: constant zero trainer on zero labels") {
  const RegressionSample s =
      make_sample({vec1(0.5), vec1(1.0), vec1(2.0)}, {0.0, 0.0, 0.0}, 0.0);
  const Trainer zero_trainer = [](const RegressionSample&) {
    return Predictor([](const Eigen::VectorXd&) { return 0.0; });
  };
  CHECK(loo_risk(s, zero_trainer) == 0.0);
  CHECK_THROWS_AS(loo_risk(make_sample({vec1(1.0)}, {0.5}, 0.5), zero_trainer),
                  PreconditionError);
}

TEST_CASE("leave-one-out on the symmetric two-point instance") {
  // Folds are scalar problems solved by hand: each leaves w = 1/(1+lambda),
  // held-out prediction 0.5, loss 0.25.
  const RegressionSample s =
      make_sample({vec1(1.0), vec1(-1.0)}, {1.0, -1.0}, 1.0);
  auto source = zero_source();
  const Trainer trainer = [&source](const RegressionSample& fold) {
    const HTLModel model = train_htl(fold, source, 1.0, kInfiniteTruncation);
    return Predictor(
        [model](const Eigen::VectorXd& x) { return model.predict(x); });
  };
  CHECK(loo_risk(s, trainer) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(loo_risk_closed_form(s, *source, 1.0, kInfiniteTruncation) ==
        doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("closed-form LOO matches the naive retraining path") {
  SplitMix64 rng(76);
  for (int rep = 0; rep < 12; ++rep) {
    const std::size_t m = 4 + rng.next_u64() % 30;
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.next_u64() % 5);
    const RegressionSample s = random_sample(rng, m, d);
    Eigen::VectorXd w(d);
    for (Eigen::Index j = 0; j < d; ++j) w(j) = rng.next_unit() - 0.5;
    double sup = 0.0;
    for (Eigen::Index i = 0; i < s.xs.rows(); ++i)
      sup = std::max(sup, std::abs(w.dot(s.xs.row(i).transpose())));
    auto source = std::make_shared<SourcePredictor>(
        SourcePredictor::linear(w, 0.0, sup + 1e-9));
    const double lambda = 0.05 + rng.next_unit();
    const double c = rep % 3 == 0 ? kInfiniteTruncation : 0.2;

    const Trainer trainer = [&](const RegressionSample& fold) {
      const HTLModel model = train_htl(fold, source, lambda, c);
      return Predictor(
          [model](const Eigen::VectorXd& x) { return model.predict(x); });
    };
    const double naive = loo_risk(s, trainer);
    const double closed = loo_risk_closed_form(s, *source, lambda, c);
    CHECK(std::abs(naive - closed) <= 1e-10);
  }
}

TEST_CASE("leave-one-out is invariant under sample permutation") {
  SplitMix64 rng(77);
  const RegressionSample s = random_sample(rng, 9, 2);
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  for (Eigen::Index i = s.xs.rows() - 1; i >= 0; --i) {
    xs.push_back(s.xs.row(i).transpose());
    ys.push_back(s.ys(i));
  }
  const RegressionSample reversed = make_sample(xs, ys, s.label_bound);
  auto source = zero_source();
  CHECK(loo_risk_closed_form(s, *source, 0.2, kInfiniteTruncation) ==
        doctest::Approx(loo_risk_closed_form(reversed, *source, 0.2,
                                             kInfiniteTruncation))
            .epsilon(1e-12));
}

TEST_CASE("regression sampling is deterministic with exact finite risk") {
  SplitMix64 rng(78);
  const RegressionDomain domain = random_regression_domain(rng, 15, 2, 0.1);
  const RegressionSample a = sample_regression(domain, 30, 5);
  const RegressionSample b = sample_regression(domain, 30, 5);
  CHECK((a.xs - b.xs).norm() == 0.0);
  CHECK((a.ys - b.ys).norm() == 0.0);

  const Predictor mean_label = [&domain](const Eigen::VectorXd&) {
    double mean = 0.0;
    for (std::size_t i = 0; i < domain.size(); ++i)
      mean += domain.probs[i] * domain.labels[i];
    return mean;
  };
  // Risk of the constant mean predictor is the label variance.
  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < domain.size(); ++i)
    mean += domain.probs[i] * domain.labels[i];
  for (std::size_t i = 0; i < domain.size(); ++i)
    var += domain.probs[i] * (domain.labels[i] - mean) *
           (domain.labels[i] - mean);
  CHECK(true_risk(domain, mean_label) == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("stability gaps concentrate near zero for a perfect source") {
  SplitMix64 rng(79);
  RegressionDomain domain = random_regression_domain(rng, 20, 2, 0.0);
  // Noiseless linear labels: refit the exact weights as the source.
  Eigen::MatrixXd x(domain.size(), 2);
  Eigen::VectorXd y(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = domain.points[i].transpose();
    y(static_cast<Eigen::Index>(i)) = domain.labels[i];
  }
  const Eigen::VectorXd w_fit =
      (x.transpose() * x).ldlt().solve(x.transpose() * y);
  double sup = 0.0;
  for (const auto& p : domain.points)
    sup = std::max(sup, std::abs(w_fit.dot(p)));
  auto source = std::make_shared<SourcePredictor>(
      SourcePredictor::linear(w_fit, 0.0, sup + 1e-9));

  StabilityConfig config{domain, source, 25, 0.05,
                         domain.label_bound + sup + 1.0};
  const StabilityEstimate est = estimate_stability_gap(config, 40, 11);
  CHECK(est.mean_sq_gap < 1e-12);
  CHECK(est.warnings.empty());

  CHECK_THROWS_AS(estimate_stability_gap(config, 10, 11), PreconditionError);

  // A truncation level below the theorem's branch requirement is flagged,
  // not rejected.
  StabilityConfig tight = config;
  tight.truncation_c = 0.01;
  const StabilityEstimate flagged = estimate_stability_gap(tight, 30, 11);
  CHECK(!flagged.warnings.empty());
}
