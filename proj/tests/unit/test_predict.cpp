#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "geolik/predict.hpp"
#include "oracles.hpp"

using namespace geolik;

namespace {
SiteSet random_field(std::size_t n, Rng& rng) {
  SiteSet s;
  s.coords.resize(n);
  s.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.coords[i] = {rng.uniform(), rng.uniform()};
    s.data[i] = rng.uniform(-2.0, 2.0);
  }
  return s;
}
}  // namespace

TEST_CASE("kriging interpolates exactly without a nugget") {
  Rng rng(100);
  const SiteSet s = random_field(10, rng);
  const ParamVector theta{0.0, 1.0, 0.3};
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double pred =
        simple_kriging(s, CorrelationFamily::Exponential, theta, s.coords[k]);
    CHECK(pred == doctest::Approx(s.data[k]).epsilon(1e-8));
  }
}

TEST_CASE("kriging at a data site with a nugget returns the observed value") {
  // The cross-covariance at exact coincidence includes the nugget, so the
  // weight vector is a Kronecker delta.
  Rng rng(101);
  const SiteSet s = random_field(8, rng);
  const ParamVector theta{0.3, 1.0, 0.2};
  CHECK(simple_kriging(s, CorrelationFamily::Matern15, theta, s.coords[2]) ==
        doctest::Approx(s.data[2]).epsilon(1e-10));
}

TEST_CASE("a far-away target shrinks to the zero prior mean") {
  Rng rng(102);
  const SiteSet s = random_field(6, rng);
  const ParamVector theta{0.1, 1.0, 0.1};
  CHECK(std::abs(simple_kriging(s, CorrelationFamily::Exponential, theta,
                                {500.0, 500.0})) < 1e-10);
}

TEST_CASE("single-site prediction is the scaled covariance weight") {
  SiteSet s;
  s.coords = {{0.0, 0.0}};
  s.data = {2.0};
  const ParamVector theta{0.1, 0.9, 0.2};
  const Point target{0.1, 0.0};
  const double c = covariance(CorrelationFamily::Exponential, 0.1, theta);
  const double v = theta.sigma2 + theta.tau2;
  CHECK(simple_kriging(s, CorrelationFamily::Exponential, theta, target) ==
        doctest::Approx(c / v * 2.0).epsilon(1e-14));
}

TEST_CASE("kriging is linear in the data") {
  Rng rng(103);
  SiteSet s = random_field(7, rng);
  const ParamVector theta{0.1, 1.0, 0.25};
  const Point target{0.4, 0.6};
  const double base =
      simple_kriging(s, CorrelationFamily::Cauchy, theta, target);
  SiteSet scaled = s;
  for (double& z : scaled.data) z *= -3.0;
  CHECK(simple_kriging(scaled, CorrelationFamily::Cauchy, theta, target) ==
        doctest::Approx(-3.0 * base).epsilon(1e-10));

  SiteSet sum = s;
  Rng rng2(104);
  SiteSet other = random_field(7, rng2);
  for (std::size_t i = 0; i < 7; ++i) sum.data[i] = s.data[i] + other.data[i];
  other.coords = s.coords;
  CHECK(simple_kriging(sum, CorrelationFamily::Cauchy, theta, target) ==
        doctest::Approx(base + simple_kriging(other, CorrelationFamily::Cauchy,
                                              theta, target))
            .epsilon(1e-10));
}

TEST_CASE("kriging is invariant to reordering the sites") {
  Rng rng(105);
  const SiteSet s = random_field(9, rng);
  SiteSet rev;
  rev.coords.assign(s.coords.rbegin(), s.coords.rend());
  rev.data.assign(s.data.rbegin(), s.data.rend());
  const ParamVector theta{0.05, 1.2, 0.15};
  const Point target{0.7, 0.2};
  CHECK(simple_kriging(s, CorrelationFamily::Exponential, theta, target) ==
        doctest::Approx(simple_kriging(rev, CorrelationFamily::Exponential,
                                       theta, target))
            .epsilon(1e-11));
}

TEST_CASE("leave-one-out rmse: edge cases and subsampling") {
  const ParamVector theta{0.1, 1.0, 0.2};

  SiteSet one;
  one.coords = {{0.5, 0.5}};
  one.data = {-1.25};
  CHECK(loo_rmse(one, CorrelationFamily::Exponential, theta) == 1.25);

  Rng rng(200);
  const SiteSet s = random_field(12, rng);
  const double full = loo_rmse(s, CorrelationFamily::Exponential, theta);
  CHECK(full > 0.0);
  CHECK(std::isfinite(full));

  // The full set of folds as a "subsample" gives the same answer.
  Rng sub_rng(1);
  CHECK(loo_rmse(s, CorrelationFamily::Exponential, theta, 12, &sub_rng) == full);

  // A proper subsample is deterministic given the rng seed.
  Rng r1(9), r2(9);
  CHECK(loo_rmse(s, CorrelationFamily::Exponential, theta, 5, &r1) ==
        loo_rmse(s, CorrelationFamily::Exponential, theta, 5, &r2));
  CHECK_THROWS_AS(loo_rmse(s, CorrelationFamily::Exponential, theta, 5, nullptr),
                  std::invalid_argument);
}

TEST_CASE("loo rmse is unchanged by the thread count") {
  Rng rng(201);
  const SiteSet s = random_field(10, rng);
  const ParamVector theta{0.1, 1.0, 0.2};
  CHECK(loo_rmse(s, CorrelationFamily::Matern15, theta, 0, nullptr, 1) ==
        loo_rmse(s, CorrelationFamily::Matern15, theta, 0, nullptr, 4));
}

TEST_CASE("semivariogram of a constant field is identically zero") {
  Rng rng(300);
  SiteSet s = random_field(15, rng);
  for (double& z : s.data) z = 2.75;
  const VariogramEstimate est = empirical_semivariogram(s, 6, 1.0);
  REQUIRE(est.bin_center.size() == 6);
  for (std::size_t b = 0; b < 6; ++b) {
    if (est.count[b] == 0)
      CHECK(std::isnan(est.semivariance[b]));
    else
      CHECK(est.semivariance[b] == 0.0);
  }
}

TEST_CASE("two sites give a single-pair bin value") {
  SiteSet s;
  s.coords = {{0.0, 0.0}, {0.3, 0.4}};  // distance 0.5
  s.data = {1.0, 4.0};
  const VariogramEstimate est = empirical_semivariogram(s, 4, 1.0);
  // the pair lands in bin [0.5, 0.75): index 2
  CHECK(est.count[2] == 1);
  CHECK(est.semivariance[2] == doctest::Approx(9.0 / 2.0).epsilon(1e-14));
  CHECK(est.count[0] == 0);
  CHECK(std::isnan(est.semivariance[0]));
  CHECK(est.bin_center[0] == doctest::Approx(0.125).epsilon(1e-14));

  // pairs beyond max_lag are dropped
  const VariogramEstimate none = empirical_semivariogram(s, 4, 0.4);
  for (std::size_t b = 0; b < 4; ++b) CHECK(none.count[b] == 0);
}

TEST_CASE("iid noise has a flat semivariogram near its variance") {
  Rng rng(301);
  SiteSet s;
  const std::size_t n = 400;
  s.coords.resize(n);
  s.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.coords[i] = {rng.uniform(), rng.uniform()};
    s.data[i] = rng.normal();  // variance 1
  }
  const VariogramEstimate est = empirical_semivariogram(s, 5, 1.0);
  for (std::size_t b = 0; b < 5; ++b) {
    REQUIRE(est.count[b] > 1000);
    CHECK(est.semivariance[b] == doctest::Approx(1.0).epsilon(0.1));
  }
}

TEST_CASE("semivariance is invariant to shifting the data") {
  Rng rng(302);
  SiteSet s = random_field(20, rng);
  SiteSet shifted = s;
  for (double& z : shifted.data) z += 17.5;
  const VariogramEstimate a = empirical_semivariogram(s, 5, 0.8);
  const VariogramEstimate b = empirical_semivariogram(shifted, 5, 0.8);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(a.count[k] == b.count[k]);
    if (a.count[k] > 0)
      CHECK(a.semivariance[k] == doctest::Approx(b.semivariance[k]).epsilon(1e-9));
  }
}

TEST_CASE("model semivariogram: origin, sill, and monotone rise") {
  const ParamVector theta{0.2, 1.0, 0.1};
  CHECK(model_semivariogram(CorrelationFamily::Exponential, theta, 0.0) == 0.0);
  // jump to tau2 just off the origin
  CHECK(model_semivariogram(CorrelationFamily::Exponential, theta, 1e-12) ==
        doctest::Approx(0.2).epsilon(1e-6));
  // approaches tau2 + sigma2 far out
  CHECK(model_semivariogram(CorrelationFamily::Exponential, theta, 100.0) ==
        doctest::Approx(1.2).epsilon(1e-9));
  // at the practical range: tau2 + sigma2 (1 - exp(-3))
  CHECK(model_semivariogram(CorrelationFamily::Exponential, theta, 0.1) ==
        doctest::Approx(0.2 + (1.0 - std::exp(-3.0))).epsilon(1e-12));
  double prev = 0.0;
  for (int k = 1; k <= 50; ++k) {
    const double g =
        model_semivariogram(CorrelationFamily::Cauchy, theta, 0.01 * k);
    CHECK(g >= prev);
    prev = g;
  }
}
