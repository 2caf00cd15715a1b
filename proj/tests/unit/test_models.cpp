#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "geolik/models.hpp"
#include "geolik/rng.hpp"

using namespace geolik;

TEST_CASE("correlation is 1 at the origin for every family") {
  for (auto family : {CorrelationFamily::Exponential, CorrelationFamily::Matern15,
                      CorrelationFamily::Cauchy})
    CHECK(correlate(family, 0.0, 0.1) == 1.0);
}

TEST_CASE("practical-range parameterization: rho(range) is about 0.05") {
  // exponential: exp(-3)
  CHECK(correlate(CorrelationFamily::Exponential, 0.7, 0.7) ==
        doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
  // cauchy: 1 / (1 + 4.3588^2)
  CHECK(correlate(CorrelationFamily::Cauchy, 0.25, 0.25) ==
        doctest::Approx(1.0 / (1.0 + 4.3588 * 4.3588)).epsilon(1e-12));
  // matern15: exp(-4.7619) (1 + 4.7619)
  CHECK(correlate(CorrelationFamily::Matern15, 0.1, 0.1) ==
        doctest::Approx(std::exp(-4.7619) * (1.0 + 4.7619)).epsilon(1e-12));
}

TEST_CASE("covariance adds the nugget only at distance zero") {
  const ParamVector theta{0.1, 1.0, 0.1};
  for (auto family : {CorrelationFamily::Exponential, CorrelationFamily::Matern15,
                      CorrelationFamily::Cauchy}) {
    CHECK(covariance(family, 0.0, theta) == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(covariance(family, 1e-12, theta) < 1.05);
  }
  // matern15 pure-sill value at h = range
  CHECK(covariance(CorrelationFamily::Matern15, 0.1, {0.0, 1.0, 0.1}) ==
        doctest::Approx(std::exp(-4.7619) * (1.0 + 4.7619)).epsilon(1e-12));
}

TEST_CASE("correlation decays monotonically and vanishes at large distance") {
  Rng rng(101);
  for (auto family : {CorrelationFamily::Exponential, CorrelationFamily::Matern15,
                      CorrelationFamily::Cauchy}) {
    const double range = rng.uniform(0.05, 0.5);
    double prev = 1.0;
    for (int k = 1; k <= 200; ++k) {
      const double h = 0.02 * k;
      const double r = correlate(family, h, range);
      CHECK(r <= prev + 1e-15);
      CHECK(r > 0.0);
      prev = r;
    }
    CHECK(covariance(family, 1e6, {0.1, 1.0, 0.1}) < 1e-6);
  }
}

TEST_CASE("zero nugget makes covariance proportional to correlation") {
  Rng rng(7);
  const ParamVector theta{0.0, 1.7, 0.22};
  for (int k = 0; k < 50; ++k) {
    const double h = rng.uniform(0.0, 1.0);
    const auto family = [&] {
      switch (k % 3) {
        case 0:
          return CorrelationFamily::Exponential;
        case 1:
          return CorrelationFamily::Matern15;
        default:
          return CorrelationFamily::Cauchy;
      }
    }();
    CHECK(covariance(family, h, theta) ==
          doctest::Approx(theta.sigma2 * correlate(family, h, theta.range))
              .epsilon(1e-14));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(correlate(CorrelationFamily::Exponential, -0.1, 0.1),
                  std::domain_error);
  CHECK_THROWS_AS(correlate(CorrelationFamily::Exponential, 0.1, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(ParamVector({-0.1, 1.0, 0.1}).validate(), std::domain_error);
  CHECK_THROWS_AS(ParamVector({0.1, 0.0, 0.1}).validate(), std::domain_error);
  CHECK_THROWS_AS(ParamVector({0.1, 1.0, -1.0}).validate(), std::domain_error);
}

TEST_CASE("family tokens round-trip") {
  for (auto family : {CorrelationFamily::Exponential, CorrelationFamily::Matern15,
                      CorrelationFamily::Cauchy})
    CHECK(family_from_token(family_token(family)) == family);
  CHECK_THROWS_AS(family_from_token("gaussian"), std::invalid_argument);
}
