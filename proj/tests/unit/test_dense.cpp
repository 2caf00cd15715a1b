#include <cmath>
#include <vector>

#include "doctest.h"
#include "geolik/dense.hpp"
#include "geolik/errors.hpp"
#include "oracles.hpp"

using namespace geolik;

namespace {
SymMatrix from_mat(const oracles::Mat& m) {
  SymMatrix a(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) a.at(i, j) = m[i][j];
  return a;
}
}  // namespace

TEST_CASE("cholesky of the identity is the identity") {
  SymMatrix a(3);
  for (int i = 0; i < 3; ++i) a.at(i, i) = 1.0;
  const CholFactor l = cholesky(a);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(l.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-15));
  CHECK(log_det(l) == 0.0);
}

TEST_CASE("worked 2x2 factorization") {
  SymMatrix a(2);
  a.at(0, 0) = 4;
  a.at(1, 0) = 2;
  a.at(1, 1) = 3;
  const CholFactor l = cholesky(a);
  CHECK(l.at(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l.at(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(l.at(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(log_det(l) == doctest::Approx(std::log(8.0)).epsilon(1e-14));

  const auto x = solve_spd(l, std::vector<double>{4, 2});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("indefinite matrix is rejected") {
  SymMatrix a(2);
  a.at(0, 0) = 1;
  a.at(1, 0) = 2;
  a.at(1, 1) = 1;
  CHECK_THROWS_AS(cholesky(a), NotPositiveDefinite);
}

TEST_CASE("diagonal solve and scaling law of the log-determinant") {
  SymMatrix a(2);
  a.at(0, 0) = 2;
  a.at(1, 1) = 2;
  const CholFactor l = cholesky(a);
  const auto x = solve_spd(l, std::vector<double>{2, 4});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(2.0).epsilon(1e-15));

  const std::size_t n = 5;
  const double c = 3.5;
  SymMatrix ci(n);
  for (std::size_t i = 0; i < n; ++i) ci.at(i, i) = c;
  CHECK(log_det(cholesky(ci)) ==
        doctest::Approx(static_cast<double>(n) * std::log(c)).epsilon(1e-13));
}

TEST_CASE("log_det matches cofactor determinants on random SPD matrices") {
  Rng rng(2024);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng.index(8);
    const oracles::Mat m = oracles::random_spd(n, rng);
    const CholFactor l = cholesky(from_mat(m));
    const double brute = oracles::cofactor_det(m);
    CHECK(std::abs(std::exp(log_det(l)) - brute) <= 1e-8 * std::abs(brute));
  }
}

TEST_CASE("solve recovers random solutions and leaves small residuals") {
  Rng rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.index(7);
    const oracles::Mat m = oracles::random_spd(n, rng);
    std::vector<double> x_true(n);
    for (double& v : x_true) v = rng.uniform(-2.0, 2.0);
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rhs[i] += m[i][j] * x_true[j];

    const auto x = solve_spd(cholesky(from_mat(m)), rhs);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
      num = std::max(num, std::abs(x[i] - x_true[i]));
      den = std::max(den, std::abs(x_true[i]));
    }
    CHECK(num <= 1e-8 * std::max(den, 1.0));
  }
}

TEST_CASE("factor reproduces the source matrix") {
  Rng rng(123);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + rng.index(8);
    const oracles::Mat m = oracles::random_spd(n, rng);
    const CholFactor l = cholesky(from_mat(m));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(l.at(i, i) > 0.0);
      for (std::size_t j = 0; j <= i; ++j) {
        double s = 0;
        for (std::size_t k = 0; k <= j; ++k) s += l.at(i, k) * l.at(j, k);
        CHECK(std::abs(s - m[i][j]) <= 1e-10 * std::max(1.0, std::abs(m[i][j])));
      }
    }
  }
}

TEST_CASE("gaussian sampling: determinism and moments") {
  SymMatrix a(2);
  a.at(0, 0) = 4;
  a.at(1, 0) = 2;
  a.at(1, 1) = 3;
  const CholFactor l = cholesky(a);

  Rng r1(77), r2(77);
  const auto z1 = sample_gaussian(l, r1);
  const auto z2 = sample_gaussian(l, r2);
  CHECK(z1[0] == z2[0]);
  CHECK(z1[1] == z2[1]);

  // identity factor passes the raw normal draw through
  SymMatrix id(3);
  for (int i = 0; i < 3; ++i) id.at(i, i) = 1.0;
  Rng ra(5), rb(5);
  const auto draw = sample_gaussian(cholesky(id), ra);
  CHECK(draw[0] == rb.normal());

  // sample covariance over many draws approaches A (3-sigma moment check)
  const int n_draws = 100000;
  Rng rng(31415);
  double s00 = 0, s01 = 0, s11 = 0;
  for (int k = 0; k < n_draws; ++k) {
    const auto z = sample_gaussian(l, rng);
    s00 += z[0] * z[0];
    s01 += z[0] * z[1];
    s11 += z[1] * z[1];
  }
  s00 /= n_draws;
  s01 /= n_draws;
  s11 /= n_draws;
  // var(z0^2) = 2*16, var(z1^2) = 2*9, var(z0 z1) = 4*3 + 2^2
  CHECK(std::abs(s00 - 4.0) < 3.0 * std::sqrt(32.0 / n_draws));
  CHECK(std::abs(s11 - 3.0) < 3.0 * std::sqrt(18.0 / n_draws));
  CHECK(std::abs(s01 - 2.0) < 3.0 * std::sqrt(16.0 / n_draws));
}
