#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "geolik/errors.hpp"
#include "geolik/optim.hpp"

using namespace geolik;

namespace {
// Smooth, unimodal in the log coordinates, maximized at target.
double log_quadratic(const ParamVector& theta, const ParamVector& target) {
  const double a = std::log(theta.tau2) - std::log(target.tau2);
  const double b = std::log(theta.sigma2) - std::log(target.sigma2);
  const double c = std::log(theta.range) - std::log(target.range);
  return -(a * a + 2.0 * b * b + 0.5 * c * c);
}
}  // namespace

TEST_CASE("recovers the maximizer of a smooth unimodal objective") {
  const ParamVector target{0.1, 1.0, 0.2};
  OptimOptions opts;
  opts.initial = {0.3, 0.4, 0.05};
  const EstimateResult res = nelder_mead_maximize(
      [&](const ParamVector& th) { return log_quadratic(th, target); }, opts);

  CHECK(res.converged);
  CHECK(res.theta_hat.tau2 == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(res.theta_hat.sigma2 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.theta_hat.range == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(res.objective_value == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(res.iterations <= opts.max_iterations);
}

TEST_CASE("a constant objective converges immediately") {
  OptimOptions opts;
  opts.initial = {0.1, 1.0, 0.1};
  const EstimateResult res =
      nelder_mead_maximize([](const ParamVector&) { return 3.5; }, opts);
  CHECK(res.converged);
  CHECK(res.iterations < 10);
  CHECK(res.objective_value == 3.5);
}

TEST_CASE("best value is monotone along the trace") {
  const ParamVector target{0.05, 2.0, 0.3};
  OptimOptions opts;
  opts.initial = {0.5, 0.5, 0.05};
  std::vector<double> trace;
  opts.on_iteration = [&](std::size_t, double best) { trace.push_back(best); };
  nelder_mead_maximize(
      [&](const ParamVector& th) { return log_quadratic(th, target); }, opts);

  REQUIRE(!trace.empty());
  for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] >= trace[k - 1]);
}

TEST_CASE("estimates stay in the positive orthant even for flat directions") {
  // Objective ignores tau2: the estimate must still report a positive value.
  OptimOptions opts;
  opts.initial = {0.2, 1.0, 0.1};
  const EstimateResult res = nelder_mead_maximize(
      [](const ParamVector& th) {
        const double b = std::log(th.sigma2);
        const double c = std::log(th.range) - std::log(0.1);
        return -(b * b + c * c);
      },
      opts);
  CHECK(res.theta_hat.tau2 > 0.0);
  CHECK(res.theta_hat.sigma2 > 0.0);
  CHECK(res.theta_hat.range > 0.0);
  CHECK(res.theta_hat.sigma2 == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("-inf rejections steer the search without breaking it") {
  // Feasible region sigma2 < 2; maximum at sigma2 = 1 inside it.
  OptimOptions opts;
  opts.initial = {0.1, 0.5, 0.1};
  const EstimateResult res = nelder_mead_maximize(
      [](const ParamVector& th) {
        if (th.sigma2 >= 2.0) return -std::numeric_limits<double>::infinity();
        const double b = std::log(th.sigma2);
        return -b * b;
      },
      opts);
  CHECK(res.converged);
  CHECK(res.theta_hat.sigma2 == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("an infeasible starting point is rejected up front") {
  OptimOptions opts;
  opts.initial = {0.1, 1.0, 0.1};
  CHECK_THROWS_AS(nelder_mead_maximize(
                      [](const ParamVector&) {
                        return -std::numeric_limits<double>::infinity();
                      },
                      opts),
                  InfeasibleStart);
  CHECK_THROWS_AS(nelder_mead_maximize(
                      [](const ParamVector&) {
                        return std::numeric_limits<double>::quiet_NaN();
                      },
                      opts),
                  InfeasibleStart);
}

TEST_CASE("iteration cap is honored") {
  // A slowly improving objective with a far-away optimum and a tight budget.
  const ParamVector target{1e-6, 1e6, 1e-6};
  OptimOptions opts;
  opts.initial = {0.1, 1.0, 0.1};
  opts.max_iterations = 5;
  const EstimateResult res = nelder_mead_maximize(
      [&](const ParamVector& th) { return log_quadratic(th, target); }, opts);
  CHECK(res.iterations <= 5);
  CHECK(!res.converged);
}
