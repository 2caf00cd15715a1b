#pragma once

#include <cstddef>
#include <functional>

#include "geolik/models.hpp"

namespace geolik {

struct OptimOptions {
  std::size_t max_iterations = 10000;
  double tolerance = 1e-16;  // simplex value spread, relative to 1 + |best|
  ParamVector initial;
  // Optional trace: called once per iteration with the best objective value.
  std::function<void(std::size_t iteration, double best_value)> on_iteration;
};

struct EstimateResult {
  ParamVector theta_hat;
  double objective_value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Maximizes the objective over theta with a Nelder-Mead simplex (reflection
// 1, expansion 2, contraction 1/2, shrink 1/2) on the log-transformed
// coordinates (log tau2, log sigma2, log range); tau2 is floored at 1e-12.
// The objective may return -inf to reject a trial point. Throws
// InfeasibleStart when it is not finite at opts.initial.
EstimateResult nelder_mead_maximize(
    const std::function<double(const ParamVector&)>& objective,
    const OptimOptions& opts);

}  // namespace geolik
