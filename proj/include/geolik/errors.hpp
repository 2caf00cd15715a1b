#pragma once

#include <stdexcept>
#include <string>

namespace geolik {

// Covariance matrix (or a 2x2/4x4 conditioning block) is not positive
// definite; usually an invalid parameter vector or duplicate sites.
struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A composite-likelihood term cannot be evaluated at this parameter value
// (degenerate conditional covariance). Optimizers treat this as -inf.
struct EvaluationInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every 0/1 weight in the objective is zero; the threshold is too small
// for the given geometry.
struct NoActivePairs : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The objective is infeasible at the optimizer's starting point.
struct InfeasibleStart : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Monte Carlo moment matrix has nonpositive determinant.
struct SingularMoment : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file (CSV/JSON).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace geolik
