#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "geolik/geom.hpp"
#include "geolik/likelihood.hpp"
#include "geolik/optim.hpp"
#include "geolik/rng.hpp"

namespace geolik {

// One estimation method with its weighting/blocking choices.
struct MethodSpec {
  enum class Kind { ML, PCL, BiCL, BCL };
  Kind kind = Kind::ML;
  double ds = 0.1;                // weight threshold (pcl, bicl)
  std::size_t configs = 5;        // configuration count (bicl)
  std::size_t blocks = 16;        // cluster count (bcl)
  double block_threshold = 0.3;   // centroid threshold (bcl)

  // e.g. "ml", "pcl(ds=0.1)", "bicl(ds=0.1,C=5)", "bcl(m=16,t=0.3)"
  std::string label() const;
  // Parses the CLI token `ml | pcl | bicl | bcl`; other fields keep their
  // defaults and are set from flags. Throws std::invalid_argument.
  static MethodSpec from_token(const std::string& token);
};

struct FitOptions {
  std::size_t max_iterations = 10000;
  double tolerance = 1e-16;
  // Default starting point: (0.05, sample variance, 0.1 * domain diameter).
  std::optional<ParamVector> initial;
};

// Builds any required partitions from the rng, precomputes the active pair
// lists, wraps infeasible evaluations as -inf, and maximizes. Throws
// NoActivePairs when the weighting leaves the objective empty and
// InfeasibleStart when the starting point cannot be evaluated.
EstimateResult fit_method(const SiteSet& sites, CorrelationFamily family,
                          const MethodSpec& spec, Rng& rng,
                          const FitOptions& opts = {});

ParamVector default_initial(const SiteSet& sites);

}  // namespace geolik
