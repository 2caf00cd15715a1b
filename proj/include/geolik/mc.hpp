#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "geolik/estimate.hpp"
#include "geolik/geom.hpp"
#include "geolik/models.hpp"
#include "geolik/rng.hpp"

namespace geolik {

// How the study draws its observation sites.
struct SiteScheme {
  enum class Kind { PerturbedGrid, Uniform } kind = Kind::PerturbedGrid;
  double spacing = 0.03;
  double jitter = 0.01;
  // One site draw shared by all replicates (default) vs. a fresh draw each.
  bool fixed_sites = true;
};

struct StudyConfig {
  CorrelationFamily family = CorrelationFamily::Exponential;
  ParamVector theta_true{0.1, 1.0, 0.1};
  std::size_t n = 500;
  SiteScheme sites;
  std::vector<MethodSpec> methods;
  std::size_t replicates = 100;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
  FitOptions fit;

  void validate() const;  // throws std::invalid_argument
  static StudyConfig from_json_file(const std::string& path);
};

struct StudyResult {
  std::vector<std::string> method_labels;
  // estimates[m][k]: method m, kept replicate k (same k across methods).
  std::vector<std::vector<ParamVector>> estimates;
  std::vector<std::vector<std::size_t>> iteration_counts;  // aligned with estimates
  std::size_t dropped = 0;  // replicates dropped for all methods (paired)
};

// Simulates, fits every method per replicate, drops failed replicates for
// all methods. Deterministic given cfg.seed; replicates use independent
// substreams.
StudyResult run_study(const StudyConfig& cfg);

// Per parameter (tau2, sigma2, range): RMSE_ML / RMSE_method over replicates
// against the truth. A ratio below 1 means the method is worse than ML.
// Returns +inf for a parameter whose method RMSE is exactly zero.
std::array<double, 3> relative_rrmse(std::span<const ParamVector> method_estimates,
                                     std::span<const ParamVector> ml_estimates,
                                     const ParamVector& theta_true);

// Determinant-ratio statistic (|G_ML|^(1/2) / |G_CL|^(1/2))^(1/3) with
// G = R^-1 sum (theta_hat - theta)(theta_hat - theta)'. Throws
// SingularMoment when either determinant is numerically nonpositive.
double global_efficiency(std::span<const ParamVector> method_estimates,
                         std::span<const ParamVector> ml_estimates,
                         const ParamVector& theta_true);

// Refits B datasets simulated from theta_hat on the same sites; returns the
// element-wise sample standard deviations of the estimates. Requires at
// least B/2 successful refits.
std::array<double, 3> parametric_bootstrap(const SiteSet& sites,
                                           CorrelationFamily family,
                                           const ParamVector& theta_hat,
                                           const MethodSpec& spec, std::size_t B,
                                           Rng& rng);

// Test seam: same protocol with an arbitrary refitter.
using Refitter = std::function<ParamVector(const SiteSet& simulated, Rng& rng)>;
std::array<double, 3> parametric_bootstrap_with(const SiteSet& sites,
                                                CorrelationFamily family,
                                                const ParamVector& theta_hat,
                                                std::size_t B, Rng& rng,
                                                const Refitter& refit);

}  // namespace geolik
