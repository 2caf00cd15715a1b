#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "geolik/geom.hpp"
#include "geolik/models.hpp"
#include "geolik/rng.hpp"

namespace geolik {

// Zero-mean simple kriging predictor c' K^-1 Z. The cross-covariance to a
// target coinciding exactly with a data site includes the nugget (the
// predictor then returns the observed value).
double simple_kriging(const SiteSet& sites, CorrelationFamily family,
                      const ParamVector& theta, const Point& target);

// Leave-one-out RMSE: each site is predicted from the others by simple
// kriging. n = 1 degenerates to a zero prediction (RMSE = |Z_1|). When
// subsample_size is in (0, n), only that many randomly chosen folds enter
// the average (for large n).
double loo_rmse(const SiteSet& sites, CorrelationFamily family,
                const ParamVector& theta, std::size_t subsample_size = 0,
                Rng* rng = nullptr, unsigned threads = 1);

struct VariogramEstimate {
  std::vector<double> bin_center;    // strictly increasing
  std::vector<double> semivariance;  // NaN marks an empty bin
  std::vector<std::size_t> count;
};

// Classical binned estimator gamma(b) = sum (Zi - Zj)^2 / (2 N_b) over
// pairs whose distance falls in bin b; equal-width bins on (0, max_lag],
// zero-distance pairs excluded.
VariogramEstimate empirical_semivariogram(const SiteSet& sites,
                                          std::size_t n_bins, double max_lag);

// tau2 + sigma2 (1 - rho(h)) for h > 0; 0 at h = 0.
double model_semivariogram(CorrelationFamily family, const ParamVector& theta,
                           double h);

}  // namespace geolik
