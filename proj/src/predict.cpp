#include "geolik/predict.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "geolik/dense.hpp"
#include "geolik/errors.hpp"
#include "geolik/likelihood.hpp"

namespace geolik {

namespace {

// Kriging weights applied to Z for one target.
double predict_with(const std::vector<double>& kinv_z, const SiteSet& sites,
                    CorrelationFamily family, const ParamVector& theta,
                    const Point& target) {
  double pred = 0.0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double h = euclidean_distance(sites.coords[i], target);
    pred += covariance(family, h, theta) * kinv_z[i];
  }
  return pred;
}

}  // namespace

double simple_kriging(const SiteSet& sites, CorrelationFamily family,
                      const ParamVector& theta, const Point& target) {
  if (!sites.has_data()) throw std::invalid_argument("site set has no data");
  sites.validate();
  sites.require_distinct();
  theta.validate();
  if (!std::isfinite(target.x) || !std::isfinite(target.y))
    throw std::invalid_argument("non-finite target");
  if (sites.size() == 0) return 0.0;  // zero-mean prior
  const CholFactor chol =
      cholesky(covariance_matrix(family, sites.coords, theta));
  const std::vector<double> kinv_z = solve_spd(chol, sites.data);
  return predict_with(kinv_z, sites, family, theta, target);
}

double loo_rmse(const SiteSet& sites, CorrelationFamily family,
                const ParamVector& theta, std::size_t subsample_size, Rng* rng,
                unsigned threads) {
  if (!sites.has_data()) throw std::invalid_argument("site set has no data");
  sites.validate();
  sites.require_distinct();
  theta.validate();
  const std::size_t n = sites.size();
  if (n == 1) return std::abs(sites.data[0]);  // empty predictor set

  std::vector<std::size_t> folds(n);
  std::iota(folds.begin(), folds.end(), 0);
  if (subsample_size > 0 && subsample_size < n) {
    if (!rng)
      throw std::invalid_argument("subsampled LOO needs an rng");
    for (std::size_t i = 0; i < subsample_size; ++i)
      std::swap(folds[i], folds[i + static_cast<std::size_t>(rng->index(n - i))]);
    folds.resize(subsample_size);
    std::sort(folds.begin(), folds.end());
  }

  std::vector<double> sqerr(folds.size(), 0.0);
  const auto run_fold = [&](std::size_t f) {
    const std::size_t k = folds[f];
    SiteSet rest;
    rest.coords.reserve(n - 1);
    rest.data.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      rest.coords.push_back(sites.coords[i]);
      rest.data.push_back(sites.data[i]);
    }
    const CholFactor chol =
        cholesky(covariance_matrix(family, rest.coords, theta));
    const std::vector<double> kinv_z = solve_spd(chol, rest.data);
    const double pred =
        predict_with(kinv_z, rest, family, theta, sites.coords[k]);
    const double e = sites.data[k] - pred;
    sqerr[f] = e * e;
  };

  if (threads <= 1) {
    for (std::size_t f = 0; f < folds.size(); ++f) run_fold(f);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned nt = std::min<unsigned>(threads, folds.size());
    for (unsigned t = 0; t < nt; ++t)
      pool.emplace_back([&] {
        for (std::size_t f = next.fetch_add(1); f < sqerr.size();
             f = next.fetch_add(1))
          run_fold(f);
      });
    for (auto& th : pool) th.join();
  }

  const double mse = std::accumulate(sqerr.begin(), sqerr.end(), 0.0) /
                     static_cast<double>(sqerr.size());
  return std::sqrt(mse);
}

VariogramEstimate empirical_semivariogram(const SiteSet& sites,
                                          std::size_t n_bins, double max_lag) {
  if (!sites.has_data()) throw std::invalid_argument("site set has no data");
  if (sites.size() < 2) throw std::invalid_argument("need at least 2 sites");
  if (n_bins < 1) throw std::invalid_argument("need at least 1 bin");
  if (!(max_lag > 0.0)) throw std::invalid_argument("max_lag must be > 0");
  sites.validate();

  const double width = max_lag / static_cast<double>(n_bins);
  VariogramEstimate est;
  est.bin_center.resize(n_bins);
  est.semivariance.assign(n_bins, 0.0);
  est.count.assign(n_bins, 0);
  for (std::size_t b = 0; b < n_bins; ++b)
    est.bin_center[b] = (static_cast<double>(b) + 0.5) * width;

  const std::size_t n = sites.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double h = euclidean_distance(sites.coords[i], sites.coords[j]);
      if (h <= 0.0 || h > max_lag) continue;
      std::size_t b = static_cast<std::size_t>(h / width);
      if (b >= n_bins) b = n_bins - 1;  // h == max_lag lands in the last bin
      const double d = sites.data[i] - sites.data[j];
      est.semivariance[b] += d * d;
      ++est.count[b];
    }
  for (std::size_t b = 0; b < n_bins; ++b)
    est.semivariance[b] = est.count[b] == 0
                              ? std::numeric_limits<double>::quiet_NaN()
                              : est.semivariance[b] /
                                    (2.0 * static_cast<double>(est.count[b]));
  return est;
}

double model_semivariogram(CorrelationFamily family, const ParamVector& theta,
                           double h) {
  if (h == 0.0) return 0.0;
  return theta.tau2 + theta.sigma2 * (1.0 - correlate(family, h, theta.range));
}

}  // namespace geolik
