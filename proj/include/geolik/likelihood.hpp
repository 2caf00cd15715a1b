#pragma once

#include <cstddef>
#include <span>

#include "geolik/dense.hpp"
#include "geolik/geom.hpp"
#include "geolik/models.hpp"
#include "geolik/partition.hpp"

namespace geolik {

// All objectives omit the -(dim/2) log(2 pi) constants throughout; the
// bi-term/dense identity still holds exactly because they cancel.

// Underflow guard for conditional determinants; at or below this a term is
// reported as EvaluationInfeasible.
inline constexpr double kEtaFloor = 1e-300;

// Covariance matrix sigma2 R + tau2 I for the given coordinates.
SymMatrix covariance_matrix(CorrelationFamily family,
                            std::span<const Point> coords,
                            const ParamVector& theta);

// Full Gaussian log-likelihood -1/2 (log det + quadratic form).
// Throws EvaluationInfeasible when the covariance is not positive definite.
double full_loglik(const SiteSet& sites, CorrelationFamily family,
                   const ParamVector& theta);

// One pairwise term: the bivariate Gaussian log-density of (zi, zj) with
// marginal variance sigma2 + tau2 and covariance sigma2 * rho.
double pcl_pair_term(double zi, double zj, double rho, const ParamVector& theta);

// Pairwise composite likelihood: sum of pcl_pair_term over unordered site
// pairs closer than ds. Matrix-free. Throws NoActivePairs when every
// weight is zero.
double pcl_objective(const SiteSet& sites, CorrelationFamily family,
                     const ParamVector& theta, double ds);

// Conditioning coefficients and conditional moments of Z_i | Z_j for a pair
// of two-site blocks.
struct BiTermIntermediates {
  double psi11 = 0, psi12 = 0, psi21 = 0, psi22 = 0;
  double mu1 = 0, mu2 = 0;
  double xi11 = 0, xi12 = 0, xi22 = 0;
  double eta = 0;
};

// Site geometry and data of one ordered pair of two-site blocks: the four
// cross distances, the two within-block distances, and the four data values.
struct BiPairGeometry {
  double h_aa = 0, h_ab = 0, h_ba = 0, h_bb = 0;  // block i site to block j site
  double h_ii = 0, h_jj = 0;                      // within blocks i and j
  double zia = 0, zib = 0, zja = 0, zjb = 0;
};

// Conditional log-density of block i given block j, in closed form from the
// six pairwise correlations; no matrix operations.
double bi_term_from_geometry(const BiPairGeometry& g, CorrelationFamily family,
                             const ParamVector& theta,
                             BiTermIntermediates* intermediates = nullptr);

// Convenience wrapper gathering the geometry from a configuration.
// Optionally reports the intermediates.
double bi_term(const SiteSet& sites, const PairConfiguration& cfg, std::size_t i,
               std::size_t j, CorrelationFamily family, const ParamVector& theta,
               BiTermIntermediates* intermediates = nullptr);

// Bi-conditional likelihood: sum over configurations and ordered block
// pairs (i, j), i != j, of pair_weight * bi_term. Matrix-free.
double bi_cl_objective(std::span<const PairConfiguration> ensemble,
                       const SiteSet& sites, CorrelationFamily family,
                       const ParamVector& theta, double ds);

// Joint log-likelihood of the data in blocks b_i and b_j (dense path).
double bcl_pair_loglik(const SiteSet& sites, std::span<const std::size_t> block_i,
                       std::span<const std::size_t> block_j,
                       CorrelationFamily family, const ParamVector& theta);

// Block composite likelihood: weighted sum of bcl_pair_loglik over unordered
// block pairs whose centroids are closer than center_threshold.
double bcl_objective(const BlockPartition& partition, const SiteSet& sites,
                     CorrelationFamily family, const ParamVector& theta,
                     double center_threshold);

}  // namespace geolik
