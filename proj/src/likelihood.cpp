#include "geolik/likelihood.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "geolik/errors.hpp"

namespace geolik {

SymMatrix covariance_matrix(CorrelationFamily family,
                            std::span<const Point> coords,
                            const ParamVector& theta) {
  theta.validate();
  const std::size_t n = coords.size();
  SymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j)
      a.at(i, j) = theta.sigma2 * correlate(family,
                                            euclidean_distance(coords[i], coords[j]),
                                            theta.range);
    a.at(i, i) = theta.sigma2 + theta.tau2;
  }
  return a;
}

namespace {

// -1/2 (log det + z' A^-1 z) for the given coordinates/data.
double gaussian_loglik(CorrelationFamily family, std::span<const Point> coords,
                       std::span<const double> z, const ParamVector& theta) {
  const SymMatrix a = covariance_matrix(family, coords, theta);
  CholFactor chol = [&] {
    try {
      return cholesky(a);
    } catch (const NotPositiveDefinite& e) {
      throw EvaluationInfeasible(e.what());
    }
  }();
  const std::vector<double> x = solve_spd(chol, z);
  double quad = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) quad += z[i] * x[i];
  return -0.5 * (log_det(chol) + quad);
}

}  // namespace

double full_loglik(const SiteSet& sites, CorrelationFamily family,
                   const ParamVector& theta) {
  if (!sites.has_data()) throw std::invalid_argument("site set has no data");
  sites.validate();
  return gaussian_loglik(family, sites.coords, sites.data, theta);
}

double pcl_pair_term(double zi, double zj, double rho, const ParamVector& theta) {
  const double v = theta.sigma2 + theta.tau2;
  const double c = theta.sigma2 * rho;
  const double det = v * v - c * c;
  if (!(det > 0.0))
    throw EvaluationInfeasible("degenerate bivariate covariance in pair term");
  const double quad = (v * (zi * zi + zj * zj) - 2.0 * c * zi * zj) / det;
  return -0.5 * (std::log(det) + quad);
}

double pcl_objective(const SiteSet& sites, CorrelationFamily family,
                     const ParamVector& theta, double ds) {
  if (!sites.has_data()) throw std::invalid_argument("site set has no data");
  if (!(ds > 0.0)) throw std::invalid_argument("ds must be > 0");
  theta.validate();
  const std::size_t n = sites.size();
  double total = 0.0;
  std::size_t active = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double h = euclidean_distance(sites.coords[i], sites.coords[j]);
      if (!(h < ds)) continue;
      total += pcl_pair_term(sites.data[i], sites.data[j],
                             correlate(family, h, theta.range), theta);
      ++active;
    }
  }
  if (active == 0) throw NoActivePairs("no site pair closer than ds");
  return total;
}

double bi_term_from_geometry(const BiPairGeometry& g, CorrelationFamily family,
                             const ParamVector& theta,
                             BiTermIntermediates* intermediates) {
  const double phi = theta.range;
  const double rho_aa = correlate(family, g.h_aa, phi);
  const double rho_ab = correlate(family, g.h_ab, phi);
  const double rho_ba = correlate(family, g.h_ba, phi);
  const double rho_bb = correlate(family, g.h_bb, phi);
  const double rho_ii = correlate(family, g.h_ii, phi);
  const double rho_jj = correlate(family, g.h_jj, phi);
  const double zia = g.zia;
  const double zib = g.zib;
  const double zja = g.zja;
  const double zjb = g.zjb;

  const double s2 = theta.sigma2;
  const double v = s2 + theta.tau2;
  const double det_j = v * v - (s2 * rho_jj) * (s2 * rho_jj);
  if (!(det_j > kEtaFloor))
    throw EvaluationInfeasible("degenerate conditioning block");

  BiTermIntermediates q;
  q.psi11 = s2 * (v * rho_aa - s2 * rho_ab * rho_jj) / det_j;
  q.psi12 = s2 * (v * rho_ab - s2 * rho_aa * rho_jj) / det_j;
  q.psi21 = s2 * (v * rho_ba - s2 * rho_bb * rho_jj) / det_j;
  q.psi22 = s2 * (v * rho_bb - s2 * rho_ba * rho_jj) / det_j;
  q.mu1 = q.psi11 * zja + q.psi12 * zjb;
  q.mu2 = q.psi21 * zja + q.psi22 * zjb;
  q.xi11 = theta.tau2 + s2 * (1.0 - q.psi11 * rho_aa - q.psi12 * rho_ab);
  q.xi12 = s2 * (rho_ii - q.psi11 * rho_ba - q.psi12 * rho_bb);
  q.xi22 = theta.tau2 + s2 * (1.0 - q.psi21 * rho_ba - q.psi22 * rho_bb);
  q.eta = q.xi11 * q.xi22 - q.xi12 * q.xi12;
  if (!(q.eta > kEtaFloor))
    throw EvaluationInfeasible("degenerate conditional covariance");

  const double ra = zia - q.mu1;
  const double rb = zib - q.mu2;
  const double value =
      -0.5 * (std::log(q.eta) +
              (q.xi22 * ra * ra + q.xi11 * rb * rb - 2.0 * q.xi12 * ra * rb) /
                  q.eta);
  if (intermediates) *intermediates = q;
  return value;
}

double bi_term(const SiteSet& sites, const PairConfiguration& cfg, std::size_t i,
               std::size_t j, CorrelationFamily family, const ParamVector& theta,
               BiTermIntermediates* intermediates) {
  if (i == j || i >= cfg.blocks.size() || j >= cfg.blocks.size())
    throw std::out_of_range("invalid block indices");
  theta.validate();

  const Point& sia = sites.coords[cfg.blocks[i].a];
  const Point& sib = sites.coords[cfg.blocks[i].b];
  const Point& sja = sites.coords[cfg.blocks[j].a];
  const Point& sjb = sites.coords[cfg.blocks[j].b];
  BiPairGeometry g;
  g.h_aa = euclidean_distance(sia, sja);
  g.h_ab = euclidean_distance(sia, sjb);
  g.h_ba = euclidean_distance(sib, sja);
  g.h_bb = euclidean_distance(sib, sjb);
  g.h_ii = euclidean_distance(sia, sib);
  g.h_jj = euclidean_distance(sja, sjb);
  g.zia = sites.data[cfg.blocks[i].a];
  g.zib = sites.data[cfg.blocks[i].b];
  g.zja = sites.data[cfg.blocks[j].a];
  g.zjb = sites.data[cfg.blocks[j].b];
  return bi_term_from_geometry(g, family, theta, intermediates);
}

double bi_cl_objective(std::span<const PairConfiguration> ensemble,
                       const SiteSet& sites, CorrelationFamily family,
                       const ParamVector& theta, double ds) {
  if (ensemble.empty()) throw std::invalid_argument("empty configuration ensemble");
  if (!sites.has_data()) throw std::invalid_argument("site set has no data");
  if (!(ds > 0.0)) throw std::invalid_argument("ds must be > 0");
  theta.validate();

  double total = 0.0;
  std::size_t active = 0;
  for (const PairConfiguration& cfg : ensemble) {
    const std::size_t nb = cfg.blocks.size();
    for (std::size_t i = 0; i < nb; ++i) {
      const Point& ai = sites.coords[cfg.blocks[i].a];
      for (std::size_t j = 0; j < nb; ++j) {
        if (j == i) continue;
        if (!(euclidean_distance(ai, sites.coords[cfg.blocks[j].a]) < ds)) continue;
        total += bi_term(sites, cfg, i, j, family, theta);
        ++active;
      }
    }
  }
  if (active == 0) throw NoActivePairs("no block pair with a-sites closer than ds");
  return total;
}

double bcl_pair_loglik(const SiteSet& sites, std::span<const std::size_t> block_i,
                       std::span<const std::size_t> block_j,
                       CorrelationFamily family, const ParamVector& theta) {
  if (block_i.empty() || block_j.empty())
    throw std::invalid_argument("empty block");
  std::vector<Point> coords;
  std::vector<double> z;
  coords.reserve(block_i.size() + block_j.size());
  z.reserve(coords.capacity());
  for (std::size_t k : block_i) {
    coords.push_back(sites.coords[k]);
    z.push_back(sites.data[k]);
  }
  for (std::size_t k : block_j) {
    coords.push_back(sites.coords[k]);
    z.push_back(sites.data[k]);
  }
  return gaussian_loglik(family, coords, z, theta);
}

double bcl_objective(const BlockPartition& partition, const SiteSet& sites,
                     CorrelationFamily family, const ParamVector& theta,
                     double center_threshold) {
  const std::size_t m = partition.blocks.size();
  if (m < 2) throw std::invalid_argument("need at least 2 blocks");
  double total = 0.0;
  std::size_t active = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!block_weight(partition, i, j, center_threshold)) continue;
      total += bcl_pair_loglik(sites, partition.blocks[i], partition.blocks[j],
                               family, theta);
      ++active;
    }
  }
  if (active == 0)
    throw NoActivePairs("no block pair with centroids closer than threshold");
  return total;
}

}  // namespace geolik
