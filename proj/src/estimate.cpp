#include "geolik/estimate.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <utility>
#include <vector>

#include "geolik/errors.hpp"
#include "geolik/partition.hpp"

namespace geolik {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}
}  // namespace

std::string MethodSpec::label() const {
  switch (kind) {
    case Kind::ML:
      return "ml";
    case Kind::PCL:
      return "pcl(ds=" + fmt(ds) + ")";
    case Kind::BiCL:
      return "bicl(ds=" + fmt(ds) + ",C=" + std::to_string(configs) + ")";
    case Kind::BCL:
      return "bcl(m=" + std::to_string(blocks) + ",t=" + fmt(block_threshold) + ")";
  }
  return "?";
}

MethodSpec MethodSpec::from_token(const std::string& token) {
  MethodSpec spec;
  if (token == "ml")
    spec.kind = Kind::ML;
  else if (token == "pcl")
    spec.kind = Kind::PCL;
  else if (token == "bicl")
    spec.kind = Kind::BiCL;
  else if (token == "bcl")
    spec.kind = Kind::BCL;
  else
    throw std::invalid_argument("unknown method: " + token);
  return spec;
}

ParamVector default_initial(const SiteSet& sites) {
  double var = 1.0;
  if (sites.has_data() && sites.size() > 1) {
    const double mean =
        std::accumulate(sites.data.begin(), sites.data.end(), 0.0) /
        static_cast<double>(sites.size());
    double ss = 0.0;
    for (double v : sites.data) ss += (v - mean) * (v - mean);
    var = ss / static_cast<double>(sites.size() - 1);
  }
  double diam = domain_diameter(sites);
  if (!(diam > 0.0)) diam = 1.0;
  return {0.05 * var, var, 0.1 * diam};
}

EstimateResult fit_method(const SiteSet& sites, CorrelationFamily family,
                          const MethodSpec& spec, Rng& rng,
                          const FitOptions& opts) {
  if (!sites.has_data()) throw std::invalid_argument("site set has no data");
  sites.validate();

  std::function<double(const ParamVector&)> raw;
  switch (spec.kind) {
    case MethodSpec::Kind::ML: {
      sites.require_distinct();
      raw = [&sites, family](const ParamVector& theta) {
        return full_loglik(sites, family, theta);
      };
      break;
    }
    case MethodSpec::Kind::PCL: {
      // Active pair list is theta-independent; precompute it once. A
      // nonpositive ds activates nothing.
      struct ActivePair {
        double h, zi, zj;
      };
      auto pairs = std::make_shared<std::vector<ActivePair>>();
      for (std::size_t i = 0; i + 1 < sites.size(); ++i)
        for (std::size_t j = i + 1; j < sites.size(); ++j) {
          const double h =
              euclidean_distance(sites.coords[i], sites.coords[j]);
          if (h < spec.ds)
            pairs->push_back({h, sites.data[i], sites.data[j]});
        }
      if (pairs->empty()) throw NoActivePairs("no site pair closer than ds");
      raw = [pairs, family](const ParamVector& theta) {
        double total = 0.0;
        for (const auto& p : *pairs)
          total += pcl_pair_term(p.zi, p.zj,
                                 correlate(family, p.h, theta.range), theta);
        return total;
      };
      break;
    }
    case MethodSpec::Kind::BiCL: {
      const auto ensemble = build_configuration_ensemble(sites, spec.configs, rng);
      auto terms = std::make_shared<std::vector<BiPairGeometry>>();
      for (const PairConfiguration& cfg : ensemble) {
        const std::size_t nb = cfg.blocks.size();
        for (std::size_t i = 0; i < nb; ++i)
          for (std::size_t j = 0; j < nb; ++j) {
            if (i == j) continue;
            if (!(euclidean_distance(sites.coords[cfg.blocks[i].a],
                                     sites.coords[cfg.blocks[j].a]) < spec.ds))
              continue;
            BiPairGeometry g;
            const Point& sia = sites.coords[cfg.blocks[i].a];
            const Point& sib = sites.coords[cfg.blocks[i].b];
            const Point& sja = sites.coords[cfg.blocks[j].a];
            const Point& sjb = sites.coords[cfg.blocks[j].b];
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
            terms->push_back(g);
          }
      }
      if (terms->empty())
        throw NoActivePairs("no block pair with a-sites closer than ds");
      raw = [terms, family](const ParamVector& theta) {
        double total = 0.0;
        for (const auto& g : *terms)
          total += bi_term_from_geometry(g, family, theta);
        return total;
      };
      break;
    }
    case MethodSpec::Kind::BCL: {
      sites.require_distinct();
      auto part = std::make_shared<BlockPartition>(
          build_cluster_blocks(sites, spec.blocks, rng));
      auto active = std::make_shared<std::vector<std::pair<std::size_t, std::size_t>>>();
      for (std::size_t i = 0; i + 1 < part->blocks.size(); ++i)
        for (std::size_t j = i + 1; j < part->blocks.size(); ++j)
          if (euclidean_distance(part->centroids[i], part->centroids[j]) <
              spec.block_threshold)
            active->emplace_back(i, j);
      if (active->empty())
        throw NoActivePairs("no block pair with centroids closer than threshold");
      raw = [part, active, &sites, family](const ParamVector& theta) {
        double total = 0.0;
        for (const auto& [i, j] : *active)
          total += bcl_pair_loglik(sites, part->blocks[i], part->blocks[j],
                                   family, theta);
        return total;
      };
      break;
    }
  }

  OptimOptions oo;
  oo.max_iterations = opts.max_iterations;
  oo.tolerance = opts.tolerance;
  oo.initial = opts.initial ? *opts.initial : default_initial(sites);
  const auto safe = [raw = std::move(raw)](const ParamVector& theta) {
    try {
      return raw(theta);
    } catch (const EvaluationInfeasible&) {
      return kNegInf;
    }
  };
  return nelder_mead_maximize(safe, oo);
}

}  // namespace geolik
