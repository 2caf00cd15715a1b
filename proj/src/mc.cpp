#include "geolik/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <thread>

#include "geolik/dense.hpp"
#include "geolik/errors.hpp"
#include "geolik/likelihood.hpp"
#include "json.hpp"

namespace geolik {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Runs fn(0..count-1), possibly on several workers; each index writes only
// its own result slots, so the output is independent of scheduling.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, count > 0 ? static_cast<unsigned>(count) : 1u);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& th : pool) th.join();
}

double det3(const std::array<std::array<double, 3>, 3>& g) {
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
         g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

std::array<std::array<double, 3>, 3> moment_matrix(
    std::span<const ParamVector> estimates, const ParamVector& truth) {
  std::array<std::array<double, 3>, 3> g{};
  for (const ParamVector& e : estimates) {
    const std::array<double, 3> d{e.tau2 - truth.tau2, e.sigma2 - truth.sigma2,
                                  e.range - truth.range};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g[i][j] += d[i] * d[j];
  }
  const double r = static_cast<double>(estimates.size());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[i][j] /= r;
  return g;
}

std::array<double, 3> as_array(const ParamVector& p) {
  return {p.tau2, p.sigma2, p.range};
}

SiteSet draw_sites(const StudyConfig& cfg, Rng& rng) {
  switch (cfg.sites.kind) {
    case SiteScheme::Kind::PerturbedGrid:
      return generate_perturbed_grid(cfg.n, rng, cfg.sites.spacing,
                                     cfg.sites.jitter);
    case SiteScheme::Kind::Uniform:
      return generate_uniform_sites(cfg.n, rng);
  }
  throw std::invalid_argument("invalid site scheme");
}

}  // namespace

void StudyConfig::validate() const {
  theta_true.validate();
  if (replicates < 2) throw std::invalid_argument("need at least 2 replicates");
  if (methods.empty()) throw std::invalid_argument("method list is empty");
  if (n < 2) throw std::invalid_argument("need at least 2 sites");
}

StudyResult run_study(const StudyConfig& cfg) {
  cfg.validate();
  const Rng base(cfg.seed);

  std::shared_ptr<const SiteSet> fixed_sites;
  std::shared_ptr<const CholFactor> fixed_factor;
  if (cfg.sites.fixed_sites) {
    Rng site_rng = base.substream(0);
    auto s = std::make_shared<SiteSet>(draw_sites(cfg, site_rng));
    s->require_distinct();
    fixed_factor = std::make_shared<CholFactor>(
        cholesky(covariance_matrix(cfg.family, s->coords, cfg.theta_true)));
    fixed_sites = std::move(s);
  }

  const std::size_t n_methods = cfg.methods.size();
  std::vector<std::uint64_t> method_keys(n_methods);
  for (std::size_t m = 0; m < n_methods; ++m)
    method_keys[m] = fnv1a(cfg.methods[m].label());

  struct ReplicateOutcome {
    bool ok = false;
    std::vector<ParamVector> theta;
    std::vector<std::size_t> iterations;
  };
  std::vector<ReplicateOutcome> outcomes(cfg.replicates);

  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
    ReplicateOutcome& out = outcomes[r];
    Rng rep = base.substream(r + 1);
    try {
      SiteSet sites;
      std::shared_ptr<const CholFactor> factor = fixed_factor;
      if (cfg.sites.fixed_sites) {
        sites = *fixed_sites;
      } else {
        Rng site_rng = rep.substream(0);
        sites = draw_sites(cfg, site_rng);
        sites.require_distinct();
        factor = std::make_shared<CholFactor>(cholesky(
            covariance_matrix(cfg.family, sites.coords, cfg.theta_true)));
      }
      Rng data_rng = rep.substream(1);
      sites.data = sample_gaussian(*factor, data_rng);

      out.theta.resize(n_methods);
      out.iterations.resize(n_methods);
      for (std::size_t m = 0; m < n_methods; ++m) {
        // Keyed on the method label so duplicate entries get identical
        // streams (and thus identical estimate columns).
        Rng fit_rng = rep.substream(2 + method_keys[m] % (UINT64_MAX - 2));
        const EstimateResult res =
            fit_method(sites, cfg.family, cfg.methods[m], fit_rng, cfg.fit);
        out.theta[m] = res.theta_hat;
        out.iterations[m] = res.iterations;
      }
      out.ok = true;
    } catch (const std::exception&) {
      out.ok = false;  // dropped for all methods (paired comparison)
    }
  });

  StudyResult result;
  result.method_labels.reserve(n_methods);
  for (const MethodSpec& m : cfg.methods) result.method_labels.push_back(m.label());
  result.estimates.assign(n_methods, {});
  result.iteration_counts.assign(n_methods, {});
  for (const ReplicateOutcome& out : outcomes) {
    if (!out.ok) {
      ++result.dropped;
      continue;
    }
    for (std::size_t m = 0; m < n_methods; ++m) {
      result.estimates[m].push_back(out.theta[m]);
      result.iteration_counts[m].push_back(out.iterations[m]);
    }
  }
  return result;
}

std::array<double, 3> relative_rrmse(std::span<const ParamVector> method_estimates,
                                     std::span<const ParamVector> ml_estimates,
                                     const ParamVector& theta_true) {
  if (method_estimates.size() != ml_estimates.size() || method_estimates.empty())
    throw std::invalid_argument("estimate lists must have equal nonzero length");
  const auto truth = as_array(theta_true);
  std::array<double, 3> out{};
  for (int p = 0; p < 3; ++p) {
    double ss_method = 0.0, ss_ml = 0.0;
    for (std::size_t k = 0; k < method_estimates.size(); ++k) {
      const double dm = as_array(method_estimates[k])[p] - truth[p];
      const double dl = as_array(ml_estimates[k])[p] - truth[p];
      ss_method += dm * dm;
      ss_ml += dl * dl;
    }
    out[p] = ss_method == 0.0
                 ? std::numeric_limits<double>::infinity()
                 : std::sqrt(ss_ml) / std::sqrt(ss_method);
  }
  return out;
}

double global_efficiency(std::span<const ParamVector> method_estimates,
                         std::span<const ParamVector> ml_estimates,
                         const ParamVector& theta_true) {
  if (method_estimates.size() != ml_estimates.size() || method_estimates.empty())
    throw std::invalid_argument("estimate lists must have equal nonzero length");
  const double det_ml = det3(moment_matrix(ml_estimates, theta_true));
  const double det_cl = det3(moment_matrix(method_estimates, theta_true));
  if (!(det_ml > 0.0) || !(det_cl > 0.0))
    throw SingularMoment("nonpositive moment-matrix determinant");
  // (|G_ML|^(1/2) / |G_CL|^(1/2))^(1/3)
  return std::pow(det_ml / det_cl, 1.0 / 6.0);
}

std::array<double, 3> parametric_bootstrap_with(const SiteSet& sites,
                                                CorrelationFamily family,
                                                const ParamVector& theta_hat,
                                                std::size_t B, Rng& rng,
                                                const Refitter& refit) {
  if (B < 2) throw std::invalid_argument("need at least 2 bootstrap replicates");
  sites.require_distinct();
  const CholFactor factor =
      cholesky(covariance_matrix(family, sites.coords, theta_hat));

  std::vector<ParamVector> estimates;
  estimates.reserve(B);
  for (std::size_t b = 0; b < B; ++b) {
    Rng rb = rng.substream(b);
    SiteSet sim;
    sim.coords = sites.coords;
    sim.data = sample_gaussian(factor, rb);
    try {
      estimates.push_back(refit(sim, rb));
    } catch (const std::exception&) {
      // failed refits are skipped; too many of them invalidate the run
    }
  }
  if (estimates.size() * 2 < B)
    throw std::runtime_error("more than half of the bootstrap refits failed");

  std::array<double, 3> mean{};
  for (const ParamVector& e : estimates)
    for (int p = 0; p < 3; ++p) mean[p] += as_array(e)[p];
  for (int p = 0; p < 3; ++p) mean[p] /= static_cast<double>(estimates.size());
  std::array<double, 3> se{};
  for (const ParamVector& e : estimates)
    for (int p = 0; p < 3; ++p) {
      const double d = as_array(e)[p] - mean[p];
      se[p] += d * d;
    }
  for (int p = 0; p < 3; ++p)
    se[p] = std::sqrt(se[p] / static_cast<double>(estimates.size() - 1));
  return se;
}

std::array<double, 3> parametric_bootstrap(const SiteSet& sites,
                                           CorrelationFamily family,
                                           const ParamVector& theta_hat,
                                           const MethodSpec& spec, std::size_t B,
                                           Rng& rng) {
  return parametric_bootstrap_with(
      sites, family, theta_hat, B, rng,
      [&spec, family](const SiteSet& sim, Rng& rb) {
        return fit_method(sim, family, spec, rb).theta_hat;
      });
}

StudyConfig StudyConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }

  StudyConfig cfg;
  try {
    cfg.family = family_from_token(j.at("family").get<std::string>());
    const auto& t = j.at("theta_true");
    cfg.theta_true = {t.at("tau2").get<double>(), t.at("sigma2").get<double>(),
                      t.at("range").get<double>()};
    cfg.n = j.at("n").get<std::size_t>();
    cfg.replicates = j.at("replicates").get<std::size_t>();
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.threads = j.value("threads", 0u);
    if (j.contains("sites")) {
      const auto& s = j["sites"];
      const std::string scheme = s.value("scheme", "perturbed_grid");
      if (scheme == "perturbed_grid")
        cfg.sites.kind = SiteScheme::Kind::PerturbedGrid;
      else if (scheme == "uniform")
        cfg.sites.kind = SiteScheme::Kind::Uniform;
      else
        throw DataError("unknown site scheme: " + scheme);
      cfg.sites.spacing = s.value("spacing", 0.03);
      cfg.sites.jitter = s.value("jitter", 0.01);
      cfg.sites.fixed_sites = s.value("fixed", true);
    }
    if (j.contains("fit")) {
      const auto& f = j["fit"];
      cfg.fit.max_iterations = f.value("max_iterations", std::size_t{10000});
      cfg.fit.tolerance = f.value("tolerance", 1e-16);
      if (f.contains("initial")) {
        const auto& i = f["initial"];
        cfg.fit.initial = ParamVector{i.at(0).get<double>(), i.at(1).get<double>(),
                                      i.at(2).get<double>()};
      }
    }
    for (const auto& mj : j.at("methods")) {
      MethodSpec spec = MethodSpec::from_token(mj.at("name").get<std::string>());
      spec.ds = mj.value("ds", spec.ds);
      spec.configs = mj.value("configs", spec.configs);
      spec.blocks = mj.value("blocks", spec.blocks);
      spec.block_threshold = mj.value("threshold", spec.block_threshold);
      cfg.methods.push_back(spec);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(path + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace geolik
