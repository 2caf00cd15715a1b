// geolik: simulation, estimation, Monte Carlo studies, bootstrap, kriging,
// variograms, and timing benchmarks for isotropic Gaussian random fields.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "geolik/dense.hpp"
#include "geolik/errors.hpp"
#include "geolik/estimate.hpp"
#include "geolik/geom.hpp"
#include "geolik/likelihood.hpp"
#include "geolik/mc.hpp"
#include "geolik/models.hpp"
#include "geolik/partition.hpp"
#include "geolik/predict.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace geolik;

namespace {

// Exit codes: 0 success, 2 config/flag error, 3 data error,
// 4 numerical infeasibility, 5 no active pairs.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitNoActivePairs = 5;

class PhaseTimer {
 public:
  void start(const std::string& name) {
    stop();
    current_ = name;
    t0_ = std::chrono::steady_clock::now();
  }
  void stop() {
    if (current_.empty()) return;
    const auto dt = std::chrono::steady_clock::now() - t0_;
    seconds_[current_] +=
        std::chrono::duration_cast<std::chrono::duration<double>>(dt).count();
    current_.clear();
  }
  json to_json() {
    stop();
    json j = json::object();
    for (const auto& [k, v] : seconds_) j[k] = v;
    return j;
  }

 private:
  std::map<std::string, double> seconds_;
  std::string current_;
  std::chrono::steady_clock::time_point t0_;
};

std::uint64_t resolve_seed(std::uint64_t flag_seed, bool seed_set) {
  if (seed_set) return flag_seed;
  if (const char* env = std::getenv("GEOLIK_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& options, std::uint64_t seed,
                    const json& inputs, const json& outputs, PhaseTimer& timer) {
  json m;
  m["command"] = command;
  m["options"] = options;
  m["seed"] = seed;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  m["timings_seconds"] = timer.to_json();
  std::ofstream f(out_dir / "run_manifest.json");
  f << m.dump(2) << "\n";
}

json theta_json(const ParamVector& t) {
  return {{"tau2", t.tau2}, {"sigma2", t.sigma2}, {"range", t.range}};
}

ParamVector parse_theta(const std::string& csv) {
  double a, b, c;
  if (std::sscanf(csv.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
    throw CLI::ValidationError("expected tau2,sigma2,range");
  return {a, b, c};
}

struct MethodFlags {
  std::string method = "ml";
  double ds = 0.1;
  std::size_t configs = 5;
  std::size_t blocks = 16;
  double block_threshold = 0.3;

  void attach(CLI::App* cmd) {
    cmd->add_option("--method", method, "ml|pcl|bicl|bcl")
        ->check(CLI::IsMember({"ml", "pcl", "bicl", "bcl"}));
    cmd->add_option("--ds", ds, "weight threshold for pcl/bicl");
    cmd->add_option("--configs", configs, "configuration count for bicl");
    cmd->add_option("--blocks", blocks, "cluster count for bcl");
    cmd->add_option("--block-threshold", block_threshold,
                    "centroid distance threshold for bcl");
  }
  MethodSpec spec() const {
    MethodSpec s = MethodSpec::from_token(method);
    s.ds = ds;
    s.configs = configs;
    s.blocks = blocks;
    s.block_threshold = block_threshold;
    return s;
  }
};

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
}

// ---- subcommand implementations ----

int cmd_simulate(const std::string& out_dir, std::size_t n,
                 const std::string& family_tok, const ParamVector& theta,
                 std::uint64_t seed, const std::string& scheme) {
  PhaseTimer timer;
  timer.start("simulate");
  const CorrelationFamily family = family_from_token(family_tok);
  theta.validate();
  Rng rng(seed);
  Rng site_rng = rng.substream(0);
  SiteSet sites = scheme == "uniform"
                      ? generate_uniform_sites(n, site_rng)
                      : generate_perturbed_grid(n, site_rng);
  sites.require_distinct();
  const CholFactor chol =
      cholesky(covariance_matrix(family, sites.coords, theta));
  Rng data_rng = rng.substream(1);
  sites.data = sample_gaussian(chol, data_rng);
  ensure_dir(out_dir);
  write_site_csv((fs::path(out_dir) / "data.csv").string(), sites);
  timer.stop();
  write_manifest(out_dir, "simulate",
                 {{"n", n},
                  {"family", family_tok},
                  {"theta", theta_json(theta)},
                  {"scheme", scheme}},
                 seed, json::object(), {{"data", "data.csv"}}, timer);
  return kExitOk;
}

int cmd_estimate(const std::string& data_path, const std::string& out_dir,
                 const std::string& family_tok, const MethodFlags& mf,
                 std::uint64_t seed, std::size_t max_iter, double tol,
                 const std::string& init_csv) {
  PhaseTimer timer;
  timer.start("load");
  const CorrelationFamily family = family_from_token(family_tok);
  SiteSet sites = read_site_csv(data_path);
  const double subtracted_mean = mean_center(sites);

  timer.start("fit");
  FitOptions opts;
  opts.max_iterations = max_iter;
  opts.tolerance = tol;
  if (!init_csv.empty()) opts.initial = parse_theta(init_csv);
  Rng rng = Rng(seed).substream(7);
  const EstimateResult res = fit_method(sites, family, mf.spec(), rng, opts);

  timer.start("write");
  ensure_dir(out_dir);
  json out;
  out["method"] = mf.spec().label();
  out["family"] = family_tok;
  out["n"] = sites.size();
  out["subtracted_mean"] = subtracted_mean;
  out["theta_hat"] = theta_json(res.theta_hat);
  out["objective_value"] = res.objective_value;
  out["iterations"] = res.iterations;
  out["converged"] = res.converged;
  std::ofstream f(fs::path(out_dir) / "estimate.json");
  f << out.dump(2) << "\n";
  timer.stop();
  write_manifest(out_dir, "estimate",
                 {{"family", family_tok},
                  {"method", mf.spec().label()},
                  {"max_iter", max_iter},
                  {"tol", tol}},
                 seed, {{"data", data_path}}, {{"estimate", "estimate.json"}},
                 timer);
  return kExitOk;
}

int cmd_mc_study(const std::string& config_path, const std::string& out_dir,
                 std::uint64_t seed, bool seed_set, unsigned threads) {
  PhaseTimer timer;
  timer.start("load");
  StudyConfig cfg;
  try {
    cfg = StudyConfig::from_json_file(config_path);
  } catch (const DataError& e) {
    // a malformed study config is a configuration error, not a data error
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (seed_set) cfg.seed = seed;
  if (threads > 0) cfg.threads = threads;

  timer.start("study");
  const StudyResult res = run_study(cfg);

  timer.start("write");
  ensure_dir(out_dir);
  json outputs = json::object();
  // Raw estimates, one CSV per method.
  for (std::size_t m = 0; m < res.method_labels.size(); ++m) {
    const std::string fname = "estimates_" + std::to_string(m) + ".csv";
    std::ofstream f(fs::path(out_dir) / fname);
    f << "tau2,sigma2,range,iterations\n";
    char buf[160];
    for (std::size_t k = 0; k < res.estimates[m].size(); ++k) {
      const ParamVector& t = res.estimates[m][k];
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%zu\n", t.tau2,
                    t.sigma2, t.range, res.iteration_counts[m][k]);
      f << buf;
    }
    outputs[res.method_labels[m]] = fname;
  }

  // Summary table relative to the first `ml` entry, when present.
  std::ptrdiff_t ml_idx = -1;
  for (std::size_t m = 0; m < res.method_labels.size(); ++m)
    if (res.method_labels[m] == "ml") {
      ml_idx = static_cast<std::ptrdiff_t>(m);
      break;
    }
  json summary;
  summary["replicates_kept"] = res.estimates.empty() ? 0 : res.estimates[0].size();
  summary["replicates_dropped"] = res.dropped;
  summary["methods"] = json::array();
  std::ofstream sf(fs::path(out_dir) / "summary.csv");
  sf << "method,rrmse_tau2,rrmse_sigma2,rrmse_range,global_efficiency\n";
  for (std::size_t m = 0; m < res.method_labels.size(); ++m) {
    json entry;
    entry["label"] = res.method_labels[m];
    if (ml_idx >= 0) {
      const auto& ml = res.estimates[static_cast<std::size_t>(ml_idx)];
      const auto rr = relative_rrmse(res.estimates[m], ml, cfg.theta_true);
      double ge = std::numeric_limits<double>::quiet_NaN();
      try {
        ge = global_efficiency(res.estimates[m], ml, cfg.theta_true);
      } catch (const SingularMoment&) {
      }
      entry["rrmse"] = {rr[0], rr[1], rr[2]};
      entry["global_efficiency"] = ge;
      char buf[200];
      std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.6g,%.6g\n",
                    res.method_labels[m].c_str(), rr[0], rr[1], rr[2], ge);
      sf << buf;
    } else {
      sf << res.method_labels[m] << ",,,,\n";
    }
    summary["methods"].push_back(entry);
  }
  outputs["summary_csv"] = "summary.csv";
  outputs["summary_json"] = "summary.json";
  std::ofstream jf(fs::path(out_dir) / "summary.json");
  jf << summary.dump(2) << "\n";
  timer.stop();
  write_manifest(out_dir, "mc-study", {{"config", config_path}}, cfg.seed,
                 {{"config", config_path}}, outputs, timer);
  return kExitOk;
}

int cmd_bootstrap(const std::string& data_path, const std::string& out_dir,
                  const std::string& family_tok, const MethodFlags& mf,
                  const ParamVector& theta_hat, std::size_t B,
                  std::uint64_t seed) {
  PhaseTimer timer;
  timer.start("load");
  const CorrelationFamily family = family_from_token(family_tok);
  SiteSet sites = read_site_csv(data_path);
  mean_center(sites);

  timer.start("bootstrap");
  Rng rng = Rng(seed).substream(11);
  const auto se = parametric_bootstrap(sites, family, theta_hat, mf.spec(), B, rng);

  timer.start("write");
  ensure_dir(out_dir);
  json out;
  out["method"] = mf.spec().label();
  out["theta_hat"] = theta_json(theta_hat);
  out["replicates"] = B;
  out["standard_errors"] = {{"tau2", se[0]}, {"sigma2", se[1]}, {"range", se[2]}};
  std::ofstream f(fs::path(out_dir) / "bootstrap.json");
  f << out.dump(2) << "\n";
  timer.stop();
  write_manifest(out_dir, "bootstrap",
                 {{"family", family_tok}, {"method", mf.spec().label()}, {"B", B}},
                 seed, {{"data", data_path}}, {{"bootstrap", "bootstrap.json"}},
                 timer);
  return kExitOk;
}

int cmd_variogram(const std::string& data_path, const std::string& out_dir,
                  std::size_t n_bins, double max_lag,
                  const std::string& family_tok, const std::string& theta_csv,
                  std::uint64_t seed) {
  PhaseTimer timer;
  timer.start("load");
  SiteSet sites = read_site_csv(data_path);
  mean_center(sites);

  timer.start("variogram");
  double lag = max_lag;
  if (!(lag > 0.0)) {
    // default: half the maximum pairwise distance
    double dmax = 0.0;
    for (std::size_t i = 0; i + 1 < sites.size(); ++i)
      for (std::size_t j = i + 1; j < sites.size(); ++j)
        dmax = std::max(dmax,
                        euclidean_distance(sites.coords[i], sites.coords[j]));
    lag = dmax / 2.0;
  }
  const VariogramEstimate est = empirical_semivariogram(sites, n_bins, lag);

  timer.start("write");
  ensure_dir(out_dir);
  {
    std::ofstream f(fs::path(out_dir) / "variogram.csv");
    f << "bin_center,semivariance,count\n";
    char buf[128];
    for (std::size_t b = 0; b < est.bin_center.size(); ++b) {
      if (est.count[b] == 0)
        std::snprintf(buf, sizeof(buf), "%.17g,,0\n", est.bin_center[b]);
      else
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%zu\n", est.bin_center[b],
                      est.semivariance[b], est.count[b]);
      f << buf;
    }
  }
  json outputs = {{"variogram", "variogram.csv"}};
  if (!family_tok.empty()) {
    const CorrelationFamily family = family_from_token(family_tok);
    const ParamVector theta = parse_theta(theta_csv);
    theta.validate();
    std::ofstream f(fs::path(out_dir) / "variogram_model.csv");
    f << "h,gamma_model\n";
    char buf[96];
    for (std::size_t b = 0; b < est.bin_center.size(); ++b) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", est.bin_center[b],
                    model_semivariogram(family, theta, est.bin_center[b]));
      f << buf;
    }
    outputs["variogram_model"] = "variogram_model.csv";
  }
  timer.stop();
  write_manifest(out_dir, "variogram",
                 {{"bins", n_bins}, {"max_lag", lag}, {"family", family_tok}},
                 seed, {{"data", data_path}}, outputs, timer);
  return kExitOk;
}

int cmd_krige_loo(const std::string& data_path, const std::string& out_dir,
                  const std::string& family_tok, const std::string& theta_csv,
                  std::size_t subsample, std::uint64_t seed, unsigned threads) {
  PhaseTimer timer;
  timer.start("load");
  const CorrelationFamily family = family_from_token(family_tok);
  const ParamVector theta = parse_theta(theta_csv);
  theta.validate();
  SiteSet sites = read_site_csv(data_path);
  mean_center(sites);

  timer.start("loo");
  Rng rng = Rng(seed).substream(13);
  const double rmse = loo_rmse(sites, family, theta, subsample, &rng,
                               threads == 0 ? 1 : threads);

  timer.start("write");
  ensure_dir(out_dir);
  json out;
  out["family"] = family_tok;
  out["theta"] = theta_json(theta);
  out["n"] = sites.size();
  out["subsample"] = subsample;
  out["loo_rmse"] = rmse;
  std::ofstream f(fs::path(out_dir) / "krige_loo.json");
  f << out.dump(2) << "\n";
  timer.stop();
  write_manifest(out_dir, "krige-loo",
                 {{"family", family_tok}, {"subsample", subsample}}, seed,
                 {{"data", data_path}}, {{"krige_loo", "krige_loo.json"}}, timer);
  return kExitOk;
}

int cmd_bench_timing(const std::string& out_dir, const std::vector<std::size_t>& ns,
                     double ds, std::uint64_t seed) {
  PhaseTimer timer;
  timer.start("bench");
  const CorrelationFamily family = CorrelationFamily::Exponential;
  const ParamVector theta{0.1, 1.0, 0.1};
  ensure_dir(out_dir);
  std::ofstream f(fs::path(out_dir) / "timing.csv");
  f << "n,bicl_eval_seconds,bcl8_chol_bound_seconds,bcl16_chol_bound_seconds\n";

  Rng rng(seed);
  for (std::size_t idx = 0; idx < ns.size(); ++idx) {
    const std::size_t n = ns[idx];
    Rng site_rng = rng.substream(idx);
    SiteSet sites = generate_uniform_sites(n, site_rng);
    Rng data_rng = rng.substream(1000 + idx);
    // Inexpensive surrogate data: iid noise is enough for timing.
    sites.data.resize(n);
    for (double& z : sites.data) z = data_rng.normal();

    Rng cfg_rng = rng.substream(2000 + idx);
    const auto ensemble = build_configuration_ensemble(sites, 1, cfg_rng);

    const auto time_it = [](const auto& fn) {
      const auto t0 = std::chrono::steady_clock::now();
      fn();
      const auto dt = std::chrono::steady_clock::now() - t0;
      return std::chrono::duration_cast<std::chrono::duration<double>>(dt).count();
    };

    double bicl_best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 3; ++rep)
      bicl_best = std::min(
          bicl_best, time_it([&] {
            volatile double v = bi_cl_objective(ensemble, sites, family, theta, ds);
            (void)v;
          }));

    // Cholesky lower bounds for BCL_8 (8 factorizations of order n/4) and
    // BCL_16 (16 of order n/8).
    const auto chol_bound = [&](std::size_t count, std::size_t order) {
      SiteSet sub = generate_uniform_sites(order, cfg_rng);
      const SymMatrix a = covariance_matrix(family, sub.coords, theta);
      return time_it([&] {
        for (std::size_t c = 0; c < count; ++c) {
          const CholFactor chol = cholesky(a);
          volatile double v = chol.at(order - 1, order - 1);
          (void)v;
        }
      });
    };
    const double b8 = chol_bound(8, n / 4);
    const double b16 = chol_bound(16, n / 8);

    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu,%.6g,%.6g,%.6g\n", n, bicl_best, b8, b16);
    f << buf;
    f.flush();
  }
  timer.stop();
  write_manifest(out_dir, "bench-timing", {{"ds", ds}}, seed, json::object(),
                 {{"timing", "timing.csv"}}, timer);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-likelihood estimation for isotropic Gaussian random fields"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  bool seed_set = false;
  unsigned threads = 0;
  app.add_option("--seed", seed, "rng seed (fallback: GEOLIK_SEED env var)")
      ->each([&seed_set](const std::string&) { seed_set = true; });
  app.add_option("--threads", threads, "worker thread cap (0 = all cores)");

  std::string out_dir = "out";
  std::string data_path, family_tok = "exponential", theta_csv = "0.1,1,0.1";
  std::string init_csv, config_path, scheme = "perturbed_grid", n_list = "4000,8000,16000";
  std::size_t n = 500, max_iter = 10000, n_bins = 15, B = 100, subsample = 0;
  double tol = 1e-16, max_lag = 0.0, ds = 0.1;
  MethodFlags mf;

  auto* sim = app.add_subcommand("simulate", "simulate a dataset CSV");
  sim->add_option("--n", n, "sample size");
  sim->add_option("--family", family_tok, "exponential|matern15|cauchy");
  sim->add_option("--theta", theta_csv, "tau2,sigma2,range");
  sim->add_option("--scheme", scheme, "perturbed_grid|uniform")
      ->check(CLI::IsMember({"perturbed_grid", "uniform"}));
  sim->add_option("--out", out_dir, "output directory");

  auto* est = app.add_subcommand("estimate", "fit a covariance model to a CSV");
  est->add_option("--data", data_path, "input CSV")->required();
  est->add_option("--family", family_tok, "exponential|matern15|cauchy");
  mf.attach(est);
  est->add_option("--max-iter", max_iter, "optimizer iteration cap");
  est->add_option("--tol", tol, "optimizer convergence tolerance");
  est->add_option("--init", init_csv, "starting point tau2,sigma2,range");
  est->add_option("--out", out_dir, "output directory");

  auto* mc = app.add_subcommand("mc-study", "Monte Carlo efficiency study");
  mc->add_option("--config", config_path, "study config JSON")->required();
  mc->add_option("--out", out_dir, "output directory");

  auto* boot = app.add_subcommand("bootstrap", "parametric bootstrap SEs");
  boot->add_option("--data", data_path, "input CSV")->required();
  boot->add_option("--family", family_tok, "exponential|matern15|cauchy");
  mf.attach(boot);
  boot->add_option("--theta", theta_csv, "fitted tau2,sigma2,range")->required();
  boot->add_option("-B,--replicates", B, "bootstrap replicates");
  boot->add_option("--out", out_dir, "output directory");

  auto* vario = app.add_subcommand("variogram", "empirical semi-variogram CSV");
  vario->add_option("--data", data_path, "input CSV")->required();
  vario->add_option("--bins", n_bins, "bin count");
  vario->add_option("--max-lag", max_lag, "largest lag (default: half max distance)");
  std::string vario_family;
  vario->add_option("--family", vario_family, "optional fitted-model overlay family");
  vario->add_option("--theta", theta_csv, "fitted tau2,sigma2,range for overlay");
  vario->add_option("--out", out_dir, "output directory");

  auto* loo = app.add_subcommand("krige-loo", "leave-one-out kriging RMSE");
  loo->add_option("--data", data_path, "input CSV")->required();
  loo->add_option("--family", family_tok, "exponential|matern15|cauchy");
  loo->add_option("--theta", theta_csv, "tau2,sigma2,range")->required();
  loo->add_option("--subsample", subsample, "evaluate only this many folds");
  loo->add_option("--out", out_dir, "output directory");

  auto* bench = app.add_subcommand("bench-timing", "objective timing sweep");
  bench->add_option("--n-list", n_list, "comma-separated sample sizes");
  bench->add_option("--ds", ds, "bi-CL weight threshold");
  bench->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::uint64_t s = resolve_seed(seed, seed_set);
    if (sim->parsed())
      return cmd_simulate(out_dir, n, family_tok, parse_theta(theta_csv), s, scheme);
    if (est->parsed())
      return cmd_estimate(data_path, out_dir, family_tok, mf, s, max_iter, tol,
                          init_csv);
    if (mc->parsed()) return cmd_mc_study(config_path, out_dir, s, seed_set, threads);
    if (boot->parsed())
      return cmd_bootstrap(data_path, out_dir, family_tok, mf,
                           parse_theta(theta_csv), B, s);
    if (vario->parsed())
      return cmd_variogram(data_path, out_dir, n_bins, max_lag, vario_family,
                           theta_csv, s);
    if (loo->parsed())
      return cmd_krige_loo(data_path, out_dir, family_tok, theta_csv, subsample,
                           s, threads);
    if (bench->parsed()) {
      std::vector<std::size_t> ns;
      std::size_t pos = 0;
      while (pos < n_list.size()) {
        std::size_t comma = n_list.find(',', pos);
        if (comma == std::string::npos) comma = n_list.size();
        ns.push_back(std::stoull(n_list.substr(pos, comma - pos)));
        pos = comma + 1;
      }
      return cmd_bench_timing(out_dir, ns, ds, s);
    }
    return kExitConfig;
  } catch (const NoActivePairs& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoActivePairs;
  } catch (const InfeasibleStart& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const EvaluationInfeasible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NotPositiveDefinite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const SingularMoment& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
