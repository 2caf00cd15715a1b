#include "geolik/optim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "geolik/errors.hpp"

namespace geolik {

namespace {

constexpr double kTau2Floor = 1e-12;
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

using Coords = std::array<double, 3>;

Coords to_log(const ParamVector& theta) {
  return {std::log(std::max(theta.tau2, kTau2Floor)), std::log(theta.sigma2),
          std::log(theta.range)};
}

ParamVector from_log(const Coords& x) {
  // The floor also applies to trial points: a boundary estimate (tau2 -> 0)
  // must leave the objective flat below the floor, or the simplex drifts
  // down log-tau2 forever without ever closing its value spread.
  return {std::max(std::exp(x[0]), kTau2Floor), std::exp(x[1]), std::exp(x[2])};
}

struct Vertex {
  Coords x;
  double f;  // negated objective; we minimize
};

}  // namespace

EstimateResult nelder_mead_maximize(
    const std::function<double(const ParamVector&)>& objective,
    const OptimOptions& opts) {
  if (opts.max_iterations < 1)
    throw std::invalid_argument("max_iterations must be >= 1");
  if (!(opts.tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  opts.initial.validate();

  const auto eval = [&](const Coords& x) {
    const double v = objective(from_log(x));
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : -v;
  };

  std::array<Vertex, 4> simplex;
  simplex[0].x = to_log(opts.initial);
  simplex[0].f = eval(simplex[0].x);
  if (!std::isfinite(simplex[0].f))
    throw InfeasibleStart("objective is infeasible at the starting point");
  for (std::size_t k = 0; k < 3; ++k) {
    simplex[k + 1].x = simplex[0].x;
    simplex[k + 1].x[k] += 0.25;
    simplex[k + 1].f = eval(simplex[k + 1].x);
  }

  const auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::sort(simplex.begin(), simplex.end(), by_value);

  std::size_t iter = 0;
  bool converged = false;
  while (iter < opts.max_iterations) {
    ++iter;
    if (opts.on_iteration) opts.on_iteration(iter, -simplex[0].f);

    // Spread scaled by the objective magnitude: an absolute 1e-16 would be
    // unreachable whenever |f| is large enough that doubles are coarser.
    // A fully collapsed simplex also counts: at the optimum the values can
    // keep straddling one or two ulps while the vertices are already
    // indistinguishable in the log coordinates.
    double diameter = 0.0;
    for (std::size_t v = 1; v < 4; ++v)
      for (std::size_t k = 0; k < 3; ++k)
        diameter = std::max(diameter, std::abs(simplex[v].x[k] - simplex[0].x[k]));
    if (simplex[3].f - simplex[0].f <=
            opts.tolerance * (1.0 + std::abs(simplex[0].f)) ||
        diameter <= 1e-12) {
      converged = true;
      break;
    }

    Coords centroid{};
    for (std::size_t v = 0; v < 3; ++v)
      for (std::size_t k = 0; k < 3; ++k) centroid[k] += simplex[v].x[k] / 3.0;

    const auto blend = [&](double coef) {
      Coords x;
      for (std::size_t k = 0; k < 3; ++k)
        x[k] = centroid[k] + coef * (centroid[k] - simplex[3].x[k]);
      return x;
    };

    const Coords xr = blend(kReflect);
    const double fr = eval(xr);

    if (fr < simplex[0].f) {
      const Coords xe = blend(kExpand);
      const double fe = eval(xe);
      if (fe < fr)
        simplex[3] = {xe, fe};
      else
        simplex[3] = {xr, fr};
    } else if (fr < simplex[2].f) {
      simplex[3] = {xr, fr};
    } else {
      const bool outside = fr < simplex[3].f;
      Coords xc;
      if (outside) {
        for (std::size_t k = 0; k < 3; ++k)
          xc[k] = centroid[k] + kContract * (xr[k] - centroid[k]);
      } else {
        for (std::size_t k = 0; k < 3; ++k)
          xc[k] = centroid[k] - kContract * (centroid[k] - simplex[3].x[k]);
      }
      const double fc = eval(xc);
      if (fc < (outside ? fr : simplex[3].f)) {
        simplex[3] = {xc, fc};
      } else {
        for (std::size_t v = 1; v < 4; ++v) {
          for (std::size_t k = 0; k < 3; ++k)
            simplex[v].x[k] =
                simplex[0].x[k] + kShrink * (simplex[v].x[k] - simplex[0].x[k]);
          simplex[v].f = eval(simplex[v].x);
        }
      }
    }
    std::sort(simplex.begin(), simplex.end(), by_value);
  }

  EstimateResult result;
  result.theta_hat = from_log(simplex[0].x);
  result.objective_value = -simplex[0].f;
  result.iterations = iter;
  result.converged = converged;
  return result;
}

}  // namespace geolik
