#include "geolik/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace geolik {

namespace {

struct Box {
  double xmin, xmax, ymin, ymax;
};

Box bounding_box(const SiteSet& sites) {
  Box b{sites.coords[0].x, sites.coords[0].x, sites.coords[0].y,
        sites.coords[0].y};
  for (const Point& p : sites.coords) {
    b.xmin = std::min(b.xmin, p.x);
    b.xmax = std::max(b.xmax, p.x);
    b.ymin = std::min(b.ymin, p.y);
    b.ymax = std::max(b.ymax, p.y);
  }
  return b;
}

// Nearest unassigned site to p; ties broken by lowest index.
std::size_t nearest_unassigned(const SiteSet& sites, const Point& p,
                               const std::vector<char>& assigned) {
  std::size_t best = sites.size();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (assigned[k]) continue;
    const double d = euclidean_distance(sites.coords[k], p);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

}  // namespace

PairConfiguration pair_by_seed_points(const SiteSet& sites,
                                      std::span<const Point> seed_points) {
  const std::size_t n = 2 * seed_points.size();
  if (sites.size() < n) throw std::invalid_argument("too many seed points");
  std::vector<char> assigned(sites.size(), 0);
  // An excluded odd site (index >= n) is never eligible.
  for (std::size_t k = n; k < sites.size(); ++k) assigned[k] = 1;

  PairConfiguration cfg;
  cfg.blocks.reserve(seed_points.size());
  for (const Point& seed : seed_points) {
    const std::size_t first = nearest_unassigned(sites, seed, assigned);
    assigned[first] = 1;
    const std::size_t second = nearest_unassigned(sites, seed, assigned);
    assigned[second] = 1;
    cfg.blocks.push_back({first, second});
  }
  return cfg;
}

PairConfiguration build_pair_configuration(const SiteSet& sites, Rng& rng) {
  if (sites.size() < 2) throw std::invalid_argument("need at least 2 sites");
  const std::size_t n_even = sites.size() - sites.size() % 2;
  const Box box = bounding_box(sites);
  std::vector<Point> seeds(n_even / 2);
  for (Point& s : seeds) {
    s.x = rng.uniform(box.xmin, box.xmax);
    s.y = rng.uniform(box.ymin, box.ymax);
  }
  // Restrict pairing to the first n_even indices (odd-n exclusion rule).
  SiteSet trimmed;
  trimmed.coords.assign(sites.coords.begin(), sites.coords.begin() + n_even);
  return pair_by_seed_points(trimmed, seeds);
}

std::vector<PairConfiguration> build_configuration_ensemble(const SiteSet& sites,
                                                            std::size_t count,
                                                            Rng& rng) {
  if (count < 1) throw std::invalid_argument("configuration count must be >= 1");
  std::vector<PairConfiguration> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c)
    out.push_back(build_pair_configuration(sites, rng));
  return out;
}

BlockPartition build_cluster_blocks(const SiteSet& sites, std::size_t m, Rng& rng) {
  const std::size_t n = sites.size();
  if (m < 1 || m > n) throw std::invalid_argument("need 1 <= m <= n");

  // Initialize centers from m distinct sites.
  std::vector<std::size_t> init(n);
  for (std::size_t i = 0; i < n; ++i) init[i] = i;
  for (std::size_t i = 0; i < m; ++i)
    std::swap(init[i], init[i + static_cast<std::size_t>(rng.index(n - i))]);
  std::vector<Point> centers(m);
  for (std::size_t c = 0; c < m; ++c) centers[c] = sites.coords[init[c]];

  std::vector<std::size_t> label(n, 0);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < m; ++c) {
        const double d = euclidean_distance(sites.coords[k], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (label[k] != best) {
        label[k] = best;
        changed = true;
      }
    }

    std::vector<std::size_t> count(m, 0);
    for (std::size_t k = 0; k < n; ++k) ++count[label[k]];

    // Repair empty clusters with the farthest member of the largest one.
    for (std::size_t c = 0; c < m; ++c) {
      while (count[c] == 0) {
        const std::size_t big = static_cast<std::size_t>(
            std::max_element(count.begin(), count.end()) - count.begin());
        std::size_t far_k = n;
        double far_d = -1.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (label[k] != big) continue;
          const double d = euclidean_distance(sites.coords[k], centers[big]);
          if (d > far_d) {
            far_d = d;
            far_k = k;
          }
        }
        label[far_k] = c;
        --count[big];
        ++count[c];
        changed = true;
      }
    }

    std::vector<Point> sums(m);
    for (std::size_t k = 0; k < n; ++k) {
      sums[label[k]].x += sites.coords[k].x;
      sums[label[k]].y += sites.coords[k].y;
    }
    for (std::size_t c = 0; c < m; ++c)
      centers[c] = {sums[c].x / count[c], sums[c].y / count[c]};

    if (!changed) break;
  }

  BlockPartition part;
  part.blocks.assign(m, {});
  for (std::size_t k = 0; k < n; ++k) part.blocks[label[k]].push_back(k);
  part.centroids.resize(m);
  for (std::size_t c = 0; c < m; ++c) {
    Point sum{};
    for (std::size_t k : part.blocks[c]) {
      sum.x += sites.coords[k].x;
      sum.y += sites.coords[k].y;
    }
    part.centroids[c] = {sum.x / part.blocks[c].size(),
                         sum.y / part.blocks[c].size()};
  }
  return part;
}

int pair_weight(const PairConfiguration& cfg, std::size_t i, std::size_t j,
                const SiteSet& sites, double ds) {
  if (i == j || i >= cfg.blocks.size() || j >= cfg.blocks.size())
    throw std::out_of_range("invalid block indices");
  if (!(ds > 0.0)) throw std::invalid_argument("ds must be > 0");
  const double d = euclidean_distance(sites.coords[cfg.blocks[i].a],
                                      sites.coords[cfg.blocks[j].a]);
  return d < ds ? 1 : 0;
}

int block_weight(const BlockPartition& part, std::size_t i, std::size_t j,
                 double threshold) {
  if (i == j || i >= part.blocks.size() || j >= part.blocks.size())
    throw std::out_of_range("invalid block indices");
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be > 0");
  return euclidean_distance(part.centroids[i], part.centroids[j]) < threshold ? 1
                                                                              : 0;
}

std::string to_json(const PairConfiguration& cfg) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& b : cfg.blocks) j.push_back({b.a, b.b});
  return j.dump();
}

std::string to_json(const BlockPartition& part) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& b : part.blocks) j.push_back(b);
  return j.dump();
}

}  // namespace geolik
