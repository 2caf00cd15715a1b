#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "geolik/geom.hpp"
#include "geolik/rng.hpp"

namespace geolik {

// Partition of the sites into two-site blocks; within a block the member
// closer to the generating seed point carries the `a` label.
struct PairConfiguration {
  struct Block {
    std::size_t a = 0;
    std::size_t b = 0;
  };
  std::vector<Block> blocks;
};

// Partition into m disjoint index blocks with their centers of mass.
struct BlockPartition {
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<Point> centroids;
};

// Groups the two nearest unassigned sites to each seed point, in order.
// Exposed for tests; build_pair_configuration draws the seed points.
PairConfiguration pair_by_seed_points(const SiteSet& sites,
                                      std::span<const Point> seed_points);

// Draws n/2 seed points uniformly on the sites' bounding box and pairs the
// two nearest unassigned sites to each. Odd n drops the highest-index site.
// Throws std::invalid_argument on n < 2.
PairConfiguration build_pair_configuration(const SiteSet& sites, Rng& rng);

// `count` independent configurations from independent seed-point draws.
std::vector<PairConfiguration> build_configuration_ensemble(const SiteSet& sites,
                                                            std::size_t count,
                                                            Rng& rng);

// m spatially compact clusters via Lloyd k-means on the coordinates
// (seeded initialization from m distinct sites, at most 100 sweeps; an
// emptied cluster is repaired with the farthest point of the largest one).
// Throws std::invalid_argument unless 1 <= m <= n.
BlockPartition build_cluster_blocks(const SiteSet& sites, std::size_t m, Rng& rng);

// 1 when the blocks' a-labeled sites are closer than ds, else 0.
int pair_weight(const PairConfiguration& cfg, std::size_t i, std::size_t j,
                const SiteSet& sites, double ds);

// 1 when the blocks' centroids are closer than the threshold, else 0.
int block_weight(const BlockPartition& part, std::size_t i, std::size_t j,
                 double threshold);

// JSON serialization (list of index lists) for audit and replay.
std::string to_json(const PairConfiguration& cfg);
std::string to_json(const BlockPartition& part);

}  // namespace geolik
