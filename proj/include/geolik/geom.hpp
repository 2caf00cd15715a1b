#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "geolik/rng.hpp"

namespace geolik {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double euclidean_distance(const Point& p, const Point& q);

// Observation locations plus an optional aligned data vector.
struct SiteSet {
  std::vector<Point> coords;
  std::vector<double> data;  // empty, or one value per site

  std::size_t size() const { return coords.size(); }
  bool has_data() const { return !data.empty(); }

  // Throws std::invalid_argument if a data vector is present with the wrong
  // length or any coordinate/value is non-finite.
  void validate() const;

  // Throws std::invalid_argument when two sites share exact coordinates.
  // Called before building covariance matrices.
  void require_distinct() const;
};

// Jittered regular grid over [0,1]^2: lattice with the given spacing, each
// coordinate perturbed by U[-jitter_halfwidth, jitter_halfwidth], then
// n_select points sampled without replacement. Deterministic given the rng.
SiteSet generate_perturbed_grid(std::size_t n_select, Rng& rng,
                                double spacing = 0.03,
                                double jitter_halfwidth = 0.01);

// Uniform random sites on [0,1]^2 (used by the timing benchmarks, where n
// exceeds the perturbed grid's capacity).
SiteSet generate_uniform_sites(std::size_t n, Rng& rng);

// Sinusoidal (equal-area) projection with central meridian at lon = 0:
//   x = R * (pi/180) * lon * cos(lat * pi/180),  y = R * (pi/180) * lat.
// Throws std::domain_error when lat is outside [-90, 90] or lon outside
// [-180, 180].
Point sinusoidal_project(double lon_deg, double lat_deg,
                         double earth_radius_km = 6371.0);

// Reads a UTF-8 CSV with header `x,y,z` (planar coordinates) or `lon,lat,z`
// (applies the sinusoidal projection). Throws DataError on malformed input.
SiteSet read_site_csv(const std::string& path);

// Writes header `x,y,z` followed by one row per site (full precision).
void write_site_csv(const std::string& path, const SiteSet& sites);

// Subtracts the sample mean from the data in place; returns the mean.
double mean_center(SiteSet& sites);

// Diagonal of the bounding box (used for default optimizer starting points
// and weight sanity checks).
double domain_diameter(const SiteSet& sites);

}  // namespace geolik
