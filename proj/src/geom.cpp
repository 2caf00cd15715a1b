#include "geolik/geom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "geolik/errors.hpp"

namespace geolik {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim whitespace and a possible trailing CR
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    out.push_back(begin == std::string::npos ? std::string()
                                             : field.substr(begin, end - begin + 1));
  }
  return out;
}
}  // namespace

double euclidean_distance(const Point& p, const Point& q) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(q.x) ||
      !std::isfinite(q.y))
    throw std::invalid_argument("non-finite coordinates");
  return std::hypot(p.x - q.x, p.y - q.y);
}

void SiteSet::validate() const {
  for (const Point& p : coords)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("non-finite site coordinate");
  if (!data.empty()) {
    if (data.size() != coords.size())
      throw std::invalid_argument("data length does not match site count");
    for (double v : data)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite data value");
  }
}

void SiteSet::require_distinct() const {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(coords.size());
  for (const Point& p : coords) pts.emplace_back(p.x, p.y);
  std::sort(pts.begin(), pts.end());
  if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
    throw std::invalid_argument("duplicate site coordinates");
}

SiteSet generate_perturbed_grid(std::size_t n_select, Rng& rng, double spacing,
                                double jitter_halfwidth) {
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
  if (jitter_halfwidth < 0.0)
    throw std::invalid_argument("jitter halfwidth must be >= 0");

  std::vector<double> ticks;
  for (std::size_t k = 0; k * spacing <= 1.0 + 1e-12; ++k)
    ticks.push_back(k * spacing);

  std::vector<Point> grid;
  grid.reserve(ticks.size() * ticks.size());
  for (double x : ticks)
    for (double y : ticks) grid.push_back({x, y});

  for (Point& p : grid) {
    p.x += rng.uniform(-jitter_halfwidth, jitter_halfwidth);
    p.y += rng.uniform(-jitter_halfwidth, jitter_halfwidth);
  }

  if (n_select > grid.size())
    throw std::invalid_argument("n_select exceeds number of grid points");

  // Partial Fisher-Yates: sample without replacement.
  SiteSet out;
  out.coords.reserve(n_select);
  for (std::size_t i = 0; i < n_select; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.index(grid.size() - i));
    std::swap(grid[i], grid[j]);
    out.coords.push_back(grid[i]);
  }
  return out;
}

SiteSet generate_uniform_sites(std::size_t n, Rng& rng) {
  SiteSet out;
  out.coords.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.coords.push_back({rng.uniform(), rng.uniform()});
  return out;
}

Point sinusoidal_project(double lon_deg, double lat_deg, double earth_radius_km) {
  if (!(lat_deg >= -90.0 && lat_deg <= 90.0))
    throw std::domain_error("latitude outside [-90, 90]");
  if (!(lon_deg >= -180.0 && lon_deg <= 180.0))
    throw std::domain_error("longitude outside [-180, 180]");
  const double lat_rad = lat_deg * kPi / 180.0;
  return {earth_radius_km * (kPi / 180.0) * lon_deg * std::cos(lat_rad),
          earth_radius_km * (kPi / 180.0) * lat_deg};
}

SiteSet read_site_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  const auto header = split_csv_line(line);
  bool projected;
  if (header.size() == 3 && header[0] == "x" && header[1] == "y" && header[2] == "z")
    projected = false;
  else if (header.size() == 3 && header[0] == "lon" && header[1] == "lat" &&
           header[2] == "z")
    projected = true;
  else
    throw DataError("expected header `x,y,z` or `lon,lat,z` in " + path);

  SiteSet out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected 3 fields");
    double a, b, z;
    try {
      a = std::stod(fields[0]);
      b = std::stod(fields[1]);
      z = std::stod(fields[2]);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(lineno) + ": non-numeric field");
    }
    out.coords.push_back(projected ? sinusoidal_project(a, b) : Point{a, b});
    out.data.push_back(z);
  }
  out.validate();
  return out;
}

void write_site_csv(const std::string& path, const SiteSet& sites) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "x,y,z\n";
  char buf[128];
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double z = sites.has_data() ? sites.data[i] : 0.0;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", sites.coords[i].x,
                  sites.coords[i].y, z);
    out << buf;
  }
}

double mean_center(SiteSet& sites) {
  if (!sites.has_data()) throw std::invalid_argument("site set has no data");
  const double mean =
      std::accumulate(sites.data.begin(), sites.data.end(), 0.0) /
      static_cast<double>(sites.data.size());
  for (double& v : sites.data) v -= mean;
  return mean;
}

double domain_diameter(const SiteSet& sites) {
  if (sites.size() == 0) return 0.0;
  double xmin = sites.coords[0].x, xmax = xmin;
  double ymin = sites.coords[0].y, ymax = ymin;
  for (const Point& p : sites.coords) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  return std::hypot(xmax - xmin, ymax - ymin);
}

}  // namespace geolik
