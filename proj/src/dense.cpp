#include "geolik/dense.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "geolik/errors.hpp"

namespace geolik {

namespace {
std::atomic<std::uint64_t> g_factorizations{0};

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}
}  // namespace

CholFactor cholesky(const SymMatrix& a) {
  const std::size_t n = a.order();
  if (n > 0) g_factorizations.fetch_add(1, std::memory_order_relaxed);

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    max_diag = std::max(max_diag, std::abs(a.at(i, i)));
  const double pivot_tol = 1e-12 * max_diag;

  // Cholesky-Crout on packed rows: entry (i,j) needs dot(row_i, row_j)[0..j).
  std::vector<double> l(a.packed());
  for (std::size_t i = 0; i < n; ++i) {
    double* row_i = l.data() + i * (i + 1) / 2;
    for (std::size_t j = 0; j < i; ++j) {
      const double* row_j = l.data() + j * (j + 1) / 2;
      row_i[j] = (row_i[j] - dot(row_i, row_j, j)) / row_j[j];
    }
    const double pivot = row_i[i] - dot(row_i, row_i, i);
    if (!(pivot > pivot_tol))
      throw NotPositiveDefinite("pivot " + std::to_string(pivot) + " at index " +
                                std::to_string(i));
    row_i[i] = std::sqrt(pivot);
  }
  return CholFactor(n, std::move(l));
}

std::vector<double> solve_spd(const CholFactor& chol, std::span<const double> rhs) {
  const std::size_t n = chol.order();
  if (rhs.size() != n) throw std::invalid_argument("rhs length mismatch");

  // Forward: L y = rhs.
  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= chol.at(i, k) * x[k];
    x[i] = s / chol.at(i, i);
  }
  // Backward: L^T x = y.
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= chol.at(k, i) * x[k];
    x[i] = s / chol.at(i, i);
  }
  return x;
}

double log_det(const CholFactor& chol) {
  double s = 0.0;
  for (std::size_t i = 0; i < chol.order(); ++i) s += std::log(chol.at(i, i));
  return 2.0 * s;
}

std::vector<double> sample_gaussian(const CholFactor& chol, Rng& rng) {
  const std::size_t n = chol.order();
  std::vector<double> eps(n);
  for (double& e : eps) e = rng.normal();
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += chol.at(i, k) * eps[k];
    z[i] = s;
  }
  return z;
}

std::uint64_t factorization_count() {
  return g_factorizations.load(std::memory_order_relaxed);
}

}  // namespace geolik
