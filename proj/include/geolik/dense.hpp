#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geolik/rng.hpp"

namespace geolik {

// Symmetric matrix in packed row-major lower-triangle storage.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * (n + 1) / 2, 0.0) {}

  std::size_t order() const { return n_; }

  double& at(std::size_t i, std::size_t j) {
    return data_[i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i];
  }
  double at(std::size_t i, std::size_t j) const {
    return data_[i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i];
  }

  const std::vector<double>& packed() const { return data_; }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// Lower-triangular Cholesky factor, same packed layout.
class CholFactor {
 public:
  std::size_t order() const { return n_; }
  double at(std::size_t i, std::size_t j) const {
    return j <= i ? data_[i * (i + 1) / 2 + j] : 0.0;
  }

 private:
  friend CholFactor cholesky(const SymMatrix& a);
  CholFactor(std::size_t n, std::vector<double> data)
      : n_(n), data_(std::move(data)) {}
  std::size_t n_;
  std::vector<double> data_;
};

// L with L L^T = a. Throws NotPositiveDefinite when a pivot falls at or
// below 1e-12 times the largest diagonal entry.
CholFactor cholesky(const SymMatrix& a);

// A^-1 rhs by forward/back substitution. Throws std::invalid_argument on a
// dimension mismatch.
std::vector<double> solve_spd(const CholFactor& chol, std::span<const double> rhs);

// log det A = 2 sum_k log L_kk.
double log_det(const CholFactor& chol);

// L * eps with eps iid standard normal: a draw from N(0, A).
std::vector<double> sample_gaussian(const CholFactor& chol, Rng& rng);

// Process-wide count of factorizations of order > 0, used to verify that
// the matrix-free objectives never enter this module.
std::uint64_t factorization_count();

}  // namespace geolik
