#pragma once

// Square complex band matrix with kl sub- and ku super-diagonals, plus an LU
// factorization with partial pivoting in LAPACK gbtrf layout (the upper factor
// gains kl extra super-diagonals from row interchanges).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "cmvlab/errors.hpp"

namespace cmvlab {

class BandMatrix {
 public:
  using value_type = std::complex<double>;

  BandMatrix() = default;
  BandMatrix(std::size_t n, std::size_t kl, std::size_t ku)
      : n_(n), kl_(kl), ku_(ku), data_(n * (kl + ku + 1)) {}

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }
  bool empty() const { return n_ == 0; }

  bool in_band(std::size_t i, std::size_t j) const {
    return i < n_ && j < n_ && j + kl_ >= i && i + ku_ >= j;
  }

  /// Zero outside the band.
  value_type operator()(std::size_t i, std::size_t j) const {
    return in_band(i, j) ? data_[slot(i, j)] : value_type{};
  }

  value_type& at(std::size_t i, std::size_t j) {
    if (!in_band(i, j)) throw ArgumentError("BandMatrix::at: entry outside band");
    return data_[slot(i, j)];
  }

  Eigen::MatrixXcd to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Eigen::Index(n_), Eigen::Index(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = first_col(i); j <= last_col(i); ++j) m(Eigen::Index(i), Eigen::Index(j)) = (*this)(i, j);
    return m;
  }

  BandMatrix transposed() const {
    BandMatrix t(n_, ku_, kl_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = first_col(i); j <= last_col(i); ++j) t.at(j, i) = (*this)(i, j);
    return t;
  }

  std::size_t first_col(std::size_t i) const { return i > kl_ ? i - kl_ : 0; }
  std::size_t last_col(std::size_t i) const { return std::min(n_ - 1, i + ku_); }

  bool operator==(const BandMatrix&) const = default;

 private:
  std::size_t slot(std::size_t i, std::size_t j) const { return i * (kl_ + ku_ + 1) + (j + kl_ - i); }

  std::size_t n_ = 0, kl_ = 0, ku_ = 0;
  std::vector<value_type> data_;
};

/// Determinant as mantissa * 2^exponent so long windows do not overflow in
/// intermediate products.
struct ScaledDeterminant {
  std::complex<double> mantissa{1.0, 0.0};
  long exponent = 0;

  std::complex<double> value() const {
    return {std::ldexp(mantissa.real(), int(exponent)), std::ldexp(mantissa.imag(), int(exponent))};
  }
  double log_abs() const { return std::log(std::abs(mantissa)) + double(exponent) * std::log(2.0); }

  void multiply(std::complex<double> f) {
    mantissa *= f;
    const double m = std::max(std::abs(mantissa.real()), std::abs(mantissa.imag()));
    if (m == 0.0 || !std::isfinite(m)) return;
    int e = 0;
    std::frexp(m, &e);
    mantissa = {std::ldexp(mantissa.real(), -e), std::ldexp(mantissa.imag(), -e)};
    exponent += e;
  }
};

class BandLU {
 public:
  using value_type = std::complex<double>;

  explicit BandLU(const BandMatrix& a) : n_(a.size()), kl_(a.lower()), ku_(a.upper()) {
    width_ = 2 * kl_ + ku_ + 1;
    w_.assign(n_ * width_, value_type{});
    pivots_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = a.first_col(i); j <= a.last_col(i); ++j) ref(i, j) = a(i, j);
    factor();
  }

  std::size_t size() const { return n_; }

  ScaledDeterminant determinant() const {
    ScaledDeterminant d;
    if (odd_swaps_) d.mantissa = -d.mantissa;
    for (std::size_t k = 0; k < n_; ++k) d.multiply(get(k, k));
    return d;
  }

  /// Smallest |U(k,k)|; 0 for an exactly singular matrix, 1 for the empty one.
  double min_pivot() const {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n_; ++k) lo = std::min(lo, std::abs(get(k, k)));
    return n_ == 0 ? 1.0 : lo;
  }

  /// Solves A x = b in place.
  void solve(std::vector<value_type>& b) const {
    if (b.size() != n_) throw ArgumentError("BandLU::solve: size mismatch");
    for (std::size_t k = 0; k < n_; ++k) {
      if (pivots_[k] != k) std::swap(b[k], b[pivots_[k]]);
      const std::size_t last = std::min(n_ - 1, k + kl_);
      for (std::size_t i = k + 1; i <= last; ++i) b[i] -= get(i, k) * b[k];
    }
    for (std::size_t kk = n_; kk-- > 0;) {
      const std::size_t last = std::min(n_ - 1, kk + kl_ + ku_);
      value_type s = b[kk];
      for (std::size_t j = kk + 1; j <= last; ++j) s -= get(kk, j) * b[j];
      b[kk] = s / get(kk, kk);
    }
  }

 private:
  value_type& ref(std::size_t i, std::size_t j) { return w_[i * width_ + (j + kl_ - i)]; }
  value_type get(std::size_t i, std::size_t j) const { return w_[i * width_ + (j + kl_ - i)]; }

  void factor() {
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t last_row = std::min(n_ - 1, k + kl_);
      const std::size_t last_col = std::min(n_ - 1, k + kl_ + ku_);
      std::size_t p = k;
      double best = std::abs(get(k, k));
      for (std::size_t i = k + 1; i <= last_row; ++i)
        if (std::abs(get(i, k)) > best) best = std::abs(get(i, k)), p = i;
      pivots_[k] = p;
      if (best == 0.0) continue;  // singular column; determinant is exactly 0
      if (p != k) {
        for (std::size_t j = k; j <= last_col; ++j) std::swap(ref(k, j), ref(p, j));
        odd_swaps_ = !odd_swaps_;
      }
      const value_type pivot = get(k, k);
      for (std::size_t i = k + 1; i <= last_row; ++i) {
        const value_type f = get(i, k) / pivot;
        ref(i, k) = f;
        if (f == value_type{}) continue;
        for (std::size_t j = k + 1; j <= last_col; ++j) ref(i, j) -= f * get(k, j);
      }
    }
  }

  std::size_t n_, kl_, ku_, width_ = 0;
  std::vector<value_type> w_;
  std::vector<std::size_t> pivots_;
  bool odd_swaps_ = false;
};

}  // namespace cmvlab
