#pragma once

// Reference computations that share no code path with the library: dense LU,
// cofactor expansion, the Theta-block factorization of CMV matrices, Neumann
// series, brute-force norm sampling and closed-form 2x2 spectra.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

inline cplx dense_det(const Eigen::MatrixXcd& a) {
  if (a.rows() == 0) return 1.0;
  return Eigen::FullPivLU<Eigen::MatrixXcd>(a).determinant();
}

/// Laplace expansion along the first row. Exponential; sizes up to ~7.
inline cplx cofactor_det(const Eigen::MatrixXcd& a) {
  const auto n = a.rows();
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  cplx total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXcd minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r)
      for (Eigen::Index c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = a(r, c);
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    total += sign * a(0, j) * cofactor_det(minor);
  }
  return total;
}

/// [[conj(a), rho], [rho, -a]]
inline Eigen::Matrix2cd theta(cplx a) {
  const double r = std::sqrt(1.0 - std::norm(a));
  Eigen::Matrix2cd t;
  t << std::conj(a), r, r, -a;
  return t;
}

/// Top-left N x N block of L M, with L = Theta_0 + Theta_2 + ... and
/// M = m00 + Theta_1 + Theta_3 + ..., m00 = -alpha_{-1}. The half-line matrix
/// has alpha_{-1} = -1.
inline Eigen::MatrixXcd lm_truncation(const std::function<cplx(std::int64_t)>& alpha, int N, cplx alpha_minus_one) {
  const int size = N + 2;
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(size, size), M = Eigen::MatrixXcd::Zero(size, size);
  for (int k = 0; k + 1 < size; k += 2) L.block(k, k, 2, 2) = theta(alpha(k));
  if (size % 2) L(size - 1, size - 1) = 1.0;
  M(0, 0) = -alpha_minus_one;
  for (int k = 1; k + 1 < size; k += 2) M.block(k, k, 2, 2) = theta(alpha(k));
  if (size % 2 == 0) M(size - 1, size - 1) = 1.0;
  return (L * M).topLeftCorner(N, N);
}

/// (z - A)^{-1} = sum_k A^k / z^{k+1}, for ||A|| < |z|.
inline Eigen::MatrixXcd neumann_resolvent(const Eigen::MatrixXcd& a, cplx z, int max_terms = 400) {
  const auto n = a.rows();
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n) / z;
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k < max_terms; ++k) {
    term = a * term / z;
    sum += term;
    if (term.norm() < 1e-18 * sum.norm()) break;
  }
  return sum;
}

/// max |t v| over a 100 x 100 grid of unit vectors (cos s, e^{i p} sin s).
inline double sampled_norm(const Eigen::Matrix2cd& t) {
  // Coarse 100 x 100 sweep over unit vectors (cos s, e^{ip} sin s), then a
  // second 100 x 100 sweep over one coarse cell around the best point.
  auto value = [&](double s, double p) {
    const Eigen::Vector2cd v(std::cos(s), std::polar(std::sin(s), p));
    return (t * v).norm();
  };
  const double ds = 0.5 * std::numbers::pi / 99.0, dp = 2.0 * std::numbers::pi / 100.0;
  double best = 0.0, bs = 0.0, bp = 0.0;
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j)
      if (const double v = value(ds * i, dp * j); v > best) best = v, bs = ds * i, bp = dp * j;
  for (int i = 0; i < 100; ++i) {
    const double s = std::clamp(bs + ds * (double(i) / 99.0 - 0.5), 0.0, 0.5 * std::numbers::pi);
    for (int j = 0; j < 100; ++j) best = std::max(best, value(s, bp + dp * (double(j) / 99.0 - 0.5)));
  }
  return best;
}

/// Horner in long double.
inline cplx horner_ld(std::span<const cplx> coeffs, cplx z) {
  using lc = std::complex<long double>;
  lc acc{}, w(z.real(), z.imag());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * w + lc(it->real(), it->imag());
  return {double(acc.real()), double(acc.imag())};
}

/// Roots of mu^2 - tr mu + det.
inline std::pair<cplx, cplx> eig2(const Eigen::Matrix2cd& m) {
  const cplx tr = m.trace(), det = m.determinant();
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

/// 0.9 exp(2 pi i (sqrt 5 - 1)), evaluated with 30-digit arithmetic offline.
inline const cplx golden_alpha_2{0.078683152245264359678, 0.89655393677834494809};

}  // namespace oracle
