#pragma once

// Szego cocycle steps S^z_alpha, n-step transfer matrices, the unimodular
// M^z variants, the Q conjugation to real matrices, and 2x2 operator norms.
//
// Products are ordered with the step for alpha_{n-1} leftmost. The direct
// products accumulate in long double. Long products go through LogScaledTransfer, which divides out the running norm every
// `renormalize_every` steps and keeps its logarithm.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "cmvlab/coefficients.hpp"
#include "cmvlab/errors.hpp"

namespace cmvlab {

using Transfer2x2 = Eigen::Matrix2cd;

inline constexpr int renormalize_every = 32;

/// Largest singular value from the closed-form 2x2 SVD:
/// ||t||^2 = (f + sqrt(f^2 - 4 |det t|^2)) / 2 with f the squared Frobenius norm.
inline double operator_norm(const Transfer2x2& t) {
  const double f = t.squaredNorm();
  const double d = std::abs(t.determinant());
  const double disc = std::max(0.0, (f - 2.0 * d) * (f + 2.0 * d));
  return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

inline Transfer2x2 szego_step(cplx alpha, cplx z) {
  const double r = rho_of(alpha);
  Transfer2x2 s;
  s << z, -std::conj(alpha), -alpha * z, 1.0;
  return s / r;
}

/// Branch sqrt(e^{i theta}) = e^{i theta / 2} with theta in [0, 2 pi).
inline cplx sqrt_branch(cplx z) {
  double theta = std::arg(z);
  if (theta < 0.0) theta += two_pi;
  return std::polar(std::sqrt(std::abs(z)), 0.5 * theta);
}

inline void require_unit(cplx z, const char* what) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw ArgumentError(std::string(what) + ": z must lie on the unit circle");
}

inline Transfer2x2 m_step_with_root(cplx alpha, cplx root) {
  const double r = rho_of(alpha);
  const cplx inv = 1.0 / root;
  Transfer2x2 m;
  m << root, -std::conj(alpha) * inv, -root * alpha, inv;
  return m / r;
}

/// S^z_alpha / sqrt(z); unit determinant.
inline Transfer2x2 m_step(cplx alpha, cplx z) {
  require_unit(z, "m_step");
  return m_step_with_root(alpha, sqrt_branch(z));
}

struct LogScaledTransfer {
  Transfer2x2 matrix = Transfer2x2::Identity();
  double log_scale = 0.0;  // true product = exp(log_scale) * matrix

  double log_norm() const { return log_scale + std::log(operator_norm(matrix)); }

  void left_multiply(const Transfer2x2& step) { matrix = step * matrix; }

  void renormalize() {
    const double s = operator_norm(matrix);
    if (s > 0.0 && std::isfinite(s)) {
      matrix /= s;
      log_scale += std::log(s);
    }
  }
};

/// Ordered product of `make_step(alpha_j)` for j = first .. first + n - 1.
template <class AlphaFn, class StepFn>
LogScaledTransfer scaled_product(AlphaFn&& alpha, std::int64_t first, int n, StepFn&& make_step) {
  LogScaledTransfer acc;
  for (int j = 0; j < n; ++j) {
    acc.left_multiply(make_step(alpha(first + j)));
    if ((j + 1) % renormalize_every == 0) acc.renormalize();
  }
  return acc;
}

namespace detail {

using xcplx = std::complex<long double>;
using XTransfer = Eigen::Matrix<xcplx, 2, 2>;

/// Direct product with steps formed and multiplied in long double; the
/// rounding of long products is otherwise amplified by their conditioning.
/// The unimodular variant takes sqrt(z) on the same branch as sqrt_branch,
/// evaluated in long double so that root^2 matches z to extended precision.
inline Transfer2x2 extended_product(const VerblunskySequence& seq, int n, cplx z, bool unimodular) {
  const xcplx zx(z.real(), z.imag());
  long double theta = std::atan2(zx.imag(), zx.real());
  if (theta < 0.0L) theta += 2.0L * std::numbers::pi_v<long double>;
  const xcplx rx = unimodular ? std::polar(std::sqrt(std::abs(zx)), 0.5L * theta) : xcplx(1.0L);
  const xcplx rinv = unimodular ? xcplx(1.0L) / rx : xcplx(1.0L);
  XTransfer acc = XTransfer::Identity();
  for (int j = 0; j < n; ++j) {
    const cplx a = seq.coefficient_at(j);
    const xcplx ax(a.real(), a.imag());
    const long double m = std::abs(ax);
    const long double r = std::sqrt((1.0L - m) * (1.0L + m));
    XTransfer step;
    if (unimodular)
      step << rx, -std::conj(ax) * rinv, -rx * ax, rinv;
    else
      step << zx, -std::conj(ax), -ax * zx, 1.0L;
    acc = (step / r) * acc;
  }
  Transfer2x2 out;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) out(i, k) = cplx(double(acc(i, k).real()), double(acc(i, k).imag()));
  return out;
}

}  // namespace detail

/// S^z_n = S^z_{alpha_{n-1}} ... S^z_{alpha_0}; the identity for n = 0.
inline Transfer2x2 transfer(const VerblunskySequence& seq, int n, cplx z) {
  if (n < 0) throw ArgumentError("transfer: n must be >= 0");
  return detail::extended_product(seq, n, z, false);
}

inline LogScaledTransfer transfer_scaled(const VerblunskySequence& seq, int n, cplx z) {
  return scaled_product([&](std::int64_t j) { return seq.coefficient_at(j); }, 0, n,
                        [z](cplx a) { return szego_step(a, z); });
}

/// M^z_n, the unimodular n-step product.
inline Transfer2x2 m_transfer(const VerblunskySequence& seq, int n, cplx z) {
  require_unit(z, "m_transfer");
  if (n < 0) throw ArgumentError("m_transfer: n must be >= 0");
  return detail::extended_product(seq, n, z, true);
}

inline LogScaledTransfer m_transfer_scaled(const VerblunskySequence& seq, int n, cplx z) {
  require_unit(z, "m_transfer");
  const cplx root = sqrt_branch(z);
  return scaled_product([&](std::int64_t j) { return seq.coefficient_at(j); }, 0, n,
                        [root](cplx a) { return m_step_with_root(a, root); });
}

/// Q = -1/(1+i) [[1, -i], [1, i]].
inline Transfer2x2 q_matrix() {
  const cplx i(0.0, 1.0);
  Transfer2x2 q;
  q << 1.0, -i, 1.0, i;
  return (-1.0 / (1.0 + i)) * q;
}

/// Q^* t Q; real with unit determinant when t is an M-type product.
inline Transfer2x2 q_conjugate(const Transfer2x2& t) {
  const Transfer2x2 q = q_matrix();
  return q.adjoint() * t * q;
}

inline double max_imaginary_part(const Transfer2x2& t) {
  return t.imag().cwiseAbs().maxCoeff();
}

}  // namespace cmvlab
