#pragma once

// Two independent engines for det(z - X_[a,b]): banded LU with partial
// pivoting, and the cofactor-expansion recurrences along the first column.
// Also characteristic-polynomial coefficients by evaluation/interpolation.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "cmvlab/band_matrix.hpp"
#include "cmvlab/cmv.hpp"
#include "cmvlab/polynomial.hpp"

namespace cmvlab {

inline constexpr std::size_t max_banded_window = 4096;

inline ScaledDeterminant band_determinant(const BandMatrix& m) {
  if (m.empty()) return {};
  return BandLU(m).determinant();
}

/// det(z - X) for restriction kinds, det P(z) for the auxiliary kinds; 1 on the empty window.
inline ScaledDeterminant det_lu_scaled(const CmvRestriction& m, cplx z) {
  if (m.size() > max_banded_window) throw ArgumentError("det_lu: window exceeds the banded size bound");
  return band_determinant(m.characteristic(z));
}

inline cplx det_lu(const CmvRestriction& m, cplx z) { return det_lu_scaled(m, z).value(); }

/// det(z - X_[a,b]) straight from the sequence.
inline cplx restriction_det(const VerblunskySequence& seq, MatrixKind kind, std::int64_t a, std::int64_t b, cplx z) {
  return det_lu(build_restriction(seq, kind, a, b), z);
}

/// Values below 1e-13 * window size are treated as numerically zero.
inline bool is_numerically_zero(cplx value, std::size_t window_size) {
  return std::abs(value) < 1e-13 * double(window_size);
}

enum class RecurrenceRoute {
  /// D(k) = (z + conj(a_k) a_{k-1}) D(k+1) + sum_m conj(a_m) a_{k-1} prod rho^2 D(m+1), any window start.
  Expansion,
  /// Window start 0 only: one column expansion through det P_{n-1}, tail by Expansion.
  SingleStep,
};

namespace detail {

/// det(z - X_[first,last]) by the first-column expansion run backwards from
/// the end of the window. `alpha(k)` must be defined on [first-1, last].
template <class AlphaFn>
cplx expansion_determinant(std::int64_t first, std::int64_t last, cplx z, AlphaFn&& alpha) {
  if (last < first) return 1.0;
  // d_next = D(j+1), d_next2 = D(j+2), tail = T(j+1)
  cplx d_next = 1.0, d_next2 = 0.0, tail = 0.0;
  for (std::int64_t j = last; j >= first; --j) {
    const cplx a_j = alpha(j);
    const cplx a_prev = alpha(j - 1);
    cplx t_j = 0.0;
    if (j < last) {
      const double r = rho_of(a_j);
      t_j = r * r * (std::conj(alpha(j + 1)) * d_next2 + tail);
    }
    const cplx d_j = (z + std::conj(a_j) * a_prev) * d_next + a_prev * t_j;
    d_next2 = d_next;
    d_next = d_j;
    tail = t_j;
  }
  return d_next;
}

}  // namespace detail

inline cplx det_recurrence(const VerblunskySequence& seq, MatrixKind kind, Window window, cplx z,
                           RecurrenceRoute route = RecurrenceRoute::Expansion) {
  if (is_aux(kind)) throw ArgumentError("det_recurrence: auxiliary kinds are not restrictions");
  if (window.last < window.first - 1) throw ArgumentError("det_recurrence: window with a > b");
  const bool half_line = !is_extended(kind);
  if (half_line && window.first < 0) throw ArgumentError("det_recurrence: half-line window must start at >= 0");
  const VerblunskySequence source = is_primed(kind) ? negate(seq) : seq;
  auto alpha = [&](std::int64_t k) -> cplx {
    if (k == -1 && half_line) return -1.0;
    return source.coefficient_at(k);
  };
  if (window.empty()) return 1.0;

  if (route == RecurrenceRoute::Expansion)
    return detail::expansion_determinant(window.first, window.last, z, alpha);

  if (window.first != 0) throw ArgumentError("det_recurrence: single-step route needs a window starting at 0");
  const std::size_t n = window.size();
  const cplx a0 = alpha(0);
  const double r0 = rho_of(a0);
  const cplx tail = detail::expansion_determinant(1, window.last, z, alpha);
  // n == 1 has no second row, so the cofactor term through P_0 is absent.
  const cplx p_det = n == 1 ? cplx{} : det_lu(build_aux_p(source, n, false), z);
  if (half_line) return (z - std::conj(a0)) * tail + r0 * p_det;
  const cplx am1 = alpha(-1);
  return (z + std::conj(a0) * am1) * tail - r0 * am1 * p_det;
}

/// Coefficients of det(characteristic(z)) from its values at the (n+1)-st
/// roots of unity scaled by `radius`, via an inverse DFT.
inline ComplexPolynomial charpoly_coeffs(const CmvRestriction& m, double radius = 1.0) {
  const std::size_t n = m.size();
  if (n > 256) throw ArgumentError("charpoly_coeffs: window size above 256");
  const std::size_t count = n + 1;
  std::vector<cplx> values(count);
  std::vector<cplx> roots(count);
  for (std::size_t j = 0; j < count; ++j) {
    roots[j] = std::polar(1.0, two_pi * double(j) / double(count));
    values[j] = det_lu(m, radius * roots[j]);
  }
  std::vector<cplx> coeffs(count);
  double scale = 1.0;
  for (std::size_t k = 0; k < count; ++k) {
    cplx acc{};
    for (std::size_t j = 0; j < count; ++j) acc += values[j] * std::conj(roots[(j * k) % count]);
    coeffs[k] = acc / (double(count) * scale);
    scale *= radius;
  }
  return ComplexPolynomial(std::move(coeffs));
}

}  // namespace cmvlab
