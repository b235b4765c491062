#pragma once

// Transfer matrices rebuilt from Dirichlet-type determinants, and residual
// checks for the determinant identities that connect CMV restrictions,
// orthogonal polynomials and the Szego cocycle.
//
// Half-line form, for |z| = 1 with d0 = det(z - C_[0,n-1]) and d1 = det(z - C_[1,n-1]):
//
//   S^z_n = prod_j rho_j^{-1} [ z d1              d0 - z d1 ]
//                             [ z (d0 - z d1)^*   d1^*      ]
//
// where ^* is the Szego dual at nominal degree n - 1, applied pointwise on the
// circle. The extended form replaces the (1,2) entry by
// (z det(z - E_[1,n-1]) - det(z - E_[0,n-1])) / alpha_{-1}, which is evaluated
// here without the division as -conj(alpha_0) det(z - E_[1,n-1]) + rho_0 det P_{n-1}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cmvlab/cmv.hpp"
#include "cmvlab/cocycle.hpp"
#include "cmvlab/determinants.hpp"
#include "cmvlab/polynomial.hpp"

namespace cmvlab {

struct Residual {
  double absolute = 0.0;
  double relative = 0.0;

  /// Passes on relative tolerance, or on the absolute floor when the terms are tiny.
  bool within(double relative_tol, double absolute_floor = 1e-12) const {
    return relative <= relative_tol || absolute <= absolute_floor;
  }
};

inline Residual make_residual(double difference, double scale) {
  Residual r;
  r.absolute = difference;
  r.relative = scale > 0.0 ? difference / scale : (difference == 0.0 ? 0.0 : INFINITY);
  return r;
}

/// Worst entrywise difference, relative to 1 + ||reference||.
inline Residual transfer_residual(const Transfer2x2& candidate, const Transfer2x2& reference) {
  const double diff = (candidate - reference).cwiseAbs().maxCoeff();
  return make_residual(diff, 1.0 + operator_norm(reference));
}

// ---------------------------------------------------------------------------
// Schrodinger warm-up

/// det(E - H_v[a,b]) for the tridiagonal operator u(n+1) + u(n-1) + v_n u(n),
/// indices 1-based into `potential` (potential[0] is v_1). Continuant
/// conventions: 1 on [a, a-1], 0 on [a, a-2].
inline double dirichlet_determinant(std::span<const double> potential, double energy, long a, long b) {
  if (b == a - 1) return 1.0;
  if (b < a - 1) return 0.0;
  if (a < 1 || std::size_t(b) > potential.size()) throw IndexError("dirichlet_determinant: window outside potential");
  const std::size_t n = std::size_t(b - a + 1);
  BandMatrix m(n, 1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    m.at(i, i) = energy - potential[std::size_t(a - 1) + i];
    if (i + 1 < n) {
      m.at(i, i + 1) = -1.0;
      m.at(i + 1, i) = -1.0;
    }
  }
  return band_determinant(m).value().real();
}

struct SchrodingerReport {
  Eigen::Matrix2d product;
  Eigen::Matrix2d determinant_form;
  Residual residual;
};

inline SchrodingerReport schrodinger_formula_check(std::span<const double> potential, double energy, int n) {
  if (n < 1) throw ArgumentError("schrodinger_formula_check: n must be >= 1");
  if (potential.size() < std::size_t(n)) throw IndexError("schrodinger_formula_check: potential shorter than n");
  SchrodingerReport r;
  r.product = Eigen::Matrix2d::Identity();
  for (int j = 1; j <= n; ++j) {
    Eigen::Matrix2d step;
    step << energy - potential[std::size_t(j - 1)], -1.0, 1.0, 0.0;
    r.product = step * r.product;
  }
  r.determinant_form << dirichlet_determinant(potential, energy, 1, n),
      -dirichlet_determinant(potential, energy, 2, n), dirichlet_determinant(potential, energy, 1, n - 1),
      -dirichlet_determinant(potential, energy, 2, n - 1);
  const double diff = (r.product - r.determinant_form).cwiseAbs().maxCoeff();
  r.residual = make_residual(diff, 1.0 + r.product.cwiseAbs().maxCoeff());
  return r;
}

// ---------------------------------------------------------------------------
// Determinant forms of S^z_n

inline double inverse_rho_product(const VerblunskySequence& seq, int n) { return 1.0 / phi_norm(seq, n); }

namespace detail {

inline Transfer2x2 assemble_from_determinants(cplx z, int n, cplx upper_left, cplx upper_right, double prefactor) {
  Transfer2x2 s;
  s << z * upper_left, upper_right, z * dual_at_point(upper_right, z, n - 1), dual_at_point(upper_left, z, n - 1);
  return prefactor * s;
}

}  // namespace detail

/// S^z_n from d0 = det(z - C_[0,n-1]) and d1 = det(z - C_[1,n-1]).
inline Transfer2x2 theorem_halfline_eval(const VerblunskySequence& seq, int n, cplx z) {
  require_unit(z, "theorem_halfline_eval");
  if (n < 1) throw ArgumentError("theorem_halfline_eval: n must be >= 1");
  const cplx d0 = restriction_det(seq, MatrixKind::HalfLine, 0, n - 1, z);
  const cplx d1 = restriction_det(seq, MatrixKind::HalfLine, 1, n - 1, z);
  return detail::assemble_from_determinants(z, n, d1, d0 - z * d1, inverse_rho_product(seq, n));
}

/// (1,2) numerator of the extended form after the alpha_{-1} factor cancels.
inline cplx extended_upper_right(const VerblunskySequence& seq, int n, cplx z) {
  const cplx a0 = seq.coefficient_at(0);
  const cplx e1 = restriction_det(seq, MatrixKind::Extended, 1, n - 1, z);
  // n == 1: the 1x1 matrix has no second row, so the P-cofactor term is absent.
  if (n == 1) return -std::conj(a0);
  return -std::conj(a0) * e1 + rho_of(a0) * det_lu(build_aux_p(seq, std::size_t(n), false), z);
}

/// S^z_n from extended-matrix determinants; never divides by alpha_{-1}.
inline Transfer2x2 theorem_extended_eval(const VerblunskySequence& seq, int n, cplx z) {
  require_unit(z, "theorem_extended_eval");
  if (n < 1) throw ArgumentError("theorem_extended_eval: n must be >= 1");
  if (!seq.defined_at(-1)) throw IndexError("theorem_extended_eval: alpha_{-1} must be defined");
  const cplx e1 = restriction_det(seq, MatrixKind::Extended, 1, n - 1, z);
  return detail::assemble_from_determinants(z, n, e1, extended_upper_right(seq, n, z), inverse_rho_product(seq, n));
}

/// Extended form with the literal division by alpha_{-1}; alpha_{-1} must be nonzero.
inline Transfer2x2 theorem_extended_eval_literal(const VerblunskySequence& seq, int n, cplx z) {
  require_unit(z, "theorem_extended_eval_literal");
  if (n < 1) throw ArgumentError("theorem_extended_eval_literal: n must be >= 1");
  const cplx am1 = seq.coefficient_at(-1);
  if (am1 == cplx{}) throw ArgumentError("theorem_extended_eval_literal: alpha_{-1} is zero");
  const cplx e1 = restriction_det(seq, MatrixKind::Extended, 1, n - 1, z);
  const cplx e0 = restriction_det(seq, MatrixKind::Extended, 0, n - 1, z);
  return detail::assemble_from_determinants(z, n, e1, (z * e1 - e0) / am1, inverse_rho_product(seq, n));
}

/// prod rho^{-1} [[z B^*, A^*], [z A, B]] with A, B from the Phi/Psi split
/// (duals at nominal degree n - 1). A third route to S^z_n.
inline Transfer2x2 ab_transfer_eval(const VerblunskySequence& seq, int n, cplx z) {
  const auto ab = ab_decomposition(seq, n);
  const auto a_star = szego_dual(ab.a, n - 1);
  const auto b_star = szego_dual(ab.b, n - 1);
  Transfer2x2 s;
  s << z * b_star(z), a_star(z), z * ab.a(z), ab.b(z);
  return inverse_rho_product(seq, n) * s;
}

/// d0 - z d1 as a coefficient polynomial (nominal degree n); its z^n term cancels.
inline ComplexPolynomial halfline_numerator(const VerblunskySequence& seq, int n) {
  const auto c0 = charpoly_coeffs(build_restriction(seq, MatrixKind::HalfLine, 0, n - 1));
  const auto c1 = charpoly_coeffs(build_restriction(seq, MatrixKind::HalfLine, 1, n - 1));
  return c0.padded(n) - c1.times_z().padded(n);
}

// ---------------------------------------------------------------------------
// Lemma residuals

/// alpha_{-1} (d0 - z dE1) against z dE1 - dE0 (the cleared equivalency identity).
inline Residual equivalency_check(const VerblunskySequence& seq, int n, cplx z) {
  if (n < 1) throw ArgumentError("equivalency_check: n must be >= 1");
  const cplx am1 = seq.coefficient_at(-1);
  const cplx d0 = restriction_det(seq, MatrixKind::HalfLine, 0, n - 1, z);
  const cplx e1 = restriction_det(seq, MatrixKind::Extended, 1, n - 1, z);
  const cplx e0 = restriction_det(seq, MatrixKind::Extended, 0, n - 1, z);
  const cplx lhs = am1 * (d0 - z * e1);
  const cplx rhs = z * e1 - e0;
  const double scale = std::max(std::abs(am1) * (std::abs(d0) + std::abs(z * e1)), std::abs(z * e1) + std::abs(e0));
  return make_residual(std::abs(lhs - rhs), scale);
}

/// Psi_n(z) against det(z - C'_[0,n-1]).
inline Residual lemma_lskp_check(const VerblunskySequence& seq, int n, cplx z) {
  if (n < 1) throw ArgumentError("lemma_lskp_check: n must be >= 1");
  const cplx psi = psi_second_kind_at(seq, n, z);
  const cplx det = restriction_det(seq, MatrixKind::HalfLinePrimed, 0, n - 1, z);
  return make_residual(std::abs(psi - det), std::max(std::abs(psi), std::abs(det)));
}

struct LfspResiduals {
  Residual extended;  // det(z - E_[1,n-1]) vs det(z - E'_[1,n-1])
  Residual aux;       // det P_{n-1} vs -det P'_{n-1}
};

inline LfspResiduals lemma_lfsp_check(const VerblunskySequence& seq, int n, cplx z) {
  if (n < 2) throw ArgumentError("lemma_lfsp_check: n must be >= 2");
  const cplx e = restriction_det(seq, MatrixKind::Extended, 1, n - 1, z);
  const cplx ep = restriction_det(seq, MatrixKind::ExtendedPrimed, 1, n - 1, z);
  const cplx p = det_lu(build_aux_p(seq, std::size_t(n), false), z);
  const cplx pp = det_lu(build_aux_p(seq, std::size_t(n), true), z);
  return {make_residual(std::abs(e - ep), std::max(std::abs(e), std::abs(ep))),
          make_residual(std::abs(p + pp), std::max(std::abs(p), std::abs(pp)))};
}

/// Phi_n + Psi_n against 2 z det(z - E_[1,n-1]).
inline Residual efsd_check(const VerblunskySequence& seq, int n, cplx z) {
  if (n < 1) throw ArgumentError("efsd_check: n must be >= 1");
  const cplx phi = phi_monic_at(seq, n, z);
  const cplx psi = psi_second_kind_at(seq, n, z);
  const cplx rhs = 2.0 * z * restriction_det(seq, MatrixKind::Extended, 1, n - 1, z);
  return make_residual(std::abs(phi + psi - rhs), std::max(std::abs(phi) + std::abs(psi), std::abs(rhs)));
}

}  // namespace cmvlab
