#pragma once

// Complex polynomials with a nominal degree, the Szego dual (reversal), the
// monic orthogonal polynomials Phi_n from the Szego recurrence, second-kind
// polynomials Psi_n, and the A/B split of the transfer matrix.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "cmvlab/coefficients.hpp"
#include "cmvlab/errors.hpp"

namespace cmvlab {

/// Coefficient k multiplies z^k. The nominal degree is coeffs.size() - 1 and
/// may exceed the index of the last nonzero coefficient; the zero polynomial
/// with no coefficients has nominal degree -1.
class ComplexPolynomial {
 public:
  ComplexPolynomial() = default;
  explicit ComplexPolynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {}

  static ComplexPolynomial constant(cplx c) { return ComplexPolynomial({c}); }
  static ComplexPolynomial monomial(int n, cplx c = 1.0) {
    std::vector<cplx> v(std::size_t(n) + 1);
    v.back() = c;
    return ComplexPolynomial(std::move(v));
  }

  int nominal_degree() const { return int(coeffs_.size()) - 1; }

  /// Index of the last coefficient with modulus above tol (-1 if none).
  int degree(double tol = 0.0) const {
    for (int k = nominal_degree(); k >= 0; --k)
      if (std::abs(coeffs_[std::size_t(k)]) > tol) return k;
    return -1;
  }

  cplx coeff(int k) const {
    return (k >= 0 && k <= nominal_degree()) ? coeffs_[std::size_t(k)] : cplx{};
  }
  std::span<const cplx> coefficients() const { return coeffs_; }

  /// Horner evaluation.
  cplx operator()(cplx z) const {
    cplx acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// Same polynomial at a larger (or equal) nominal degree.
  ComplexPolynomial padded(int n) const {
    std::vector<cplx> v = coeffs_;
    if (n + 1 > int(v.size())) v.resize(std::size_t(n) + 1);
    return ComplexPolynomial(std::move(v));
  }

  ComplexPolynomial times_z() const {
    std::vector<cplx> v(coeffs_.size() + 1);
    std::copy(coeffs_.begin(), coeffs_.end(), v.begin() + 1);
    return ComplexPolynomial(std::move(v));
  }

  friend ComplexPolynomial operator+(const ComplexPolynomial& a, const ComplexPolynomial& b) {
    const int n = std::max(a.nominal_degree(), b.nominal_degree());
    std::vector<cplx> v(std::size_t(n + 1));
    for (int k = 0; k <= n; ++k) v[std::size_t(k)] = a.coeff(k) + b.coeff(k);
    return ComplexPolynomial(std::move(v));
  }
  friend ComplexPolynomial operator-(const ComplexPolynomial& a, const ComplexPolynomial& b) {
    return a + (-1.0) * b;
  }
  friend ComplexPolynomial operator*(cplx s, const ComplexPolynomial& p) {
    std::vector<cplx> v = p.coeffs_;
    for (auto& c : v) c *= s;
    return ComplexPolynomial(std::move(v));
  }

  bool operator==(const ComplexPolynomial&) const = default;

 private:
  std::vector<cplx> coeffs_;
};

inline cplx evaluate(const ComplexPolynomial& p, cplx z) { return p(z); }

/// Q*(z) = z^n conj(Q(1/conj z)) at nominal degree n.
inline ComplexPolynomial szego_dual(const ComplexPolynomial& p, int n) {
  if (n < p.degree()) throw ArgumentError("szego_dual: nominal degree below actual degree");
  std::vector<cplx> v(std::size_t(n + 1));
  for (int k = 0; k <= n; ++k) v[std::size_t(k)] = std::conj(p.coeff(n - k));
  return ComplexPolynomial(std::move(v));
}

inline cplx integer_power(cplx z, int n) {
  cplx result = 1.0;
  cplx base = z;
  for (unsigned e = unsigned(n); e != 0; e >>= 1) {
    if (e & 1u) result *= base;
    base *= base;
  }
  return result;
}

/// Pointwise Szego dual on the circle: z^n conj(value), valid for |z| = 1.
inline cplx dual_at_point(cplx value, cplx z, int n) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw ArgumentError("dual_at_point: z must lie on the unit circle");
  return integer_power(z, n) * std::conj(value);
}

/// (Phi_n, Phi_n^*) by the Szego recurrence
///   Phi_{k+1} = z Phi_k - conj(alpha_k) Phi_k^*,  Phi_{k+1}^* = Phi_k^* - alpha_k z Phi_k.
/// Coefficients are carried in long double and rounded once at the end.
inline std::pair<ComplexPolynomial, ComplexPolynomial> phi_monic_pair(const VerblunskySequence& seq, int n) {
  if (n < 0) throw ArgumentError("phi_monic: n must be >= 0");
  using lc = std::complex<long double>;
  std::vector<lc> phi{1.0L}, dual{1.0L};
  phi.reserve(std::size_t(n + 1));
  dual.reserve(std::size_t(n + 1));
  for (int k = 0; k < n; ++k) {
    const cplx a64 = seq.coefficient_at(k);
    const lc a(a64.real(), a64.imag()), ac = std::conj(a);
    // phi, dual have degree k; z phi has degree k + 1.
    std::vector<lc> next(std::size_t(k + 2)), next_dual(std::size_t(k + 2));
    for (int j = 0; j <= k + 1; ++j) {
      const lc z_phi = j > 0 ? phi[std::size_t(j - 1)] : lc{};
      const lc d = j <= k ? dual[std::size_t(j)] : lc{};
      next[std::size_t(j)] = z_phi - ac * d;
      next_dual[std::size_t(j)] = d - a * z_phi;
    }
    phi = std::move(next);
    dual = std::move(next_dual);
  }
  auto round = [](const std::vector<lc>& v) {
    std::vector<cplx> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = cplx(double(v[j].real()), double(v[j].imag()));
    return ComplexPolynomial(std::move(out));
  };
  return {round(phi), round(dual)};
}

inline ComplexPolynomial phi_monic(const VerblunskySequence& seq, int n) { return phi_monic_pair(seq, n).first; }

/// Psi_n: Phi_n for the sequence rotated by -1.
inline ComplexPolynomial psi_second_kind(const VerblunskySequence& seq, int n) {
  return phi_monic(negate(seq), n);
}

/// Phi_n(z) by running the same recurrence on values instead of coefficients.
/// Far better conditioned than Horner on the coefficients when |Phi_n(z)| is
/// small next to the coefficient sizes.
inline cplx phi_monic_at(const VerblunskySequence& seq, int n, cplx z) {
  if (n < 0) throw ArgumentError("phi_monic: n must be >= 0");
  cplx phi = 1.0, dual = 1.0;
  for (int k = 0; k < n; ++k) {
    const cplx a = seq.coefficient_at(k);
    const cplx next = z * phi - std::conj(a) * dual;
    dual = dual - a * z * phi;
    phi = next;
  }
  return phi;
}

inline cplx psi_second_kind_at(const VerblunskySequence& seq, int n, cplx z) { return phi_monic_at(negate(seq), n, z); }

/// prod_{j<n} rho_j, the norm of Phi_n.
inline double phi_norm(const VerblunskySequence& seq, int n) {
  double p = 1.0;
  for (int j = 0; j < n; ++j) p *= seq.rho_at(j);
  return p;
}

/// phi_n = Phi_n / ||Phi_n||.
inline ComplexPolynomial phi_normalized(const VerblunskySequence& seq, int n) {
  return (1.0 / phi_norm(seq, n)) * phi_monic(seq, n);
}

struct ABDecomposition {
  ComplexPolynomial a;  // A_{n-1}, nominal degree n-1
  ComplexPolynomial b;  // B_{n-1}, nominal degree n-1
};

/// A_{n-1} = (Phi_n^* - Psi_n^*) / (2z),  B_{n-1} = (Phi_n^* + Psi_n^*) / 2.
/// The constant term of the difference and the z^n term of the sum cancel
/// structurally; the division by z drops the constant coefficient.
inline ABDecomposition ab_decomposition(const VerblunskySequence& seq, int n) {
  if (n < 1) throw ArgumentError("ab_decomposition: n must be >= 1");
  const auto phi_star = szego_dual(phi_monic(seq, n), n);
  const auto psi_star = szego_dual(psi_second_kind(seq, n), n);
  const auto diff = phi_star - psi_star;
  const auto sum = phi_star + psi_star;
  if (std::abs(diff.coeff(0)) > 1e-10)
    throw ConsistencyError("ab_decomposition: Phi_n^* - Psi_n^* has a nonzero constant term");
  if (std::abs(sum.coeff(n)) > 1e-10)
    throw ConsistencyError("ab_decomposition: Phi_n^* + Psi_n^* has a nonzero z^n term");
  std::vector<cplx> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    a[std::size_t(k)] = 0.5 * diff.coeff(k + 1);
    b[std::size_t(k)] = 0.5 * sum.coeff(k);
  }
  return {ComplexPolynomial(std::move(a)), ComplexPolynomial(std::move(b))};
}

}  // namespace cmvlab
