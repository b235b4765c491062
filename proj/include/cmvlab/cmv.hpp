#pragma once

// Finite restrictions X_[a,b] of the half-line CMV matrix C, the extended CMV
// matrix E, their sign-flipped variants C' and E', and the auxiliary matrices
// P_{n-1}, P'_{n-1} that appear when det(z - E_[0,n-1]) is expanded along its
// first column.
//
// Entries follow the displayed five-diagonal pattern. Row r of either matrix
// references alpha_{r-2} .. alpha_{r+1}; the half-line matrix is the extended
// one with alpha_{-1} pinned to -1 (which makes rho_{-1} = 0 and cuts the
// coupling to negative indices).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmvlab/band_matrix.hpp"
#include "cmvlab/coefficients.hpp"

namespace cmvlab {

enum class MatrixKind { HalfLine, Extended, HalfLinePrimed, ExtendedPrimed, AuxP, AuxPPrimed };

inline std::string_view to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::HalfLine: return "C";
    case MatrixKind::Extended: return "E";
    case MatrixKind::HalfLinePrimed: return "Cp";
    case MatrixKind::ExtendedPrimed: return "Ep";
    case MatrixKind::AuxP: return "P";
    case MatrixKind::AuxPPrimed: return "Pp";
  }
  return "?";
}

inline MatrixKind parse_matrix_kind(std::string_view s) {
  for (auto k : {MatrixKind::HalfLine, MatrixKind::Extended, MatrixKind::HalfLinePrimed,
                 MatrixKind::ExtendedPrimed, MatrixKind::AuxP, MatrixKind::AuxPPrimed})
    if (to_string(k) == s) return k;
  throw ArgumentError("unknown matrix kind '" + std::string(s) + "' (expected C, E, Cp, Ep, P, Pp)");
}

inline bool is_primed(MatrixKind k) {
  return k == MatrixKind::HalfLinePrimed || k == MatrixKind::ExtendedPrimed || k == MatrixKind::AuxPPrimed;
}
inline bool is_extended(MatrixKind k) { return k == MatrixKind::Extended || k == MatrixKind::ExtendedPrimed; }
inline bool is_aux(MatrixKind k) { return k == MatrixKind::AuxP || k == MatrixKind::AuxPPrimed; }

/// Unprimed counterpart (primed kinds are the unprimed builders on the negated sequence).
inline MatrixKind unprimed(MatrixKind k) {
  switch (k) {
    case MatrixKind::HalfLinePrimed: return MatrixKind::HalfLine;
    case MatrixKind::ExtendedPrimed: return MatrixKind::Extended;
    case MatrixKind::AuxPPrimed: return MatrixKind::AuxP;
    default: return k;
  }
}

/// Index interval [first, last]; last == first - 1 is the empty window.
struct Window {
  std::int64_t first = 0;
  std::int64_t last = -1;

  std::size_t size() const { return std::size_t(last - first + 1); }
  bool empty() const { return last < first; }
  bool operator==(const Window&) const = default;
};

struct CmvRestriction {
  MatrixKind kind = MatrixKind::HalfLine;
  Window window;
  /// X_[a,b] for restriction kinds; P_{n-1} with z set to 0 for the auxiliary kinds.
  BandMatrix entries;
  /// Auxiliary kinds only: diagonal positions that carry +z.
  std::vector<bool> z_mask;
  std::shared_ptr<const VerblunskySequence> source;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }

  /// The matrix whose determinant is wanted: z - X for restrictions, P(z) for
  /// the auxiliary kinds.
  BandMatrix characteristic(cplx z) const {
    BandMatrix m = entries;
    const std::size_t n = m.size();
    if (is_aux(kind)) {
      for (std::size_t i = 0; i < n; ++i)
        if (z_mask[i]) m.at(i, i) += z;
      return m;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = m.first_col(i); j <= m.last_col(i); ++j) m.at(i, j) = -m(i, j);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) += z;
    return m;
  }
};

namespace detail {

/// Entry (r, c) of the bi-infinite five-diagonal pattern. `alpha(k)` and
/// `rho(k)` are only called for indices the entry actually references.
template <class AlphaFn, class RhoFn>
cplx cmv_pattern_entry(std::int64_t r, std::int64_t c, AlphaFn&& alpha, RhoFn&& rho) {
  const std::int64_t d = c - r;
  if (r % 2 == 0) {
    switch (d) {
      case -1: return std::conj(alpha(r)) * rho(r - 1);
      case 0: return -std::conj(alpha(r)) * alpha(r - 1);
      case 1: return std::conj(alpha(r + 1)) * rho(r);
      case 2: return rho(r + 1) * rho(r);
      default: return {};
    }
  }
  switch (d) {
    case -2: return rho(r - 1) * rho(r - 2);
    case -1: return -rho(r - 1) * alpha(r - 2);
    case 0: return -std::conj(alpha(r)) * alpha(r - 1);
    case 1: return -rho(r) * alpha(r - 1);
    default: return {};
  }
}

/// Builds X_[a,b] for X in {C, E} from coefficient table alpha_{a-1..b}.
inline BandMatrix build_pattern(const std::vector<cplx>& alpha, std::int64_t a, std::int64_t b) {
  const std::size_t n = std::size_t(b - a + 1);
  BandMatrix m(n, 2, 2);
  auto al = [&](std::int64_t k) { return alpha[std::size_t(k - (a - 1))]; };
  auto rh = [&](std::int64_t k) { return rho_of(alpha[std::size_t(k - (a - 1))]); };
  for (std::int64_t r = a; r <= b; ++r)
    for (std::int64_t c = std::max(a, r - 2); c <= std::min(b, r + 2); ++c)
      m.at(std::size_t(r - a), std::size_t(c - a)) = cmv_pattern_entry(r, c, al, rh);
  return m;
}

inline std::vector<cplx> coefficient_table(const VerblunskySequence& seq, std::int64_t a, std::int64_t b,
                                           bool half_line) {
  std::vector<cplx> t;
  t.reserve(std::size_t(b - a + 2));
  for (std::int64_t k = a - 1; k <= b; ++k) {
    if (k == -1 && half_line)
      t.emplace_back(-1.0, 0.0);
    else
      t.push_back(seq.coefficient_at(k));
  }
  return t;
}

}  // namespace detail

/// X_[a,b] = P* X P for X in {C, E, C', E'}. The empty window (b == a - 1) gives a 0x0 matrix.
inline CmvRestriction build_restriction(const VerblunskySequence& seq, MatrixKind kind, std::int64_t a,
                                        std::int64_t b) {
  if (is_aux(kind)) throw ArgumentError("build_restriction: use build_aux_p for P kinds");
  if (b < a - 1) throw ArgumentError("build_restriction: window with a > b");
  const bool half_line = !is_extended(kind);
  if (half_line && a < 0) throw ArgumentError("build_restriction: half-line window must start at index >= 0");

  CmvRestriction out;
  out.kind = kind;
  out.window = {a, b};
  const VerblunskySequence source = is_primed(kind) ? negate(seq) : seq;
  out.source = std::make_shared<const VerblunskySequence>(source);
  if (b < a) {
    out.entries = BandMatrix(0, 2, 2);
    return out;
  }
  out.entries = detail::build_pattern(detail::coefficient_table(source, a, b, half_line), a, b);
  return out;
}

/// P_{n-1} (or P'_{n-1}): the (n-1)x(n-1) minor of z - E_[0,n-1] with row 1 and
/// column 0 removed. It depends on neither alpha_{-1} nor alpha_0.
inline CmvRestriction build_aux_p(const VerblunskySequence& seq, std::size_t n, bool primed) {
  if (n < 1) throw ArgumentError("build_aux_p: n must be >= 1");
  CmvRestriction out;
  out.kind = primed ? MatrixKind::AuxPPrimed : MatrixKind::AuxP;
  out.window = {0, std::int64_t(n) - 1};
  const VerblunskySequence source = primed ? negate(seq) : seq;
  out.source = std::make_shared<const VerblunskySequence>(source);
  const std::size_t m = n - 1;
  out.entries = BandMatrix(m, 2, 2);
  out.z_mask.assign(m, false);
  if (m == 0) return out;

  const auto table = detail::coefficient_table(source, 0, std::int64_t(n) - 1, true);
  auto al = [&](std::int64_t k) { return table[std::size_t(k + 1)]; };
  auto rh = [&](std::int64_t k) { return rho_of(table[std::size_t(k + 1)]); };
  auto source_row = [](std::size_t i) { return std::int64_t(i == 0 ? 0 : i + 1); };
  for (std::size_t i = 0; i < m; ++i) {
    const std::int64_t r = source_row(i);
    for (std::size_t j = out.entries.first_col(i); j <= out.entries.last_col(i); ++j) {
      const std::int64_t c = std::int64_t(j) + 1;
      if (c < r - 2 || c > r + 2) continue;
      out.entries.at(i, j) = -detail::cmv_pattern_entry(r, c, al, rh);
    }
    out.z_mask[i] = (i >= 1);
  }
  return out;
}

/// Checks X_[a,b](x + omega) == X_[a+1,b+1](x)^T entrywise to 1e-12 for a
/// quasi-periodic sequence. For the half-line matrix this holds for a >= 1;
/// at a = 0 the pinned alpha_{-1} = -1 breaks it, while the extended matrix
/// (two-sided sequence) satisfies it at a = 0 as well.
inline bool shift_covariance_check(const VerblunskySequence& seq, std::int64_t a, std::int64_t b,
                                   MatrixKind kind = MatrixKind::HalfLine) {
  const auto* qp = std::get_if<QuasiPeriodicGenerator>(&seq.generator());
  if (!qp) throw ArgumentError("shift_covariance_check: requires a quasi-periodic sequence");
  if (!seq.rotations().empty()) throw ArgumentError("shift_covariance_check: rotated sequences unsupported");
  const auto shifted = VerblunskySequence::quasi_periodic(qp->lambda, qp->h, qp->omega, qp->x + qp->omega,
                                                          seq.two_sided());
  const auto lhs = build_restriction(shifted, kind, a, b).entries;
  const auto rhs = build_restriction(seq, kind, a + 1, b + 1).entries.transposed();
  for (std::size_t i = 0; i < lhs.size(); ++i)
    for (std::size_t j = 0; j < lhs.size(); ++j)
      if (std::abs(lhs(i, j) - rhs(i, j)) > 1e-12) return false;
  return true;
}

}  // namespace cmvlab
