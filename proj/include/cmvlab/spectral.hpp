#pragma once

// Spectra of CMV truncations, resolvent entries, the Cramer-rule determinant
// bound, the resolvent-norm bound for matrices inside the disc of radius |z|,
// and eigenvector decay fits.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cmvlab/cmv.hpp"
#include "cmvlab/determinants.hpp"
#include "cmvlab/dynamics.hpp"
#include "cmvlab/errors.hpp"
#include "cmvlab/parallel.hpp"

namespace cmvlab {

inline constexpr std::size_t max_eig_size = 512;
inline constexpr double singular_pivot = 1e-13;

struct DecayFit {
  bool applicable = false;
  std::size_t peak = 0;
  double rate = 0.0;  // nats per site
  double r2 = 0.0;
  std::size_t points = 0;
};

struct SpectrumReport {
  std::size_t size = 0;
  std::vector<cplx> eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // unit columns
  std::vector<double> residuals;  // ||A v - mu v||
  std::vector<DecayFit> decay_fits;
};

/// Dense complex eigendecomposition (Hessenberg reduction + shifted QR in Eigen),
/// residual-checked against 1e-8 N.
inline SpectrumReport eig(const Eigen::MatrixXcd& a) {
  const auto n = std::size_t(a.rows());
  if (a.rows() != a.cols()) throw ArgumentError("eig: matrix must be square");
  if (n > max_eig_size) throw ArgumentError("eig: size above 512");
  SpectrumReport r;
  r.size = n;
  if (n == 0) return r;
  // Entries below eps ||A|| are dropped: QR perturbs by that much anyway, and
  // values near 1e-300 otherwise defeat its deflation test. Residuals below
  // are taken against the original matrix.
  const double floor = std::numeric_limits<double>::epsilon() * a.norm();
  const Eigen::MatrixXcd cleaned = a.unaryExpr([floor](cplx v) { return std::abs(v) <= floor ? cplx{} : v; });
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(cleaned, true);
  if (solver.info() != Eigen::Success) throw NumericalError("eig: QR iteration did not converge");
  r.eigenvectors = solver.eigenvectors();
  r.eigenvalues.resize(n);
  r.residuals.resize(n);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = Eigen::Index(k);
    const double norm = r.eigenvectors.col(i).norm();
    if (norm > 0.0) r.eigenvectors.col(i) /= norm;
    r.eigenvalues[k] = solver.eigenvalues()(i);
    r.residuals[k] = (a * r.eigenvectors.col(i) - r.eigenvalues[k] * r.eigenvectors.col(i)).norm();
    worst = std::max(worst, r.residuals[k]);
  }
  if (!(worst <= 1e-8 * double(n))) throw NumericalError("eig: eigenpair residual above 1e-8 N");
  return r;
}

inline SpectrumReport eig(const CmvRestriction& m) {
  if (is_aux(m.kind)) throw ArgumentError("eig: auxiliary kinds are not restrictions");
  return eig(m.entries.to_dense());
}

// ---------------------------------------------------------------------------
// Green's function

/// Column n2 of (z - X)^{-1}, one banded LU solve.
inline std::vector<cplx> green_column(const CmvRestriction& m, cplx z, std::size_t n2) {
  if (n2 >= m.size()) throw IndexError("green: column outside window");
  const BandLU lu(m.characteristic(z));
  if (lu.min_pivot() < singular_pivot) throw SingularError("green: z is numerically in the spectrum");
  std::vector<cplx> col(m.size(), cplx{});
  col[n2] = 1.0;
  lu.solve(col);
  return col;
}

inline cplx green(const CmvRestriction& m, cplx z, std::size_t n1, std::size_t n2) {
  if (n1 >= m.size()) throw IndexError("green: row outside window");
  return green_column(m, z, n2)[n1];
}

struct CramerReport {
  double lhs = 0.0;    // |G(n1, n2)|
  double rhs = 0.0;    // |det(z - C_[0,n1-1]) det(z - C_[n2+1,n0-1]) / det(z - C_[0,n0-1])|
  double ratio = 0.0;  // lhs / rhs
  bool near_singular = false;
};

/// Compares |G(n1,n2)| on C_[0,n0-1] with the determinant ratio. The complementary
/// block is the part of the window after n2, i.e. [n2+1, n0-1].
/// Right-hand window: Interior stops at n0 - 1 (empty when n2 = n0 - 1);
/// Literal runs to n0 and needs alpha up to n0 + 1.
enum class CramerWindow { Interior, Literal };

inline CramerReport cramer_bound_check(const VerblunskySequence& seq, std::size_t n0, cplx z, std::size_t n1,
                                       std::size_t n2, CramerWindow window = CramerWindow::Interior) {
  if (n0 < 1) throw ArgumentError("cramer_bound_check: empty window");
  if (n1 > n2 || n2 >= n0) throw ArgumentError("cramer_bound_check: need n1 <= n2 < n0");
  const auto full = build_restriction(seq, MatrixKind::HalfLine, 0, std::int64_t(n0) - 1);
  const cplx denom = det_lu(full, z);
  const cplx left = restriction_det(seq, MatrixKind::HalfLine, 0, std::int64_t(n1) - 1, z);
  const cplx right = restriction_det(seq, MatrixKind::HalfLine, std::int64_t(n2) + 1,
                                     std::int64_t(n0) - (window == CramerWindow::Interior ? 1 : 0), z);
  CramerReport r;
  r.near_singular = is_numerically_zero(denom, n0);
  r.rhs = r.near_singular ? std::numeric_limits<double>::infinity() : std::abs(left * right / denom);
  try {
    r.lhs = std::abs(green(full, z, n1, n2));
  } catch (const SingularError&) {
    r.near_singular = true;
    r.lhs = std::numeric_limits<double>::infinity();
  }
  r.ratio = r.near_singular ? std::numeric_limits<double>::quiet_NaN() : r.lhs / r.rhs;
  return r;
}

// ---------------------------------------------------------------------------
// dist(z, sigma(A)) ||(A - z)^{-1}|| <= cot(pi / 4n) for |z| >= ||A||

struct Ds06Report {
  bool in_domain = false;
  double product = 0.0;
  double bound = 0.0;
};

inline double spectral_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues()(0);
}

inline Ds06Report ds06_check(const Eigen::MatrixXcd& a, cplx z) {
  const auto n = a.rows();
  if (n < 1 || a.cols() != n) throw ArgumentError("ds06_check: need a nonempty square matrix");
  Ds06Report r;
  r.bound = 1.0 / std::tan(std::numbers::pi / (4.0 * double(n)));
  if (std::abs(z) < spectral_norm(a)) return r;
  const auto spectrum = eig(a);
  double dist = std::numeric_limits<double>::infinity();
  for (const auto& mu : spectrum.eigenvalues) dist = std::min(dist, std::abs(z - mu));
  const Eigen::MatrixXcd shifted = a - z * Eigen::MatrixXcd::Identity(n, n);
  const auto sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(shifted).singularValues();
  const double smin = sv(n - 1);
  if (!(smin > 0.0) || dist == 0.0) return r;
  r.in_domain = true;
  r.product = dist / smin;
  return r;
}

// ---------------------------------------------------------------------------
// Eigenvector decay

struct FitParams {
  std::size_t buffer = 5;         // sites next to the peak left out
  std::size_t boundary = 5;       // trailing sites left out
  double floor = 1e-13;           // relative to the peak modulus
  std::size_t min_points = 8;
  double min_modulus = 0.99;      // eigenvalues closer to the circle only
};

/// Least-squares fit of log|xi_j| = c - rate |j - peak| over the tails.
inline DecayFit fit_decay(const Eigen::VectorXcd& v, cplx mu, const FitParams& p) {
  DecayFit f;
  const auto n = std::size_t(v.size());
  if (n == 0) return f;
  Eigen::Index peak = 0;
  v.cwiseAbs().maxCoeff(&peak);
  f.peak = std::size_t(peak);
  if (std::abs(mu) < p.min_modulus) return f;
  const double top = std::abs(v(peak));
  if (!(top > 0.0)) return f;
  std::vector<double> xs, ys;
  const std::size_t stop = n > p.boundary ? n - p.boundary : 0;
  for (std::size_t j = 0; j < stop; ++j) {
    const std::size_t d = j > f.peak ? j - f.peak : f.peak - j;
    const double mag = std::abs(v(Eigen::Index(j)));
    if (d < p.buffer || mag < p.floor * top) continue;
    xs.push_back(double(d));
    ys.push_back(std::log(mag));
  }
  f.points = xs.size();
  if (xs.size() < p.min_points) return f;
  const double m = double(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) return f;
  const double slope = sxy / sxx;
  f.applicable = true;
  f.rate = -slope;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

struct LocalizationOptions {
  FitParams fit;
  int lyapunov_n = 400;        // matched L(z) uses L_n at this n
  std::size_t lyapunov_grid = 64;
  unsigned threads = 1;
};

struct LocalizationReport {
  SpectrumReport spectrum;
  std::vector<double> matched_L;  // per eigenvalue, NaN where no fit
  std::size_t fitted = 0;
  double median_r2 = std::numeric_limits<double>::quiet_NaN();
  double median_rate = std::numeric_limits<double>::quiet_NaN();
  double median_ratio = std::numeric_limits<double>::quiet_NaN();  // rate / L(z)
};

/// Eigenvectors of C_[0,N-1](x) with tail fits, each compared to L_n at z = mu / |mu|.
inline LocalizationReport localize(const QuasiPeriodicFamily& family, double x, std::size_t N,
                                   const LocalizationOptions& opt = {}) {
  if (!(family.lambda > 0.0 && family.lambda < 1.0)) throw ArgumentError("localize: lambda must lie in (0, 1)");
  if (N < 1 || N > max_eig_size) throw ArgumentError("localize: N must lie in [1, 512]");
  LocalizationReport r;
  const auto seq = family.at(x);
  r.spectrum = eig(build_restriction(seq, MatrixKind::HalfLine, 0, std::int64_t(N) - 1));
  const std::size_t count = r.spectrum.eigenvalues.size();
  r.spectrum.decay_fits.resize(count);
  r.matched_L.assign(count, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < count; ++k)
    r.spectrum.decay_fits[k] =
        fit_decay(r.spectrum.eigenvectors.col(Eigen::Index(k)), r.spectrum.eigenvalues[k], opt.fit);

  LyapunovOptions lopt;
  lopt.grid = opt.lyapunov_grid;
  parallel_for(count, opt.threads, [&](std::size_t k) {
    if (!r.spectrum.decay_fits[k].applicable) return;
    const cplx mu = r.spectrum.eigenvalues[k];
    r.matched_L[k] = lyapunov_n(family, opt.lyapunov_n, mu / std::abs(mu), lopt).L_n;
  });

  std::vector<double> r2, rate, ratio;
  for (std::size_t k = 0; k < count; ++k) {
    const auto& f = r.spectrum.decay_fits[k];
    if (!f.applicable) continue;
    r2.push_back(f.r2);
    rate.push_back(f.rate);
    if (r.matched_L[k] > 0.0) ratio.push_back(f.rate / r.matched_L[k]);
  }
  r.fitted = r2.size();
  r.median_r2 = median(r2);
  r.median_rate = median(rate);
  r.median_ratio = median(ratio);
  return r;
}

}  // namespace cmvlab
