#pragma once

// Lyapunov exponents of the quasi-periodic M^z cocycle, empirical large
// deviation statistics, and a brute-force Diophantine check.
//
// L_n(z) = (1/n) \int_T log ||M^z_n(x)|| dx is a uniform Riemann sum over
// G phases x_k = k / G + shift. Per-phase values land in fixed slots and are
// reduced by pairwise summation, so threads never change the result.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cmvlab/cocycle.hpp"
#include "cmvlab/coefficients.hpp"
#include "cmvlab/errors.hpp"
#include "cmvlab/parallel.hpp"

namespace cmvlab {

struct LyapunovEstimate {
  int n = 0;
  cplx z{1.0, 0.0};
  std::size_t grid_size = 0;
  double L_n = 0.0;
  std::vector<double> samples;  // (1/n) log ||M^z_n(x_k)||, only when requested
};

struct LyapunovOptions {
  std::size_t grid = 1024;
  double shift = 0.0;
  unsigned threads = 1;
  bool keep_samples = false;
};

/// (1/n) log ||M^z_n(x)|| for one phase.
inline double log_norm_rate(const QuasiPeriodicFamily& family, double x, int n, cplx z) {
  const auto seq = family.at(x);
  return m_transfer_scaled(seq, n, z).log_norm() / double(n);
}

inline LyapunovEstimate lyapunov_n(const QuasiPeriodicFamily& family, int n, cplx z, const LyapunovOptions& opt = {}) {
  require_unit(z, "lyapunov_n");
  if (n < 1) throw ArgumentError("lyapunov_n: n must be >= 1");
  if (opt.grid < 1) throw ArgumentError("lyapunov_n: empty x grid");
  LyapunovEstimate est;
  est.n = n;
  est.z = z;
  est.grid_size = opt.grid;
  std::vector<double> values(opt.grid, 0.0);
  // alpha == 0: every step is unitary, so the exponent is exactly zero.
  if (family.lambda != 0.0) {
    parallel_for(opt.grid, opt.threads, [&](std::size_t k) {
      values[k] = log_norm_rate(family, double(k) / double(opt.grid) + opt.shift, n, z);
    });
    est.L_n = pairwise_sum(values) / double(opt.grid);
  }
  if (opt.keep_samples) est.samples = std::move(values);
  return est;
}

struct LyapunovLimit {
  double L = 0.0;             // min over the schedule
  double largest_n_value = 0.0;
  std::vector<LyapunovEstimate> table;
  bool monotone = true;       // no step up larger than `tolerance`
  double tolerance = 1e-3;
};

inline LyapunovLimit lyapunov_limit(const QuasiPeriodicFamily& family, std::span<const int> schedule, cplx z,
                                    const LyapunovOptions& opt = {}, double tolerance = 1e-3) {
  if (schedule.empty()) throw ArgumentError("lyapunov_limit: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw ArgumentError("lyapunov_limit: schedule must be increasing");
  LyapunovLimit out;
  out.tolerance = tolerance;
  out.L = std::numeric_limits<double>::infinity();
  for (int n : schedule) {
    auto est = lyapunov_n(family, n, z, opt);
    if (!out.table.empty() && est.L_n > out.table.back().L_n + tolerance) out.monotone = false;
    out.L = std::min(out.L, est.L_n);
    out.table.push_back(std::move(est));
  }
  out.largest_n_value = out.table.back().L_n;
  return out;
}

// ---------------------------------------------------------------------------

struct DiophantineResult {
  bool pass = true;
  std::optional<std::int64_t> first_violation;
  std::int64_t minimizing_k = 1;   // argmin of ||k omega|| k^A
  double minimum_scaled = 0.0;     // that minimum
};

/// Distance to the nearest integer.
inline double circle_distance(double t) {
  const double f = t - std::floor(t);
  return std::min(f, 1.0 - f);
}

/// ||k omega|| > c k^{-A} for 1 <= k <= K (negative k give the same values).
inline DiophantineResult diophantine_check(double omega, double c, double A, std::int64_t K) {
  if (K < 1) throw ArgumentError("diophantine_check: K must be >= 1");
  DiophantineResult r;
  r.minimum_scaled = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 1; k <= K; ++k) {
    const double dist = circle_distance(double(k) * omega);
    const double scaled = dist * std::pow(double(k), A);
    if (scaled < r.minimum_scaled) {
      r.minimum_scaled = scaled;
      r.minimizing_k = k;
    }
    if (r.pass && !(scaled > c)) {
      r.pass = false;
      r.first_violation = k;
    }
  }
  return r;
}

struct LdtReport {
  int n = 0;
  double sigma = 0.0;
  double L_n = 0.0;
  double violating_fraction = 0.0;
  double deviation_threshold = 0.0;  // n^{-sigma}
  double measure_bound = 0.0;        // exp(-n^sigma), reported next to the fraction, never asserted
  double max_deviation = 0.0;
  bool diophantine_warning = false;
};

struct LdtOptions {
  LyapunovOptions lyapunov{2048, 0.0, 1, true};
  double diophantine_c = 1e-3;
  double diophantine_A = 2.0;
  std::int64_t diophantine_K = 10000;
};

inline LdtReport ldt_empirical(const QuasiPeriodicFamily& family, int n, cplx z, double sigma, LdtOptions opt = {}) {
  if (!(sigma > 0.0)) throw ArgumentError("ldt_empirical: sigma must be positive");
  opt.lyapunov.keep_samples = true;
  const auto est = lyapunov_n(family, n, z, opt.lyapunov);
  LdtReport r;
  r.n = n;
  r.sigma = sigma;
  r.L_n = est.L_n;
  r.deviation_threshold = std::pow(double(n), -sigma);
  r.measure_bound = std::exp(-std::pow(double(n), sigma));
  std::size_t violating = 0;
  for (double v : est.samples) {
    const double dev = std::abs(v - est.L_n);
    r.max_deviation = std::max(r.max_deviation, dev);
    if (dev > r.deviation_threshold) ++violating;
  }
  r.violating_fraction = double(violating) / double(est.samples.size());
  r.diophantine_warning =
      !diophantine_check(family.omega, opt.diophantine_c, opt.diophantine_A, opt.diophantine_K).pass;
  return r;
}

}  // namespace cmvlab
