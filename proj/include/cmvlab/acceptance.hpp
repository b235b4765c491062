#pragma once

// Acceptance criteria as runnable checks. The JSON report carries no timings,
// so runs that differ only in --threads must produce identical text; elapsed
// times travel separately for the runtime caps.

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cmvlab/dynamics.hpp"
#include "cmvlab/io.hpp"
#include "cmvlab/spectral.hpp"
#include "cmvlab/verification.hpp"

namespace cmvlab {

struct CriterionResult {
  std::string id;
  std::string title;
  bool primary = true;
  bool pass = true;
  json metrics = json::object();
  double seconds = 0.0;        // not part of the report
  double runtime_cap = 0.0;    // 0 = none
};

struct AcceptanceOptions {
  std::uint64_t seed = 7;
  unsigned threads = 1;
};

inline json suite_to_json(const SuiteResult& s) {
  json j;
  j["check"] = s.check;
  j["cases"] = s.cases;
  j["max_residual"] = s.max_residual;
  j["tolerance"] = s.tolerance;
  j["pass"] = s.pass;
  return j;
}

namespace detail {

inline CriterionResult timed(std::string id, std::string title, double cap, const std::function<void(CriterionResult&)>& body) {
  CriterionResult r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.runtime_cap = cap;
  const auto t0 = std::chrono::steady_clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline void add_suite(CriterionResult& r, const SuiteResult& s) {
  r.metrics["suites"].push_back(suite_to_json(s));
  r.pass = r.pass && s.pass;
}

inline SuiteOptions suite_options(const AcceptanceOptions& opt, std::size_t cases) {
  SuiteOptions s;
  s.seed = opt.seed;
  s.cases = cases;
  s.threads = opt.threads;
  return s;
}

}  // namespace detail

inline CriterionResult criterion_halfline(const AcceptanceOptions& opt) {
  return detail::timed("1", "half-line determinant formula vs cocycle product", 30.0, [&](CriterionResult& r) {
    detail::add_suite(r, halfline_theorem_suite(detail::suite_options(opt, 200)));
  });
}

inline CriterionResult criterion_extended(const AcceptanceOptions& opt) {
  return detail::timed("2", "extended determinant formula, alpha_{-1} in {0, random}", 0.0, [&](CriterionResult& r) {
    const auto s = detail::suite_options(opt, 200);
    detail::add_suite(r, extended_theorem_suite(s));
    detail::add_suite(r, alpha_minus_one_invariance_suite(s));
  });
}

inline CriterionResult criterion_lemmas(const AcceptanceOptions& opt) {
  return detail::timed("3", "lemma residuals", 0.0, [&](CriterionResult& r) {
    const auto s = detail::suite_options(opt, 200);
    detail::add_suite(r, equivalency_suite(s));
    detail::add_suite(r, lskp_suite(s));
    detail::add_suite(r, lfsp_suite(s));
    detail::add_suite(r, efsd_suite(s));
  });
}

inline CriterionResult criterion_engines(const AcceptanceOptions& opt) {
  return detail::timed("4", "determinant engines agree (n <= 32)", 0.0, [&](CriterionResult& r) {
    detail::add_suite(r, engine_suite(detail::suite_options(opt, 100)));
  });
}

inline CriterionResult criterion_schrodinger(const AcceptanceOptions& opt) {
  return detail::timed("5", "Schrodinger product vs determinant form (n <= 20)", 0.0, [&](CriterionResult& r) {
    detail::add_suite(r, schrodinger_suite(detail::suite_options(opt, 200)));
  });
}

inline CriterionResult criterion_cocycle(const AcceptanceOptions& opt) {
  return detail::timed("6", "cocycle determinant, norm and Q-realness", 0.0, [&](CriterionResult& r) {
    const auto c = cocycle_suite(detail::suite_options(opt, 200));
    detail::add_suite(r, c.det);
    detail::add_suite(r, c.norm);
    detail::add_suite(r, c.q_realness);
  });
}

inline CriterionResult criterion_sandwich(const AcceptanceOptions& opt) {
  return detail::timed("7", "norm-determinant sandwich (n <= 40)", 0.0, [&](CriterionResult& r) {
    const auto s = sandwich_suite(detail::suite_options(opt, 500));
    detail::add_suite(r, s.lower);
    detail::add_suite(r, s.upper);
    r.metrics["min_norm_over_lower"] = s.min_lower_slack;
    r.metrics["min_upper_over_norm"] = s.min_upper_slack;
  });
}

/// Random matrix with a strictly upper part scaled up, so most draws are far from normal.
inline Eigen::MatrixXcd random_nonnormal(CaseRng& rng, int n) {
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.in_disc(1.0) * (j > i ? 3.0 : 1.0);
  return a;
}

inline CriterionResult criterion_ds06(const AcceptanceOptions& opt) {
  return detail::timed("8", "resolvent bound dist * ||(A - z)^-1|| <= cot(pi / 4n)", 0.0, [&](CriterionResult& r) {
    const std::size_t cases = 200;
    std::vector<double> ratio(cases, 0.0);
    std::vector<char> in_domain(cases, 0);
    parallel_for(cases, opt.threads, [&](std::size_t c) {
      CaseRng rng(opt.seed, 20, c);
      const int n = rng.integer(1, 8);
      const auto a = random_nonnormal(rng, n);
      const cplx z = std::polar(spectral_norm(a) * (1.0 + rng.uniform()), two_pi * rng.uniform());
      const auto rep = ds06_check(a, z);
      in_domain[c] = rep.in_domain;
      ratio[c] = rep.in_domain ? rep.product / rep.bound : 0.0;
    });
    double worst = 0.0;
    std::size_t domain = 0;
    for (std::size_t c = 0; c < cases; ++c) {
      worst = std::max(worst, ratio[c]);
      domain += std::size_t(in_domain[c]);
    }
    double scalar_gap = 0.0;
    for (std::size_t c = 0; c < 20; ++c) {
      CaseRng rng(opt.seed, 21, c);
      Eigen::MatrixXcd a(1, 1);
      a(0, 0) = rng.in_disc(1.0);
      const cplx z = std::polar(std::abs(a(0, 0)) * (1.0 + rng.uniform()), two_pi * rng.uniform());
      scalar_gap = std::max(scalar_gap, std::abs(ds06_check(a, z).product - 1.0));
    }
    r.metrics["cases"] = cases;
    r.metrics["in_domain"] = domain;
    r.metrics["max_product_over_bound"] = worst;
    r.metrics["scalar_max_gap"] = scalar_gap;
    r.pass = domain == cases && worst <= 1.0 + 1e-8 && scalar_gap <= 1e-12;
  });
}

// ---------------------------------------------------------------------------
// Dynamics and localization

inline QuasiPeriodicFamily acceptance_family(const PhaseFunction& h, double lambda = 0.9) {
  return QuasiPeriodicFamily{lambda, h, golden_mean()};
}

inline void dynamics_checks(CriterionResult& r, const QuasiPeriodicFamily& family, unsigned threads, bool include_zero) {
  constexpr int n = 200;
  constexpr int z_points = 8;
  LyapunovOptions coarse;
  coarse.grid = 1024;
  coarse.threads = threads;
  LyapunovOptions fine = coarse;
  fine.grid = 2048;
  if (include_zero) {
    bool zero = true;
    auto flat = family;
    flat.lambda = 0.0;
    for (int k = 0; k < z_points; ++k) zero = zero && lyapunov_n(flat, n, circle_grid_point(k, z_points), coarse).L_n == 0.0;
    r.metrics["lambda_zero_exact"] = zero;
    r.pass = r.pass && zero;
  }
  double doubling = 0.0;
  double minimum = INFINITY;
  json table = json::array();
  for (int k = 0; k < z_points; ++k) {
    const cplx z = circle_grid_point(k, z_points);
    const double a = lyapunov_n(family, n, z, coarse).L_n;
    const double b = lyapunov_n(family, n, z, fine).L_n;
    doubling = std::max(doubling, std::abs(a - b));
    minimum = std::min(minimum, b);
    table.push_back(json{{"theta", two_pi * double(k) / z_points}, {"L_n", b}});
  }
  r.metrics["h"] = phase_to_json(family.h);
  r.metrics["grid_doubling_max_change"] = doubling;
  r.metrics["min_L_n"] = minimum;
  r.metrics["L_n"] = table;
  r.pass = r.pass && doubling <= 1e-3 && minimum > 0.01;
}

inline CriterionResult criterion_dynamics(const AcceptanceOptions& opt) {
  return detail::timed("9", "Lyapunov exponent: zero at lambda = 0, grid-stable, positive (h(x) = x)", 120.0,
                       [&](CriterionResult& r) { dynamics_checks(r, acceptance_family(PhaseFunction::linear()), opt.threads, true); });
}

inline CriterionResult criterion_dynamics_cosine(const AcceptanceOptions& opt) {
  auto r = detail::timed("9b", "Lyapunov exponent: grid-stable, positive (h(x) = 0.5 cos 2 pi x)", 120.0,
                         [&](CriterionResult& r) { dynamics_checks(r, acceptance_family(PhaseFunction::cosine(0.5)), opt.threads, false); });
  r.primary = false;
  return r;
}

inline void localization_checks(CriterionResult& r, const QuasiPeriodicFamily& family, unsigned threads) {
  LocalizationOptions lo;
  lo.threads = threads;
  const auto small = localize(family, 0.0, 100, lo);
  const auto large = localize(family, 0.0, 200, lo);
  const double stability = std::abs(large.median_rate / small.median_rate - 1.0);
  r.metrics["h"] = phase_to_json(family.h);
  r.metrics["fitted"] = large.fitted;
  r.metrics["median_r2"] = large.median_r2;
  r.metrics["median_rate"] = large.median_rate;
  r.metrics["median_rate_over_L"] = large.median_ratio;
  r.metrics["median_rate_N100"] = small.median_rate;
  r.metrics["rate_change_100_to_200"] = stability;
  r.pass = large.median_r2 >= 0.9 && std::abs(large.median_ratio - 1.0) <= 0.3 && stability <= 0.15;
}

inline CriterionResult criterion_localization(const AcceptanceOptions& opt) {
  return detail::timed("10", "eigenvector decay vs L(z), N = 200 (h(x) = x)", 300.0,
                       [&](CriterionResult& r) { localization_checks(r, acceptance_family(PhaseFunction::linear()), opt.threads); });
}

inline CriterionResult criterion_localization_cosine(const AcceptanceOptions& opt) {
  auto r = detail::timed("10b", "eigenvector decay vs L(z), N = 200 (h(x) = 0.5 cos 2 pi x)", 300.0,
                         [&](CriterionResult& r) { localization_checks(r, acceptance_family(PhaseFunction::cosine(0.5)), opt.threads); });
  r.primary = false;
  return r;
}

/// Criteria 1-10 plus the supplementary cosine-phase lines, in report order.
inline std::vector<CriterionResult> run_criteria(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  out.push_back(criterion_halfline(opt));
  out.push_back(criterion_extended(opt));
  out.push_back(criterion_lemmas(opt));
  out.push_back(criterion_engines(opt));
  out.push_back(criterion_schrodinger(opt));
  out.push_back(criterion_cocycle(opt));
  out.push_back(criterion_sandwich(opt));
  out.push_back(criterion_ds06(opt));
  out.push_back(criterion_dynamics(opt));
  out.push_back(criterion_dynamics_cosine(opt));
  out.push_back(criterion_localization(opt));
  out.push_back(criterion_localization_cosine(opt));
  return out;
}

inline json criteria_report(const std::vector<CriterionResult>& results, std::uint64_t seed) {
  json j;
  j["seed"] = seed;
  json list = json::array();
  bool primary = true;
  for (const auto& r : results) {
    json e;
    e["id"] = r.id;
    e["title"] = r.title;
    e["primary"] = r.primary;
    e["pass"] = r.pass;
    e["metrics"] = r.metrics;
    list.push_back(e);
    if (r.primary) primary = primary && r.pass;
  }
  j["criteria"] = list;
  j["primary_pass"] = primary;
  return j;
}

inline bool within_cap(const CriterionResult& r) { return r.runtime_cap <= 0.0 || r.seconds <= r.runtime_cap; }

}  // namespace cmvlab
