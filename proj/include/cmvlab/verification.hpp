#pragma once

// Randomized identity suites. Each case draws from its own generator seeded
// by (suite seed, suite tag, case index), so results are independent of the
// thread count and of which other suites run.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cmvlab/cocycle.hpp"
#include "cmvlab/determinants.hpp"
#include "cmvlab/identities.hpp"
#include "cmvlab/parallel.hpp"

namespace cmvlab {

struct SuiteResult {
  std::string check;
  std::size_t cases = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  std::size_t cases = 200;
  unsigned threads = 1;
  double radius = 0.95;  // |alpha| bound for random sequences
};

class CaseRng {
 public:
  CaseRng(std::uint64_t seed, std::uint64_t tag, std::size_t index)
      : engine_(detail::splitmix64(seed ^ detail::splitmix64(tag * 0x9e3779b97f4a7c15ull + index))) {}

  double uniform() { return detail::unit_from_bits(engine_()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + int(engine_() % std::uint64_t(hi - lo + 1)); }
  std::uint64_t bits() { return engine_(); }
  cplx on_circle() { return std::polar(1.0, two_pi * uniform()); }
  cplx in_disc(double r) { return std::polar(r * std::sqrt(uniform()), two_pi * uniform()); }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

/// Fills one residual per case and reduces with max in case order.
template <class F>
SuiteResult run_suite(std::string name, double tolerance, const SuiteOptions& opt, F&& per_case) {
  std::vector<double> worst(opt.cases, 0.0);
  std::vector<char> ok(opt.cases, 1);
  parallel_for(opt.cases, opt.threads, [&](std::size_t c) {
    bool pass = true;
    worst[c] = per_case(c, pass);
    ok[c] = pass;
  });
  SuiteResult r;
  r.check = std::move(name);
  r.cases = opt.cases;
  r.tolerance = tolerance;
  for (std::size_t c = 0; c < opt.cases; ++c) {
    r.max_residual = std::max(r.max_residual, worst[c]);
    r.pass = r.pass && ok[c];
  }
  return r;
}

inline double accumulate(double current, const Residual& res, double tol, bool& pass) {
  pass = pass && res.within(tol);
  return std::max(current, res.relative);
}

}  // namespace detail

inline constexpr int grid_points = 16;
inline constexpr int max_theorem_n = 50;

inline cplx circle_grid_point(int k, int count = grid_points) { return std::polar(1.0, two_pi * double(k) / double(count)); }

/// Determinant form of S^z_n vs the product, n = 1..50 on the 16-point grid.
inline SuiteResult halfline_theorem_suite(const SuiteOptions& opt, double tol = 1e-9) {
  return detail::run_suite("theorem_halfline", tol, opt, [&](std::size_t c, bool& pass) {
    CaseRng rng(opt.seed, 1, c);
    const auto seq = VerblunskySequence::random(rng.bits(), opt.radius);
    double worst = 0.0;
    for (int n = 1; n <= max_theorem_n; ++n)
      for (int k = 0; k < grid_points; ++k) {
        const cplx z = circle_grid_point(k);
        const auto res = transfer_residual(theorem_halfline_eval(seq, n, z), transfer(seq, n, z));
        pass = pass && res.relative <= tol;
        worst = std::max(worst, res.relative);
      }
    return worst;
  });
}

/// Extended form with alpha_{-1} = 0 and alpha_{-1} random, both against the product.
inline SuiteResult extended_theorem_suite(const SuiteOptions& opt, double tol = 1e-9) {
  return detail::run_suite("theorem_extended", tol, opt, [&](std::size_t c, bool& pass) {
    CaseRng rng(opt.seed, 2, c);
    const auto base = VerblunskySequence::random(rng.bits(), opt.radius, true);
    const auto zero = base.with_override(-1, 0.0);
    double worst = 0.0;
    for (int n = 1; n <= max_theorem_n; ++n)
      for (int k = 0; k < grid_points; ++k) {
        const cplx z = circle_grid_point(k);
        const auto t = transfer(base, n, z);
        for (const auto* s : {&base, &zero}) {
          const auto res = transfer_residual(theorem_extended_eval(*s, n, z), t);
          pass = pass && res.relative <= tol;
          worst = std::max(worst, res.relative);
        }
      }
    return worst;
  });
}

/// Entrywise change of the extended form when alpha_{-1} moves from 0 to a random value.
inline SuiteResult alpha_minus_one_invariance_suite(const SuiteOptions& opt, double tol = 1e-10) {
  return detail::run_suite("extended_alpha_minus_one_invariance", tol, opt, [&](std::size_t c, bool& pass) {
    CaseRng rng(opt.seed, 3, c);
    const auto base = VerblunskySequence::random(rng.bits(), opt.radius, true);
    const auto zero = base.with_override(-1, 0.0);
    const auto other = base.with_override(-1, rng.in_disc(opt.radius));
    double worst = 0.0;
    for (int n = 1; n <= max_theorem_n; ++n)
      for (int k = 0; k < grid_points; ++k) {
        const cplx z = circle_grid_point(k);
        const auto a = theorem_extended_eval(zero, n, z);
        const auto b = theorem_extended_eval(other, n, z);
        const auto d = theorem_extended_eval(base, n, z);
        const double diff = std::max((a - b).cwiseAbs().maxCoeff(), (a - d).cwiseAbs().maxCoeff());
        pass = pass && diff <= tol;
        worst = std::max(worst, diff);
      }
    return worst;
  });
}

/// Random (two-sided sequence, n in [n_lo, 50], z on the circle); alpha_{-1} = 0 on every fourth case.
struct LemmaCase {
  VerblunskySequence seq;
  int n;
  cplx z;
};

inline LemmaCase lemma_case(const SuiteOptions& opt, std::uint64_t tag, std::size_t c, int n_lo) {
  CaseRng rng(opt.seed, tag, c);
  auto seq = VerblunskySequence::random(rng.bits(), opt.radius, true);
  const int n = rng.integer(n_lo, max_theorem_n);
  const cplx z = rng.on_circle();
  if (c % 4 == 3) seq = seq.with_override(-1, 0.0);
  return {std::move(seq), n, z};
}

inline SuiteResult equivalency_suite(const SuiteOptions& opt, double tol = 1e-10) {
  return detail::run_suite("equivalency_cleared", tol, opt, [&](std::size_t c, bool& pass) {
    const auto k = lemma_case(opt, 4, c, 1);
    return detail::accumulate(0.0, equivalency_check(k.seq, k.n, k.z), tol, pass);
  });
}

inline SuiteResult lskp_suite(const SuiteOptions& opt, double tol = 1e-10) {
  return detail::run_suite("lemma_second_kind", tol, opt, [&](std::size_t c, bool& pass) {
    const auto k = lemma_case(opt, 5, c, 1);
    return detail::accumulate(0.0, lemma_lskp_check(k.seq, k.n, k.z), tol, pass);
  });
}

inline SuiteResult lfsp_suite(const SuiteOptions& opt, double tol = 1e-10) {
  return detail::run_suite("lemma_primed_pair", tol, opt, [&](std::size_t c, bool& pass) {
    const auto k = lemma_case(opt, 6, c, 2);
    const auto r = lemma_lfsp_check(k.seq, k.n, k.z);
    return detail::accumulate(detail::accumulate(0.0, r.extended, tol, pass), r.aux, tol, pass);
  });
}

inline SuiteResult efsd_suite(const SuiteOptions& opt, double tol = 1e-10) {
  return detail::run_suite("phi_plus_psi", tol, opt, [&](std::size_t c, bool& pass) {
    const auto k = lemma_case(opt, 7, c, 1);
    return detail::accumulate(0.0, efsd_check(k.seq, k.n, k.z), tol, pass);
  });
}

/// det_lu against both recurrence routes, Phi_n and the interpolated
/// characteristic polynomial; residuals are |a - b| / (1 + |a|).
inline SuiteResult engine_suite(const SuiteOptions& opt, double tol = 1e-10, int max_n = 32) {
  return detail::run_suite("determinant_engines", tol, opt, [&](std::size_t c, bool& pass) {
    CaseRng rng(opt.seed, 8, c);
    const auto seq = VerblunskySequence::random(rng.bits(), opt.radius, true);
    const int n = rng.integer(1, max_n);
    const cplx z_disc = rng.in_disc(2.0);
    const cplx z_circ = rng.on_circle();
    double worst = 0.0;
    auto note = [&](cplx reference, cplx other) {
      const double r = std::abs(reference - other) / (1.0 + std::abs(reference));
      pass = pass && r <= tol;
      worst = std::max(worst, r);
    };
    for (MatrixKind kind : {MatrixKind::HalfLine, MatrixKind::Extended}) {
      for (std::int64_t a : {0, 1}) {
        const Window w{a, n - 1};
        const cplx lu = det_lu(build_restriction(seq, kind, w.first, w.last), z_disc);
        note(lu, det_recurrence(seq, kind, w, z_disc, RecurrenceRoute::Expansion));
        if (a == 0) note(lu, det_recurrence(seq, kind, w, z_disc, RecurrenceRoute::SingleStep));
      }
    }
    const auto c0 = build_restriction(seq, MatrixKind::HalfLine, 0, n - 1);
    const cplx lu = det_lu(c0, z_circ);
    note(lu, phi_monic(seq, n)(z_circ));
    note(lu, charpoly_coeffs(c0)(z_circ));
    return worst;
  });
}

/// Product vs determinant form of the Schrodinger transfer matrix, n <= 20.
inline SuiteResult schrodinger_suite(const SuiteOptions& opt, double tol = 1e-9) {
  return detail::run_suite("schrodinger_formula", tol, opt, [&](std::size_t c, bool& pass) {
    CaseRng rng(opt.seed, 9, c);
    const int n = rng.integer(1, 20);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(-2.0, 2.0);
    const double energy = rng.uniform(-3.0, 3.0);
    const auto r = schrodinger_formula_check(v, energy, n);
    pass = r.residual.relative <= tol;
    return r.residual.relative;
  });
}

struct CocycleSuiteResult {
  SuiteResult det;         // |det S^z_n - z^n| / max(1, |ad| + |bc|), n <= 100
  SuiteResult norm;        // | ||M|| - ||S|| | / ||S||
  SuiteResult q_realness;  // max |Im(Q^* M^z_10 Q)|
};

inline CocycleSuiteResult cocycle_suite(const SuiteOptions& opt) {
  CocycleSuiteResult out;
  out.det = detail::run_suite("cocycle_det", 1e-10, opt, [&](std::size_t c, bool& pass) {
    CaseRng rng(opt.seed, 10, c);
    const auto seq = VerblunskySequence::random(rng.bits(), opt.radius);
    const int n = rng.integer(0, 100);
    const cplx z = rng.on_circle();
    // ad - bc cancels at the scale |ad| + |bc| ~ ||S||^2, so that is the reference size.
    const auto t = transfer(seq, n, z);
    const double terms = std::abs(t(0, 0) * t(1, 1)) + std::abs(t(0, 1) * t(1, 0));
    const double r = std::abs(t.determinant() - integer_power(z, n)) / std::max(1.0, terms);
    pass = r <= 1e-10;
    return r;
  });
  out.norm = detail::run_suite("cocycle_norm_m_vs_s", 1e-12, opt, [&](std::size_t c, bool& pass) {
    CaseRng rng(opt.seed, 11, c);
    const auto seq = VerblunskySequence::random(rng.bits(), opt.radius);
    const int n = rng.integer(1, 100);
    const cplx z = rng.on_circle();
    const double s = operator_norm(transfer(seq, n, z));
    const double m = operator_norm(m_transfer(seq, n, z));
    const double r = std::abs(s - m) / s;
    pass = r <= 1e-12;
    return r;
  });
  out.q_realness = detail::run_suite("cocycle_q_real", 1e-9, opt, [&](std::size_t c, bool& pass) {
    CaseRng rng(opt.seed, 12, c);
    const auto seq = VerblunskySequence::random(rng.bits(), opt.radius);
    const cplx z = rng.on_circle();
    const double r = max_imaginary_part(q_conjugate(m_transfer(seq, 10, z)));
    pass = r <= 1e-9;
    return r;
  });
  return out;
}

struct SandwichResult {
  SuiteResult lower;       // residual: max(0, lower / ||S|| - 1)
  SuiteResult upper;       // residual: max(0, ||S|| / upper - 1)
  double min_lower_slack;  // min ||S|| / lower
  double min_upper_slack;  // min upper / ||S||
};

/// prod rho^{-1} |d0| <= ||S^z_n|| <= 8 prod rho^{-1} max(|d0|, |d1|), n <= 40.
inline SandwichResult sandwich_suite(const SuiteOptions& opt, double rounding = 1e-12) {
  std::vector<double> lo(opt.cases), hi(opt.cases);
  auto make = [&](std::size_t c) {
    CaseRng rng(opt.seed, 13, c);
    const auto seq = VerblunskySequence::random(rng.bits(), opt.radius);
    const int n = rng.integer(1, 40);
    const cplx z = rng.on_circle();
    const double norm = operator_norm(transfer(seq, n, z));
    const double scale = 1.0 / phi_norm(seq, n);
    const double d0 = std::abs(restriction_det(seq, MatrixKind::HalfLine, 0, n - 1, z));
    const double d1 = std::abs(restriction_det(seq, MatrixKind::HalfLine, 1, n - 1, z));
    lo[c] = norm / (scale * d0);
    hi[c] = 8.0 * scale * std::max(d0, d1) / norm;
  };
  parallel_for(opt.cases, opt.threads, make);
  SandwichResult r;
  r.lower = {"norm_lower_bound", opt.cases, 0.0, rounding, true};
  r.upper = {"norm_upper_bound", opt.cases, 0.0, rounding, true};
  r.min_lower_slack = INFINITY;
  r.min_upper_slack = INFINITY;
  for (std::size_t c = 0; c < opt.cases; ++c) {
    r.min_lower_slack = std::min(r.min_lower_slack, lo[c]);
    r.min_upper_slack = std::min(r.min_upper_slack, hi[c]);
    r.lower.max_residual = std::max(r.lower.max_residual, std::max(0.0, 1.0 / lo[c] - 1.0));
    r.upper.max_residual = std::max(r.upper.max_residual, std::max(0.0, 1.0 / hi[c] - 1.0));
  }
  r.lower.pass = r.lower.max_residual <= rounding;
  r.upper.pass = r.upper.max_residual <= rounding;
  return r;
}

/// Everything `verify` reports, in a fixed order.
inline std::vector<SuiteResult> identity_suites(const SuiteOptions& opt) {
  std::vector<SuiteResult> out;
  out.push_back(halfline_theorem_suite(opt));
  out.push_back(extended_theorem_suite(opt));
  out.push_back(alpha_minus_one_invariance_suite(opt));
  out.push_back(equivalency_suite(opt));
  out.push_back(lskp_suite(opt));
  out.push_back(lfsp_suite(opt));
  out.push_back(efsd_suite(opt));
  SuiteOptions engines = opt;
  engines.cases = std::max<std::size_t>(100, opt.cases / 2);
  out.push_back(engine_suite(engines));
  out.push_back(schrodinger_suite(opt));
  const auto cocycle = cocycle_suite(opt);
  out.push_back(cocycle.det);
  out.push_back(cocycle.norm);
  out.push_back(cocycle.q_realness);
  SuiteOptions sandwich = opt;
  sandwich.cases = std::max<std::size_t>(500, opt.cases);
  const auto s = sandwich_suite(sandwich);
  out.push_back(s.lower);
  out.push_back(s.upper);
  return out;
}

}  // namespace cmvlab
