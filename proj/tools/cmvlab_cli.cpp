// cmvlab: command-line front end.
//
// Exit codes: 0 success, 1 a check failed, 2 usage or input error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cmvlab/acceptance.hpp"
#include "cmvlab/cmv.hpp"
#include "cmvlab/cocycle.hpp"
#include "cmvlab/determinants.hpp"
#include "cmvlab/dynamics.hpp"
#include "cmvlab/identities.hpp"
#include "cmvlab/io.hpp"
#include "cmvlab/spectral.hpp"
#include "cmvlab/verification.hpp"

namespace fs = std::filesystem;
using namespace cmvlab;

namespace {

struct Globals {
  std::string out = ".";
  unsigned threads = 1;
  std::uint64_t seed = 7;
  std::string config;
};

struct FamilyFlags {
  std::optional<double> lambda;
  std::optional<double> omega;
  std::optional<double> x;
  std::vector<double> h_coeffs;  // constant, then (cos_k, sin_k) pairs
  std::optional<int> h_winding;
};

std::string output_dir(const Globals& g) {
  if (const char* env = std::getenv("CMVLAB_OUT"); env && *env) return env;
  return g.out;
}

void emit(const Globals& g, const std::string& name, const std::string& text) {
  const fs::path dir = output_dir(g);
  fs::create_directories(dir);
  write_text_file((dir / name).string(), text);
}

RunConfig load_config(const Globals& g) {
  if (g.config.empty()) return {};
  return config_from_json(read_json_file(g.config));
}

VerblunskySequence load_sequence(const Globals& g, bool two_sided = false) {
  const auto cfg = load_config(g);
  if (cfg.sequence) return sequence_from_json(*cfg.sequence);
  return VerblunskySequence::random(g.seed, 0.95, two_sided);
}

std::pair<QuasiPeriodicFamily, double> load_family(const Globals& g, const FamilyFlags& f) {
  QuasiPeriodicFamily family{0.9, PhaseFunction::linear(), golden_mean()};
  double x = 0.0;
  const auto cfg = load_config(g);
  if (cfg.sequence) std::tie(family, x) = family_from_json(*cfg.sequence);
  if (f.lambda) family.lambda = *f.lambda;
  if (f.omega) family.omega = *f.omega;
  if (f.x) x = *f.x;
  if (!f.h_coeffs.empty()) {
    if (f.h_coeffs.size() % 2 == 0) throw ArgumentError("--h-coeffs takes a constant followed by (cos, sin) pairs");
    family.h.constant = f.h_coeffs[0];
    family.h.cos_terms.clear();
    family.h.sin_terms.clear();
    for (std::size_t k = 1; k + 1 < f.h_coeffs.size(); k += 2) {
      family.h.cos_terms.push_back(f.h_coeffs[k]);
      family.h.sin_terms.push_back(f.h_coeffs[k + 1]);
    }
  }
  if (f.h_winding) family.h.winding = *f.h_winding;
  if (!(family.lambda >= 0.0 && family.lambda < 1.0)) throw ArgumentError("--lambda must lie in [0, 1)");
  return {family, x};
}

void add_family_flags(CLI::App* sub, FamilyFlags& f) {
  sub->add_option("--lambda", f.lambda, "coupling |alpha_n| in [0, 1)");
  sub->add_option("--omega", f.omega, "frequency (default: golden mean)");
  sub->add_option("--x", f.x, "phase x");
  sub->add_option("--h-coeffs", f.h_coeffs, "h: constant, then cos/sin coefficient pairs")->delimiter(',');
  sub->add_option("--h-winding", f.h_winding, "integer winding of h (default 1)");
}

std::vector<double> z_thetas(std::size_t count) {
  std::vector<double> t(count);
  for (std::size_t k = 0; k < count; ++k) t[k] = two_pi * double(k) / double(count);
  return t;
}

json matrix_to_json(const Transfer2x2& t) {
  json rows = json::array();
  for (int i = 0; i < 2; ++i) rows.push_back(json::array({complex_to_json(t(i, 0)), complex_to_json(t(i, 1))}));
  return rows;
}

// ---------------------------------------------------------------------------

int run_verify(const Globals& g, std::size_t cases) {
  SuiteOptions opt;
  opt.seed = g.seed;
  opt.cases = cases;
  opt.threads = g.threads;
  json report;
  report["seed"] = g.seed;
  report["cases"] = cases;
  json checks = json::array();
  bool pass = true;
  for (const auto& s : identity_suites(opt)) {
    checks.push_back(suite_to_json(s));
    pass = pass && s.pass;
    std::cout << (s.pass ? "PASS " : "FAIL ") << s.check << "  max_residual=" << format_double(s.max_residual)
              << "  tol=" << format_double(s.tolerance) << '\n';
  }
  report["checks"] = checks;
  report["pass"] = pass;
  emit(g, "verify.json", to_json_text(report));
  return pass ? 0 : 1;
}

int run_transfer(const Globals& g, int n, double theta) {
  const auto seq = load_sequence(g);
  const cplx z = std::polar(1.0, theta);
  const auto t = transfer(seq, n, z);
  json j;
  j["sequence"] = sequence_to_json(seq);
  j["n"] = n;
  j["z"] = complex_to_json(z);
  j["entries"] = matrix_to_json(t);
  j["det"] = complex_to_json(t.determinant());
  j["norm"] = operator_norm(t);
  if (n >= 1) {
    const auto d = theorem_halfline_eval(seq, n, z);
    j["determinant_form"] = matrix_to_json(d);
    j["residual"] = transfer_residual(d, t).relative;
  }
  const auto text = to_json_text(j);
  std::cout << text;
  emit(g, "transfer.json", text);
  return 0;
}

int run_charpoly(const Globals& g, const std::string& kind, std::int64_t a, std::int64_t b) {
  const auto k = parse_matrix_kind(kind);
  const auto seq = load_sequence(g, is_extended(k));
  const auto m = is_aux(k) ? build_aux_p(seq, std::size_t(b + 1), k == MatrixKind::AuxPPrimed)
                           : build_restriction(seq, k, a, b);
  json j;
  j["kind"] = std::string(to_string(k));
  j["window"] = json::array({a, b});
  j["coefficients"] = polynomial_to_json(charpoly_coeffs(m));
  const auto text = to_json_text(j);
  std::cout << text;
  emit(g, "charpoly.json", text);
  return 0;
}

int run_dump(const Globals& g, const std::string& kind, std::int64_t a, std::int64_t b) {
  const auto k = parse_matrix_kind(kind);
  const auto seq = load_sequence(g, is_extended(k));
  const auto m = is_aux(k) ? build_aux_p(seq, std::size_t(b + 1), k == MatrixKind::AuxPPrimed)
                           : build_restriction(seq, k, a, b);
  CsvWriter csv({"row", "col", "re", "im"});
  json rows = json::array();
  const auto dense = m.entries.to_dense();
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < dense.cols(); ++c) {
      row.push_back(complex_to_json(dense(i, c)));
      if (m.entries.in_band(std::size_t(i), std::size_t(c)) && dense(i, c) != cplx{})
        csv.row({std::int64_t(i), std::int64_t(c), dense(i, c).real(), dense(i, c).imag()});
    }
    rows.push_back(row);
  }
  json j;
  j["kind"] = std::string(to_string(k));
  j["window"] = json::array({a, b});
  j["sequence"] = sequence_to_json(seq);
  j["entries"] = rows;
  emit(g, "dump.json", to_json_text(j));
  emit(g, "dump.csv", csv.str());
  std::cout << csv.str();
  return 0;
}

int run_lyapunov(const Globals& g, const FamilyFlags& f, std::vector<int> schedule, std::size_t z_grid, std::size_t x_grid) {
  auto [family, x] = load_family(g, f);
  const auto cfg = load_config(g);
  if (schedule.empty()) schedule = cfg.schedule.empty() ? std::vector<int>{50, 100, 200, 400} : cfg.schedule;
  if (x_grid == 0) x_grid = cfg.x_grid.value_or(1024);
  if (z_grid == 0) z_grid = cfg.z_grid.value_or(8);
  LyapunovOptions opt;
  opt.grid = x_grid;
  opt.threads = g.threads;
  CsvWriter csv({"theta_z", "n", "L_n"});
  json summary = json::array();
  for (double theta : z_thetas(z_grid)) {
    const auto lim = lyapunov_limit(family, schedule, std::polar(1.0, theta), opt);
    for (const auto& e : lim.table) csv.row({theta, std::int64_t(e.n), e.L_n});
    summary.push_back(json{{"theta_z", theta}, {"L", lim.L}, {"L_largest_n", lim.largest_n_value}, {"monotone", lim.monotone}});
  }
  json j;
  j["family"] = family_to_json(family);
  j["schedule"] = schedule;
  j["x_grid"] = x_grid;
  j["z"] = summary;
  emit(g, "lyapunov.csv", csv.str());
  emit(g, "lyapunov.json", to_json_text(j));
  std::cout << csv.str();
  return 0;
}

int run_ldt(const Globals& g, const FamilyFlags& f, std::vector<int> schedule, std::size_t z_grid, std::size_t x_grid,
            double sigma) {
  auto [family, x] = load_family(g, f);
  const auto cfg = load_config(g);
  if (schedule.empty()) schedule = cfg.schedule.empty() ? std::vector<int>{100, 200, 400} : cfg.schedule;
  if (x_grid == 0) x_grid = cfg.x_grid.value_or(2048);
  if (z_grid == 0) z_grid = cfg.z_grid.value_or(1);
  LdtOptions opt;
  opt.lyapunov.grid = x_grid;
  opt.lyapunov.threads = g.threads;
  CsvWriter csv({"theta_z", "n", "L_n", "violating_fraction", "threshold", "measure_bound"});
  bool warning = false;
  for (double theta : z_thetas(z_grid)) {
    for (int n : schedule) {
      const auto r = ldt_empirical(family, n, std::polar(1.0, theta), sigma, opt);
      warning = r.diophantine_warning;
      csv.row({theta, std::int64_t(n), r.L_n, r.violating_fraction, r.deviation_threshold, r.measure_bound});
    }
  }
  if (warning) std::cerr << "warning: omega fails the Diophantine check used for LDT runs\n";
  json j;
  j["family"] = family_to_json(family);
  j["sigma"] = sigma;
  j["schedule"] = schedule;
  j["x_grid"] = x_grid;
  j["diophantine_warning"] = warning;
  emit(g, "ldt.csv", csv.str());
  emit(g, "ldt.json", to_json_text(j));
  std::cout << csv.str();
  return 0;
}

int run_localize(const Globals& g, const FamilyFlags& f, std::size_t N) {
  auto [family, x] = load_family(g, f);
  LocalizationOptions opt;
  opt.threads = g.threads;
  const auto r = localize(family, x, N, opt);
  CsvWriter csv({"eigenvalue_theta", "modulus", "peak", "rate", "r2"});
  const auto& s = r.spectrum;
  std::vector<std::size_t> order(s.eigenvalues.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  auto theta_of = [](cplx mu) {
    const double t = std::arg(mu);
    return t < 0.0 ? t + two_pi : t;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return theta_of(s.eigenvalues[a]) < theta_of(s.eigenvalues[b]);
  });
  for (std::size_t k : order) {
    const auto& fit = s.decay_fits[k];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    csv.row({theta_of(s.eigenvalues[k]), std::abs(s.eigenvalues[k]), std::int64_t(fit.peak),
             fit.applicable ? fit.rate : nan, fit.applicable ? fit.r2 : nan});
  }
  json j;
  j["family"] = family_to_json(family);
  j["x"] = x;
  j["N"] = N;
  j["fitted"] = r.fitted;
  j["median_r2"] = r.median_r2;
  j["median_rate"] = r.median_rate;
  j["median_rate_over_L"] = r.median_ratio;
  emit(g, "localize.csv", csv.str());
  const auto text = to_json_text(j);
  emit(g, "localize.json", text);
  std::cout << text;
  return 0;
}

int run_green(const Globals& g, std::size_t N, double theta, double radius, std::size_t column) {
  const auto seq = load_sequence(g);
  if (N < 1) throw ArgumentError("--N must be >= 1");
  if (column >= N) throw ArgumentError("--column must lie inside the window");
  const cplx z = std::polar(radius, theta);
  const auto m = build_restriction(seq, MatrixKind::HalfLine, 0, std::int64_t(N) - 1);
  const auto col = green_column(m, z, column);
  CsvWriter csv({"n1", "abs_G", "log_abs_G", "cramer_ratio"});
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < N; ++i) {
    const double v = std::abs(col[i]);
    double ratio = std::numeric_limits<double>::quiet_NaN();
    if (i <= column) ratio = cramer_bound_check(seq, N, z, i, column).ratio;
    csv.row({std::int64_t(i), v, std::log(v), ratio});
    if (i != column && v > 0.0) {
      xs.push_back(double(i > column ? i - column : column - i));
      ys.push_back(std::log(v));
    }
  }
  double slope = std::numeric_limits<double>::quiet_NaN();
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(xs.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx > 0) slope = sxy / sxx;
  }
  json j;
  j["sequence"] = sequence_to_json(seq);
  j["N"] = N;
  j["z"] = complex_to_json(z);
  j["column"] = column;
  j["decay_exponent"] = -slope;
  emit(g, "green.csv", csv.str());
  const auto text = to_json_text(j);
  emit(g, "green.json", text);
  std::cout << text;
  return 0;
}

std::string report_text(const std::vector<CriterionResult>& results, std::uint64_t seed, const json& determinism) {
  json report = criteria_report(results, seed);
  json entry;
  entry["id"] = "11";
  entry["title"] = "suite report identical for --threads 1 and --threads 8";
  entry["primary"] = true;
  entry["pass"] = determinism.at("identical").get<bool>();
  entry["metrics"] = determinism;
  report["criteria"].push_back(entry);
  report["primary_pass"] = report["primary_pass"].get<bool>() && entry["pass"].get<bool>();
  return to_json_text(report);
}

int run_suite(const Globals& g) {
  AcceptanceOptions opt{g.seed, g.threads};
  const auto results = run_criteria(opt);
  // Criterion 11 compares the criteria report at one and at eight threads.
  std::string one, eight;
  const std::string own = to_json_text(criteria_report(results, g.seed));
  if (g.threads == 1) one = own;
  if (g.threads == 8) eight = own;
  if (one.empty()) one = to_json_text(criteria_report(run_criteria({g.seed, 1}), g.seed));
  if (eight.empty()) eight = to_json_text(criteria_report(run_criteria({g.seed, 8}), g.seed));
  json determinism;
  determinism["threads_compared"] = json::array({1, 8});
  determinism["identical"] = one == eight;
  const auto text = report_text(results, g.seed, determinism);
  emit(g, "suite.json", text);

  bool primary = determinism["identical"].get<bool>();
  for (const auto& r : results) {
    const bool ok = r.pass && within_cap(r);
    if (r.primary) primary = primary && ok;
    std::cout << (ok ? "PASS " : "FAIL ") << (r.primary ? "" : "(supplementary) ") << r.id << "  " << r.title << '\n';
    std::cerr << "  " << r.id << ": " << format_double(r.seconds) << " s\n";
  }
  std::cout << (determinism["identical"].get<bool>() ? "PASS " : "FAIL ") << "11  suite report identical for --threads 1 and --threads 8\n";
  return primary ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cmvlab: CMV matrices, Szego cocycles and their determinant formulas"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out, "output directory (CMVLAB_OUT overrides)");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--seed", g.seed, "seed for random sequences and suites");
  app.add_option("--config,--seq", g.config, "JSON config or sequence record");

  std::size_t cases = 200;
  auto* verify = app.add_subcommand("verify", "randomized identity suites");
  verify->add_option("--cases", cases, "cases per suite")->check(CLI::PositiveNumber);

  int n = 1;
  double theta = 0.0;
  auto* tr = app.add_subcommand("transfer", "S^z_n by product and by determinants");
  tr->add_option("--n", n, "steps")->check(CLI::NonNegativeNumber);
  tr->add_option("--z-theta", theta, "z = exp(i theta)");

  std::string kind = "C";
  std::int64_t wa = 0, wb = 0;
  auto* cp = app.add_subcommand("charpoly", "characteristic polynomial coefficients of a restriction");
  auto* dump = app.add_subcommand("dump", "entries of a restriction");
  for (auto* sub : {cp, dump}) {
    sub->add_option("--kind", kind, "C, E, Cp, Ep, P or Pp");
    sub->add_option("--a", wa, "window start");
    sub->add_option("--b", wb, "window end (P kinds: n - 1)");
  }

  FamilyFlags fam;
  std::vector<int> schedule;
  std::size_t z_grid = 0, x_grid = 0;
  double sigma = 0.3;
  auto* ly = app.add_subcommand("lyapunov", "L_n(z) over a z grid and n schedule");
  auto* ldt = app.add_subcommand("ldt", "empirical large-deviation fractions");
  for (auto* sub : {ly, ldt}) {
    add_family_flags(sub, fam);
    sub->add_option("--n-schedule", schedule, "increasing n values")->delimiter(',');
    sub->add_option("--z-grid", z_grid, "number of equispaced circle points");
    sub->add_option("--x-grid", x_grid, "number of phases");
  }
  ldt->add_option("--sigma", sigma, "deviation exponent")->check(CLI::PositiveNumber);

  std::size_t N = 200;
  auto* loc = app.add_subcommand("localize", "eigenvector decay fits of C_[0,N-1](x)");
  add_family_flags(loc, fam);
  loc->add_option("--N", N, "window size (<= 512)");

  std::size_t gN = 32, column = 0;
  double radius = 1.0;
  auto* gr = app.add_subcommand("green", "one resolvent column and Cramer ratios");
  gr->add_option("--N", gN, "window size");
  gr->add_option("--z-theta", theta, "arg z");
  gr->add_option("--z-radius", radius, "|z|");
  gr->add_option("--column", column, "n2");

  auto* suite = app.add_subcommand("suite", "every acceptance criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) return run_verify(g, cases);
    if (*tr) return run_transfer(g, n, theta);
    if (*cp) return run_charpoly(g, kind, wa, wb);
    if (*dump) return run_dump(g, kind, wa, wb);
    if (*ly) return run_lyapunov(g, fam, schedule, z_grid, x_grid);
    if (*ldt) return run_ldt(g, fam, schedule, z_grid, x_grid, sigma);
    if (*loc) return run_localize(g, fam, N);
    if (*gr) return run_green(g, gN, theta, radius, column);
    if (*suite) return run_suite(g);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IndexError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
