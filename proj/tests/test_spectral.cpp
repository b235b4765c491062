#include "catch_amalgamated.hpp"

#include <algorithm>
#include <complex>
#include <random>

#include "cmvlab/spectral.hpp"
#include "oracles.hpp"

using namespace cmvlab;

namespace {

bool contains(const std::vector<cplx>& v, cplx x, double tol) {
  return std::any_of(v.begin(), v.end(), [&](cplx y) { return std::abs(x - y) < tol; });
}

}  // namespace

TEST_CASE("eig examples", "[spectral]") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = cplx(0, 1);
  const auto r = eig(d);
  CHECK(contains(r.eigenvalues, 1.0, 1e-14));
  CHECK(contains(r.eigenvalues, cplx(0, 1), 1e-14));

  const auto s = VerblunskySequence::explicit_values({0.5, 0.5, 0.0});
  const auto c = build_restriction(s, MatrixKind::HalfLine, 0, 1);
  const auto [mu, nu] = oracle::eig2(c.entries.to_dense());
  const auto rc = eig(c);
  CHECK(contains(rc.eigenvalues, mu, 1e-13));
  CHECK(contains(rc.eigenvalues, nu, 1e-13));

  CHECK(eig(Eigen::MatrixXcd(0, 0)).size == 0);
  CHECK_THROWS_AS(eig(Eigen::MatrixXcd::Identity(513, 513)), ArgumentError);
  CHECK_THROWS_AS(eig(build_aux_p(s, 2, false)), ArgumentError);
}

TEST_CASE("property: truncation spectra lie in the closed disc", "[spectral][property]") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = eig(build_restriction(VerblunskySequence::random(seed, 0.95), MatrixKind::HalfLine, 0, 31));
    for (std::size_t k = 0; k < r.size; ++k) {
      REQUIRE(std::abs(r.eigenvalues[k]) <= 1.0 + 1e-9);
      REQUIRE(r.residuals[k] <= 1e-8 * 32);
      REQUIRE(std::abs(r.eigenvectors.col(Eigen::Index(k)).norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("green examples", "[spectral]") {
  const auto s = VerblunskySequence::random(81, 0.9);
  const cplx z(0.2, 1.4);
  const auto one = build_restriction(s, MatrixKind::HalfLine, 0, 0);
  CHECK(std::abs(green(one, z, 0, 0) - 1.0 / (z - std::conj(s.coefficient_at(0)))) < 1e-15);

  const auto eight = build_restriction(s, MatrixKind::HalfLine, 0, 7);
  const Eigen::MatrixXcd inv = eight.characteristic(z).to_dense().inverse();
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) REQUIRE(std::abs(green(eight, z, i, j) - inv(Eigen::Index(i), Eigen::Index(j))) < 1e-10);

  const auto shift = build_restriction(VerblunskySequence::constant(0.0), MatrixKind::HalfLine, 0, 2);
  const auto neumann = oracle::neumann_resolvent(shift.entries.to_dense(), 2.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::abs(green(shift, 2.0, i, j) - neumann(Eigen::Index(i), Eigen::Index(j))) < 1e-15);

  CHECK_THROWS_AS(green(eight, z, 8, 0), IndexError);
  const auto spectrum = eig(eight);
  CHECK_THROWS_AS(green(eight, spectrum.eigenvalues[0], 0, 0), SingularError);
}

TEST_CASE("property: green consistency", "[spectral][property]") {
  const auto s = VerblunskySequence::random(82, 0.95);
  const auto m = build_restriction(s, MatrixKind::HalfLine, 0, 63);
  const Eigen::MatrixXcd a = m.characteristic(std::polar(1.0, 0.7)).to_dense();
  for (std::size_t n2 : {0u, 17u, 63u}) {
    const auto col = green_column(m, std::polar(1.0, 0.7), n2);
    const Eigen::VectorXcd g = Eigen::Map<const Eigen::VectorXcd>(col.data(), Eigen::Index(col.size()));
    const Eigen::VectorXcd e = a * g;
    for (Eigen::Index n1 = 0; n1 < 64; ++n1)
      REQUIRE(std::abs(e(n1) - (std::size_t(n1) == n2 ? 1.0 : 0.0)) < 1e-9);
  }
}

TEST_CASE("cramer_bound_check examples", "[spectral]") {
  const auto s = VerblunskySequence::random(83, 0.9);
  const cplx z(0.5, 1.5);
  const auto one = cramer_bound_check(s, 1, z, 0, 0);
  CHECK(one.lhs == Catch::Approx(1.0 / std::abs(z - std::conj(s.coefficient_at(0)))).epsilon(1e-14));
  CHECK(one.rhs == Catch::Approx(one.lhs).epsilon(1e-14));

  double worst = 0.0;
  std::mt19937_64 gen(5);
  for (int k = 0; k < 20; ++k) {
    std::size_t n1 = gen() % 16, n2 = gen() % 16;
    if (n1 > n2) std::swap(n1, n2);
    const auto r = cramer_bound_check(s, 16, std::polar(1.0, 0.3 * k), n1, n2);
    if (r.near_singular) continue;
    REQUIRE(std::isfinite(r.ratio));
    worst = std::max(worst, r.ratio);
  }
  CHECK(worst > 0.0);

  // alpha = 0, z = 2: ratios stay within 4 with the right window [n2+1, n0].
  const auto zero = VerblunskySequence::constant(0.0);
  double zero_worst = 0.0;
  for (std::size_t n1 = 0; n1 < 8; ++n1)
    for (std::size_t n2 = n1; n2 < 8; ++n2) {
      const auto r = cramer_bound_check(zero, 8, 2.0, n1, n2, CramerWindow::Literal);
      REQUIRE_FALSE(r.near_singular);
      REQUIRE(r.ratio <= 4.0);
      zero_worst = std::max(zero_worst, r.ratio);
    }
  CHECK(zero_worst == Catch::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(cramer_bound_check(VerblunskySequence::explicit_values({0.1, 0.2}), 2, z, 0, 1,
                                     CramerWindow::Literal),
                  IndexError);

  CHECK_THROWS_AS(cramer_bound_check(s, 4, z, 3, 1), ArgumentError);
  CHECK_THROWS_AS(cramer_bound_check(s, 4, z, 1, 4), ArgumentError);
}

TEST_CASE("ds06_check examples", "[spectral]") {
  Eigen::MatrixXcd a(1, 1);
  a(0, 0) = cplx(0.3, -0.4);
  const auto one = ds06_check(a, cplx(0.0, 2.0));
  REQUIRE(one.in_domain);
  CHECK(std::abs(one.product - 1.0) < 1e-12);
  CHECK(std::abs(one.bound - 1.0) < 1e-12);

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
  for (int k = 0; k < 4; ++k) u(k, k) = std::polar(0.5, 1.3 * k);
  const auto normal = ds06_check(u, std::polar(0.7, 0.4));
  REQUIRE(normal.in_domain);
  CHECK(std::abs(normal.product - 1.0) < 1e-12);
  CHECK(normal.product <= normal.bound);

  CHECK_FALSE(ds06_check(u, 0.1).in_domain);
  CHECK_THROWS_AS(ds06_check(Eigen::MatrixXcd(0, 0), 1.0), ArgumentError);
}

TEST_CASE("property: ds06 inequality on random non-normal matrices", "[spectral][property]") {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int c = 0; c < 200; ++c) {
    const int n = 2 + c % 7;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = j >= i ? cplx(g(gen), g(gen)) : cplx{};
    const double norm = spectral_norm(a);
    const cplx z = std::polar(norm * (1.0 + 0.5 * u(gen)), two_pi * u(gen));
    const auto r = ds06_check(a, z);
    REQUIRE(r.in_domain);
    REQUIRE(r.product <= r.bound * (1.0 + 1e-8));
  }
}

TEST_CASE("decay fit", "[spectral]") {
  Eigen::VectorXcd v(60);
  for (int j = 0; j < 60; ++j) v(j) = std::polar(std::exp(-0.3 * std::abs(j - 20)), 0.1 * j);
  const auto f = fit_decay(v, 1.0, FitParams{});
  REQUIRE(f.applicable);
  CHECK(f.peak == 20);
  CHECK(f.rate == Catch::Approx(0.3).epsilon(1e-10));
  CHECK(f.r2 == Catch::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(fit_decay(v, 0.5, FitParams{}).applicable);

  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(std::isnan(median({})));
}

TEST_CASE("localize with zero coupling reports no fits", "[spectral]") {
  const auto r = localize({1e-300, PhaseFunction::linear(), golden_mean()}, 0.0, 40);
  CHECK(r.fitted == 0);
  CHECK(std::isnan(r.median_r2));
  CHECK_THROWS_AS(localize({0.0, PhaseFunction::linear(), golden_mean()}, 0.0, 40), ArgumentError);
  CHECK_THROWS_AS(localize({0.5, PhaseFunction::linear(), golden_mean()}, 0.0, 600), ArgumentError);
}

TEST_CASE("localize with a non-constant phase decays at about L", "[spectral]") {
  const QuasiPeriodicFamily f{0.9, PhaseFunction::cosine(0.5), golden_mean()};
  const auto r = localize(f, 0.0, 120);
  REQUIRE(r.fitted > 10);
  CHECK(r.median_r2 >= 0.9);
  CHECK(std::abs(r.median_ratio - 1.0) <= 0.3);
}
