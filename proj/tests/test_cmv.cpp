#include "catch_amalgamated.hpp"

#include <complex>

#include "cmvlab/cmv.hpp"
#include "cmvlab/determinants.hpp"
#include "oracles.hpp"

using namespace cmvlab;

namespace {

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("half-line [0,1] block", "[cmv]") {
  const cplx a0(0.3, -0.2), a1(-0.1, 0.5), a2(0.4, 0.4);
  const auto s = VerblunskySequence::explicit_values({a0, a1, a2});
  const auto m = build_restriction(s, MatrixKind::HalfLine, 0, 1).entries.to_dense();
  const double r0 = rho_of(a0);
  Eigen::Matrix2cd expect;
  expect << std::conj(a0), std::conj(a1) * r0, r0, -std::conj(a1) * a0;
  CHECK(max_diff(m, expect) < 1e-15);

  const auto p = build_restriction(s, MatrixKind::HalfLinePrimed, 0, 1).entries.to_dense();
  expect << -std::conj(a0), -std::conj(a1) * r0, r0, -std::conj(a1) * a0;
  CHECK(max_diff(p, expect) < 1e-15);
}

TEST_CASE("zero coefficients give the shift pattern", "[cmv]") {
  const auto m = build_restriction(VerblunskySequence::constant(0.0), MatrixKind::HalfLine, 0, 2).entries.to_dense();
  Eigen::Matrix3cd expect;
  expect << 0, 0, 1, 1, 0, 0, 0, 0, 0;
  CHECK(max_diff(m, expect) == 0.0);
}

TEST_CASE("window errors", "[cmv]") {
  const auto s = VerblunskySequence::explicit_values({0.1, 0.2, 0.3});
  CHECK_THROWS_AS(build_restriction(s, MatrixKind::HalfLine, 2, 0), ArgumentError);
  CHECK_THROWS_AS(build_restriction(s, MatrixKind::HalfLine, -1, 1), ArgumentError);
  CHECK_THROWS_AS(build_restriction(s, MatrixKind::HalfLine, 0, 4), IndexError);
  CHECK_THROWS_AS(build_restriction(s, MatrixKind::Extended, 0, 1), IndexError);  // needs alpha_{-1}
  CHECK_THROWS_AS(build_aux_p(s, 0, false), ArgumentError);
  CHECK(build_restriction(s, MatrixKind::HalfLine, 1, 0).empty());
}

TEST_CASE("auxiliary P matrices", "[cmv]") {
  const auto s = VerblunskySequence::random(21, 0.9);
  const cplx a0 = s.coefficient_at(0), a1 = s.coefficient_at(1), a2 = s.coefficient_at(2);
  const double r0 = rho_of(a0), r1 = rho_of(a1);

  const auto p1 = build_aux_p(s, 1, false);
  CHECK(p1.size() == 0);
  CHECK(det_lu(p1, cplx(0.3, 0.2)) == cplx(1.0, 0.0));

  const auto p2 = build_aux_p(s, 2, false).entries.to_dense();
  REQUIRE(p2.rows() == 1);
  CHECK(std::abs(p2(0, 0) + std::conj(a1) * r0) < 1e-15);

  const cplx z = std::polar(1.0, 0.8);
  const auto p3 = build_aux_p(s, 3, false);
  const auto m = p3.characteristic(z).to_dense();
  Eigen::Matrix2cd expect;
  expect << -std::conj(a1) * r0, -r1 * r0, -std::conj(a2) * r1, z + std::conj(a2) * a1;
  CHECK(max_diff(m, expect) < 1e-15);
}

TEST_CASE("P is the minor of z - E_[0,n-1] without row 1 and column 0", "[cmv]") {
  const auto s = VerblunskySequence::random(8, 0.9, true);
  const cplx z(0.4, -0.7);
  for (int n = 2; n <= 9; ++n) {
    const Eigen::MatrixXcd e =
        z * Eigen::MatrixXcd::Identity(n, n) - build_restriction(s, MatrixKind::Extended, 0, n - 1).entries.to_dense();
    Eigen::MatrixXcd minor(n - 1, n - 1);
    for (int r = 0, rr = 0; r < n; ++r) {
      if (r == 1) continue;
      for (int c = 1; c < n; ++c) minor(rr, c - 1) = e(r, c);
      ++rr;
    }
    CHECK(max_diff(build_aux_p(s, std::size_t(n), false).characteristic(z).to_dense(), minor) < 1e-15);
  }
}

TEST_CASE("restrictions agree with the Theta-block factorization", "[cmv][oracle]") {
  const auto s = VerblunskySequence::random(77, 0.95, true);
  auto alpha = [&](std::int64_t k) { return s.coefficient_at(k); };
  for (int N : {1, 2, 5, 12, 33}) {
    const auto c = build_restriction(s, MatrixKind::HalfLine, 0, N - 1).entries.to_dense();
    CHECK(max_diff(c, oracle::lm_truncation(alpha, N, -1.0)) < 1e-14);
    const auto e = build_restriction(s, MatrixKind::Extended, 0, N - 1).entries.to_dense();
    CHECK(max_diff(e, oracle::lm_truncation(alpha, N, s.coefficient_at(-1))) < 1e-14);
  }
}

TEST_CASE("shift covariance", "[cmv]") {
  SECTION("constant coefficients") {
    const auto s = VerblunskySequence::quasi_periodic(0.6, PhaseFunction::linear(), 0.0, 0.3);
    CHECK(shift_covariance_check(s, 1, 5));
    CHECK(shift_covariance_check(s, 2, 9));
    const auto two = VerblunskySequence::quasi_periodic(0.6, PhaseFunction::linear(), 0.0, 0.3, true);
    CHECK(shift_covariance_check(two, 0, 4, MatrixKind::Extended));
  }
  SECTION("lambda 0.5, omega 0.3, x 0.1") {
    const auto s = VerblunskySequence::quasi_periodic(0.5, PhaseFunction::linear(), 0.3, 0.1);
    CHECK(shift_covariance_check(s, 1, 3));
    CHECK(shift_covariance_check(s, 1, 5));
    // The half-line matrix pins alpha_{-1} = -1, which is not shift covariant;
    // the extended matrix is.
    CHECK_FALSE(shift_covariance_check(s, 0, 4));
    const auto two = VerblunskySequence::quasi_periodic(0.5, PhaseFunction::linear(), 0.3, 0.1, true);
    CHECK(shift_covariance_check(two, 0, 4, MatrixKind::Extended));
  }
  CHECK_THROWS_AS(shift_covariance_check(VerblunskySequence::random(1, 0.5), 0, 2), ArgumentError);
}

TEST_CASE("property: pentadiagonal with exact zeros", "[cmv][property]") {
  const auto s = VerblunskySequence::random(4, 0.95, true);
  for (auto kind : {MatrixKind::HalfLine, MatrixKind::Extended, MatrixKind::HalfLinePrimed,
                    MatrixKind::ExtendedPrimed}) {
    for (std::int64_t a : {0, 1, 3}) {
      const auto m = build_restriction(s, kind, a, a + 20).entries.to_dense();
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
          if (std::abs(i - j) > 2) REQUIRE(m(i, j) == cplx{});
    }
  }
}

TEST_CASE("property: primed equals unprimed of the negated sequence", "[cmv][property]") {
  const auto s = VerblunskySequence::random(12, 0.9, true);
  for (auto [kind, primed] : {std::pair{MatrixKind::HalfLine, MatrixKind::HalfLinePrimed},
                              std::pair{MatrixKind::Extended, MatrixKind::ExtendedPrimed}}) {
    const auto a = build_restriction(negate(s), kind, 0, 15).entries.to_dense();
    const auto b = build_restriction(s, primed, 0, 15).entries.to_dense();
    CHECK(max_diff(a, b) == 0.0);
  }
}

TEST_CASE("property: interior columns of large truncations are unit vectors", "[cmv][property]") {
  const auto s = VerblunskySequence::random(31, 0.95);
  const int N = 120;
  const auto c = build_restriction(s, MatrixKind::HalfLine, 0, N - 1).entries.to_dense();
  for (int j = 0; j < N - 2; ++j) REQUIRE(std::abs(c.col(j).norm() - 1.0) < 1e-12);
}

TEST_CASE("property: E_[a,b] = C_[a,b] for a >= 1", "[cmv][property]") {
  const auto s = VerblunskySequence::random(15, 0.9, true);
  for (std::int64_t a : {1, 2, 5})
    CHECK(max_diff(build_restriction(s, MatrixKind::Extended, a, a + 10).entries.to_dense(),
                   build_restriction(s, MatrixKind::HalfLine, a, a + 10).entries.to_dense()) == 0.0);
}

TEST_CASE("matrix kind names round-trip", "[cmv]") {
  for (auto k : {MatrixKind::HalfLine, MatrixKind::Extended, MatrixKind::HalfLinePrimed, MatrixKind::ExtendedPrimed,
                 MatrixKind::AuxP, MatrixKind::AuxPPrimed})
    CHECK(parse_matrix_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_matrix_kind("nope"), ArgumentError);
}
