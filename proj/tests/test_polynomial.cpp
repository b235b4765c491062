#include "catch_amalgamated.hpp"

#include <complex>
#include <random>

#include "cmvlab/cmv.hpp"
#include "cmvlab/determinants.hpp"
#include "cmvlab/polynomial.hpp"
#include "oracles.hpp"

using namespace cmvlab;

namespace {

double coeff_diff(const ComplexPolynomial& a, const ComplexPolynomial& b) {
  double d = 0.0;
  for (int k = 0; k <= std::max(a.nominal_degree(), b.nominal_degree()); ++k)
    d = std::max(d, std::abs(a.coeff(k) - b.coeff(k)));
  return d;
}

std::vector<cplx> circle_points(std::uint64_t seed, int count) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, two_pi);
  std::vector<cplx> out;
  for (int i = 0; i < count; ++i) out.push_back(std::polar(1.0, u(gen)));
  return out;
}

}  // namespace

TEST_CASE("szego_dual examples", "[polynomial]") {
  CHECK(coeff_diff(szego_dual(ComplexPolynomial::constant(1.0), 0), ComplexPolynomial::constant(1.0)) == 0.0);

  const cplx a0(0.2, 0.4);
  const ComplexPolynomial p({-std::conj(a0), 1.0});
  CHECK(coeff_diff(szego_dual(p, 1), ComplexPolynomial({1.0, -a0})) == 0.0);

  const ComplexPolynomial q({cplx(0.0, 3.0), -2.0, 1.0});
  CHECK(coeff_diff(szego_dual(q, 2), ComplexPolynomial({1.0, -2.0, cplx(0.0, -3.0)})) == 0.0);

  CHECK_THROWS_AS(szego_dual(q, 1), ArgumentError);
  CHECK(szego_dual(q, 4).nominal_degree() == 4);
}

TEST_CASE("dual_at_point examples", "[polynomial]") {
  CHECK(dual_at_point(1.0, 1.0, 5) == cplx(1.0, 0.0));
  CHECK(std::abs(dual_at_point(cplx(0, 1), cplx(0, 1), 2) - cplx(0, 1)) < 1e-15);
  CHECK_THROWS_AS(dual_at_point(1.0, 0.5, 1), ArgumentError);

  const auto s = VerblunskySequence::random(3, 0.9);
  const cplx z = std::polar(1.0, 0.7);
  const auto phi3 = phi_monic(s, 3);
  CHECK(std::abs(dual_at_point(phi3(z), z, 3) - szego_dual(phi3, 3)(z)) < 1e-13);
}

TEST_CASE("phi_monic examples", "[polynomial]") {
  const cplx a0(0.3, -0.1), a1(-0.5, 0.25);
  const auto s = VerblunskySequence::explicit_values({a0, a1});
  CHECK(coeff_diff(phi_monic(s, 0), ComplexPolynomial::constant(1.0)) == 0.0);
  CHECK(coeff_diff(phi_monic(s, 1), ComplexPolynomial({-std::conj(a0), 1.0})) == 0.0);
  const ComplexPolynomial phi2({-std::conj(a1), -(std::conj(a0) - a0 * std::conj(a1)), 1.0});
  CHECK(coeff_diff(phi_monic(s, 2), phi2) < 1e-15);
  CHECK(coeff_diff(charpoly_coeffs(build_restriction(
                       VerblunskySequence::explicit_values({a0, a1, 0.1}), MatrixKind::HalfLine, 0, 1)),
                   phi2) < 1e-12);
  CHECK_THROWS_AS(phi_monic(s, -1), ArgumentError);
}

TEST_CASE("psi_second_kind examples", "[polynomial]") {
  const auto s = VerblunskySequence::random(19, 0.9);
  const cplx a0 = s.coefficient_at(0);
  CHECK(coeff_diff(psi_second_kind(s, 0), ComplexPolynomial::constant(1.0)) == 0.0);
  CHECK(coeff_diff(psi_second_kind(s, 1), ComplexPolynomial({std::conj(a0), 1.0})) == 0.0);
  CHECK(coeff_diff(psi_second_kind(s, 3), charpoly_coeffs(build_restriction(s, MatrixKind::HalfLinePrimed, 0, 2))) <
        1e-12);
}

TEST_CASE("ab_decomposition examples", "[polynomial]") {
  const cplx a0(0.4, 0.3);
  const auto ab1 = ab_decomposition(VerblunskySequence::explicit_values({a0}), 1);
  CHECK(std::abs(ab1.a.coeff(0) + a0) < 1e-16);
  CHECK(std::abs(ab1.b.coeff(0) - 1.0) < 1e-16);

  for (int n : {1, 4, 9}) {
    const auto ab = ab_decomposition(VerblunskySequence::constant(0.0), n);
    CHECK(ab.a.degree() == -1);
    CHECK(coeff_diff(ab.b, ComplexPolynomial::constant(1.0)) == 0.0);
  }

  const auto s = VerblunskySequence::random(23, 0.9);
  for (int n : {2, 5, 12}) {
    const auto ab = ab_decomposition(s, n);
    CHECK(ab.a.nominal_degree() == n - 1);
    CHECK(ab.b.nominal_degree() == n - 1);
    const auto rebuilt = szego_dual(ab.b, n - 1).times_z() + szego_dual(ab.a, n - 1);
    CHECK(coeff_diff(rebuilt, phi_monic(s, n)) < 1e-12);
  }
  CHECK_THROWS_AS(ab_decomposition(s, 0), ArgumentError);
}

TEST_CASE("evaluate examples", "[polynomial]") {
  CHECK(evaluate(ComplexPolynomial::constant(1.0), cplx(123.0, -4.0)) == cplx(1.0, 0.0));
  const cplx a0(0.1, -0.6);
  CHECK(evaluate(ComplexPolynomial({-std::conj(a0), 1.0}), std::conj(a0)) == cplx{});

  const auto s = VerblunskySequence::random(29, 0.9);
  const auto phi5 = phi_monic(s, 5);
  const auto c = build_restriction(s, MatrixKind::HalfLine, 0, 4);
  for (const cplx z : circle_points(1, 7)) CHECK(std::abs(evaluate(phi5, z) - det_lu(c, z)) < 1e-11);
}

TEST_CASE("pointwise recurrence matches the coefficient recurrence", "[polynomial]") {
  const auto s = VerblunskySequence::random(31, 0.8);
  for (const cplx z : circle_points(2, 8)) {
    CHECK(std::abs(phi_monic_at(s, 10, z) - phi_monic(s, 10)(z)) < 1e-12);
    CHECK(std::abs(psi_second_kind_at(s, 10, z) - psi_second_kind(s, 10)(z)) < 1e-12);
  }
}

TEST_CASE("property: normalized Szego recurrences", "[polynomial][property]") {
  auto at = [](const ComplexPolynomial& p, cplx z) { return oracle::horner_ld(p.coefficients(), z); };
  const auto z_points = circle_points(3, 32);
  // Absolute 1e-11 where |phi_n| stays moderate.
  SECTION("radius 0.5") {
    const auto s = VerblunskySequence::random(37, 0.5);
    for (int n = 0; n < 30; ++n) {
      const auto phi_n = phi_normalized(s, n), phi_next = phi_normalized(s, n + 1);
      const auto phi_n_star = szego_dual(phi_n, n), phi_next_star = szego_dual(phi_next, n + 1);
      const cplx a = s.coefficient_at(n);
      const double r = s.rho_at(n);
      for (const cplx z : z_points) {
        REQUIRE(std::abs(r * at(phi_next, z) - (z * at(phi_n, z) - std::conj(a) * at(phi_n_star, z))) < 1e-11);
        REQUIRE(std::abs(r * at(phi_next_star, z) - (at(phi_n_star, z) - a * z * at(phi_n, z))) < 1e-11);
      }
    }
  }
  // Coefficients reach 5e6 here, so the residual is measured against the
  // coefficient 1-norm, which bounds what storing them in double can resolve.
  SECTION("radius 0.95") {
    const auto s = VerblunskySequence::random(37, 0.95);
    for (int n = 0; n < 30; ++n) {
      const auto phi_n = phi_normalized(s, n), phi_next = phi_normalized(s, n + 1);
      const auto phi_n_star = szego_dual(phi_n, n), phi_next_star = szego_dual(phi_next, n + 1);
      const cplx a = s.coefficient_at(n);
      const double r = s.rho_at(n);
      for (const cplx z : z_points) {
        double scale = 1.0;
        for (const auto& p : {phi_n, phi_next})
          for (const cplx c : p.coefficients()) scale += std::abs(c);
        REQUIRE(std::abs(r * at(phi_next, z) - (z * at(phi_n, z) - std::conj(a) * at(phi_n_star, z))) <
                1e-11 * scale);
        REQUIRE(std::abs(r * at(phi_next_star, z) - (at(phi_n_star, z) - a * z * at(phi_n, z))) < 1e-11 * scale);
      }
    }
  }
}

TEST_CASE("property: szego_dual is an involution at fixed degree", "[polynomial][property]") {
  const auto p = phi_monic(VerblunskySequence::random(41, 0.9), 7);
  for (int n : {7, 8, 11}) CHECK(coeff_diff(szego_dual(szego_dual(p, n), n), p) == 0.0);
}

TEST_CASE("property: pointwise dual equals the coefficient dual on the circle", "[polynomial][property]") {
  const auto s = VerblunskySequence::random(43, 0.9);
  for (int n : {1, 3, 8, 16}) {
    const auto p = psi_second_kind(s, n);
    for (const cplx z : circle_points(std::uint64_t(n), 16))
      REQUIRE(std::abs(dual_at_point(evaluate(p, z), z, n) - evaluate(szego_dual(p, n), z)) < 1e-12);
  }
}
