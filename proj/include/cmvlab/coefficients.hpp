#pragma once

// Verblunsky coefficient sequences: explicit lists, constants, quasi-periodic
// analytic samplings alpha_n(x) = lambda * exp(2 pi i h(x + n omega)), and
// seed-reproducible random draws from a disc. Sequences are immutable values.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "cmvlab/errors.hpp"

namespace cmvlab {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduces t to [0, 1).
inline double frac(double t) {
  double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;
}

/// sqrt(1 - |alpha|^2), factored to keep precision when |alpha| is near 1.
inline double rho_of(cplx alpha) {
  const double a = std::abs(alpha);
  return std::sqrt((1.0 - a) * (1.0 + a));
}

/// A circle map h: T -> T written as an integer winding plus a real
/// trigonometric polynomial:
///   h(x) = winding * x + constant + sum_k cos_k cos(2 pi k x) + sin_k sin(2 pi k x).
struct PhaseFunction {
  int winding = 1;
  double constant = 0.0;
  std::vector<double> cos_terms;  // k = 1, 2, ...
  std::vector<double> sin_terms;

  static PhaseFunction linear() { return {}; }

  /// h(x) = amplitude * cos(2 pi x), no winding.
  static PhaseFunction cosine(double amplitude) {
    PhaseFunction h;
    h.winding = 0;
    h.cos_terms = {amplitude};
    return h;
  }

  double operator()(double x) const {
    const double t = frac(x);
    double value = winding * t + constant;
    for (std::size_t k = 0; k < cos_terms.size(); ++k)
      value += cos_terms[k] * std::cos(two_pi * double(k + 1) * t);
    for (std::size_t k = 0; k < sin_terms.size(); ++k)
      value += sin_terms[k] * std::sin(two_pi * double(k + 1) * t);
    return value;
  }

  bool operator==(const PhaseFunction&) const = default;
};

struct ExplicitGenerator {
  std::vector<cplx> values;
  std::int64_t first_index = 0;
  bool operator==(const ExplicitGenerator&) const = default;
};

struct ConstantGenerator {
  cplx value;
  bool operator==(const ConstantGenerator&) const = default;
};

struct QuasiPeriodicGenerator {
  double lambda = 0.0;
  PhaseFunction h;
  double omega = 0.0;
  double x = 0.0;
  bool operator==(const QuasiPeriodicGenerator&) const = default;
};

struct RandomGenerator {
  std::uint64_t seed = 0;
  double radius = 0.0;
  bool operator==(const RandomGenerator&) const = default;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double unit_from_bits(std::uint64_t bits) {
  return double(bits >> 11) * 0x1.0p-53;
}

inline void require_in_disc(cplx value, const char* what) {
  if (!(std::abs(value) < 1.0))
    throw ArgumentError(std::string(what) + ": coefficient outside the open unit disc");
}

}  // namespace detail

class VerblunskySequence {
 public:
  using Generator =
      std::variant<ExplicitGenerator, ConstantGenerator, QuasiPeriodicGenerator, RandomGenerator>;

  static VerblunskySequence explicit_values(std::vector<cplx> values, std::int64_t first_index = 0) {
    for (const auto& v : values) detail::require_in_disc(v, "explicit sequence");
    return VerblunskySequence(ExplicitGenerator{std::move(values), first_index}, first_index < 0);
  }

  static VerblunskySequence constant(cplx value, bool two_sided = false) {
    detail::require_in_disc(value, "constant sequence");
    return VerblunskySequence(ConstantGenerator{value}, two_sided);
  }

  static VerblunskySequence quasi_periodic(double lambda, PhaseFunction h, double omega, double x,
                                           bool two_sided = false) {
    if (!(lambda >= 0.0 && lambda < 1.0))
      throw ArgumentError("quasi-periodic sequence: lambda must lie in [0, 1)");
    return VerblunskySequence(QuasiPeriodicGenerator{lambda, std::move(h), frac(omega), frac(x)},
                              two_sided);
  }

  static VerblunskySequence random(std::uint64_t seed, double radius, bool two_sided = false) {
    if (!(radius >= 0.0 && radius < 1.0))
      throw ArgumentError("random sequence: radius must lie in [0, 1)");
    return VerblunskySequence(RandomGenerator{seed, radius}, two_sided);
  }

  const Generator& generator() const { return generator_; }
  bool two_sided() const { return two_sided_; }
  std::span<const cplx> rotations() const { return rotations_; }

  bool defined_at(std::int64_t n) const {
    if (find_override(n)) return true;
    if (const auto* e = std::get_if<ExplicitGenerator>(&generator_))
      return n >= e->first_index && n < e->first_index + std::int64_t(e->values.size());
    return two_sided_ || n >= 0;
  }

  cplx coefficient_at(std::int64_t n) const {
    if (const auto* o = find_override(n)) return apply_rotations(o->value, o->depth);
    if (!defined_at(n))
      throw IndexError("Verblunsky coefficient index " + std::to_string(n) + " outside sequence range");
    return apply_rotations(base_value(n), 0);
  }

  double rho_at(std::int64_t n) const { return rho_of(coefficient_at(n)); }

  /// Copy with alpha_n pinned to `value` (e.g. setting alpha_{-1} for the extended case).
  VerblunskySequence with_override(std::int64_t n, cplx value) const {
    detail::require_in_disc(value, "override");
    VerblunskySequence out = *this;
    std::erase_if(out.overrides_, [n](const Override& o) { return o.index == n; });
    out.overrides_.push_back({n, value, rotations_.size()});
    return out;
  }

  /// Multiplies every coefficient by lambda. Rotating by the conjugate of the
  /// most recent rotation undoes it exactly.
  VerblunskySequence rotated(cplx lambda) const {
    VerblunskySequence out = *this;
    if (lambda == cplx(1.0, 0.0)) return out;
    if (!out.rotations_.empty() && out.rotations_.back() == std::conj(lambda)) {
      out.rotations_.pop_back();
      for (auto& o : out.overrides_) o.depth = std::min(o.depth, out.rotations_.size());
      return out;
    }
    out.rotations_.push_back(lambda);
    return out;
  }

  struct Override {
    std::int64_t index;
    cplx value;
    std::size_t depth;  // rotations applied before the override was set are skipped
    bool operator==(const Override&) const = default;
  };

  std::span<const Override> overrides() const { return overrides_; }

  bool operator==(const VerblunskySequence&) const = default;

 private:

  VerblunskySequence(Generator g, bool two_sided) : generator_(std::move(g)), two_sided_(two_sided) {}

  const Override* find_override(std::int64_t n) const {
    for (const auto& o : overrides_)
      if (o.index == n) return &o;
    return nullptr;
  }

  cplx apply_rotations(cplx v, std::size_t from) const {
    for (std::size_t k = from; k < rotations_.size(); ++k) v *= rotations_[k];
    return v;
  }

  cplx base_value(std::int64_t n) const {
    return std::visit(
        [n](const auto& g) -> cplx {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, ExplicitGenerator>) {
            return g.values[std::size_t(n - g.first_index)];
          } else if constexpr (std::is_same_v<G, ConstantGenerator>) {
            return g.value;
          } else if constexpr (std::is_same_v<G, QuasiPeriodicGenerator>) {
            const double t = frac(g.x + double(n) * g.omega);
            return std::polar(g.lambda, two_pi * frac(g.h(t)));
          } else {
            const auto key = static_cast<std::uint64_t>(n);
            const std::uint64_t b1 = detail::splitmix64(g.seed ^ detail::splitmix64(key));
            const std::uint64_t b2 = detail::splitmix64(b1);
            const double r = g.radius * std::sqrt(detail::unit_from_bits(b1));
            return std::polar(r, two_pi * detail::unit_from_bits(b2));
          }
        },
        generator_);
  }

  Generator generator_;
  bool two_sided_ = false;
  std::vector<cplx> rotations_;
  std::vector<Override> overrides_;
};

inline cplx coefficient_at(const VerblunskySequence& seq, std::int64_t n) { return seq.coefficient_at(n); }
inline double rho_at(const VerblunskySequence& seq, std::int64_t n) { return seq.rho_at(n); }

/// Aleksandrov rotation alpha_n -> lambda * alpha_n; |lambda| must be 1 to 1e-12.
inline VerblunskySequence rotate_sequence(const VerblunskySequence& seq, cplx lambda) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
    throw ArgumentError("rotate_sequence: rotation must have unit modulus");
  return seq.rotated(lambda);
}

/// alpha_n -> -alpha_n; generates the second-kind polynomials and the primed matrices.
inline VerblunskySequence negate(const VerblunskySequence& seq) { return seq.rotated(cplx(-1.0, 0.0)); }

/// Quasi-periodic family with the phase x left free.
struct QuasiPeriodicFamily {
  double lambda = 0.0;
  PhaseFunction h = PhaseFunction::linear();
  double omega = 0.0;

  VerblunskySequence at(double x, bool two_sided = false) const {
    return VerblunskySequence::quasi_periodic(lambda, h, omega, x, two_sided);
  }
};

inline double golden_mean() { return (std::sqrt(5.0) - 1.0) / 2.0; }

}  // namespace cmvlab
