#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "pfree/error.hpp"
#include "pfree/rational.hpp"

namespace pfree {

/// The constant chain behind the halving lemma, the localization step and
/// the main extraction theorem, derived from the homogeneity density delta
/// and the halving target alpha:
///
///   c0 = log2(1/delta)      eps0 = delta * alpha^c0
///   c1 = 3 c0               eps1 = 4 eps0^3
///   c2 = 3 c1 + 4           eps2 = min(eps1 / 2, 1/16)
///
/// When delta is a power of 1/2 every exponent is an integer and the chain
/// is also available as exact rationals.
class BoundsProfile {
 public:
  struct Exact {
    std::int64_t c0, c1, c2;
    Rational eps0, eps1, eps2;
  };

  const Rational& alpha() const { return alpha_; }
  const Rational& delta() const { return delta_; }
  double c0() const { return c0_; }
  double eps0() const { return eps0_; }
  double c1() const { return c1_; }
  double eps1() const { return eps1_; }
  double c2() const { return c2_; }
  double eps2() const { return eps2_; }
  const std::optional<Exact>& exact() const { return exact_; }

  friend BoundsProfile compute_bounds_profile(const Rational& delta, const Rational& alpha);

 private:
  BoundsProfile() = default;

  Rational alpha_, delta_;
  double c0_ = 0, eps0_ = 0, c1_ = 0, eps1_ = 0, c2_ = 0, eps2_ = 0;
  std::optional<Exact> exact_;
};

inline BoundsProfile compute_bounds_profile(const Rational& delta, const Rational& alpha) {
  if (delta <= 0 || delta >= 1) throw PreconditionError("delta must lie in (0,1)");
  if (alpha <= 0 || alpha >= 1) throw PreconditionError("alpha must lie in (0,1)");
  BoundsProfile p;
  p.delta_ = delta;
  p.alpha_ = alpha;
  p.c0_ = std::log2(1.0 / to_double(delta));
  p.eps0_ = to_double(delta) * std::pow(to_double(alpha), p.c0_);
  p.c1_ = 3 * p.c0_;
  p.eps1_ = 4 * p.eps0_ * p.eps0_ * p.eps0_;
  p.c2_ = 3 * p.c1_ + 4;
  p.eps2_ = std::min(p.eps1_ / 2, 1.0 / 16);

  // delta = 2^-j exactly
  const Rational inv = 1 / delta;
  if (boost::multiprecision::denominator(inv) == 1) {
    BigInt v = boost::multiprecision::numerator(inv);
    std::int64_t j = 0;
    while (v > 1 && v % 2 == 0) {
      v /= 2;
      ++j;
    }
    if (v == 1) {
      BoundsProfile::Exact e;
      e.c0 = j;
      e.c1 = 3 * j;
      e.c2 = 9 * j + 4;
      e.eps0 = delta * pow(alpha, static_cast<unsigned>(j));
      e.eps1 = 4 * e.eps0 * e.eps0 * e.eps0;
      e.eps2 = std::min(Rational(e.eps1 / 2), ratio(1, 16));
      p.exact_ = e;
    }
  }
  return p;
}

}  // namespace pfree
