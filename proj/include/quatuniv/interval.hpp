// Closed intervals with exact rational endpoints.
//
// Every operation returns an enclosure of the exact real result; there is
// no floating-point rounding anywhere on the certified path.

#pragma once

#include "quatuniv/exact.hpp"

#include <iosfwd>

namespace quatuniv {

class Interval {
 public:
  Interval() = default;
  explicit Interval(const Rational& point) : lo_(point), hi_(point) {}
  Interval(Rational lo, Rational hi);

  const Rational& lo() const noexcept { return lo_; }
  const Rational& hi() const noexcept { return hi_; }
  Rational width() const { return hi_ - lo_; }
  Rational midpoint() const { return (lo_ + hi_) / 2; }

  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }
  bool is_positive() const { return lo_ > 0; }
  bool is_negative() const { return hi_ < 0; }
  bool contains_zero() const { return lo_ <= 0 && 0 <= hi_; }

  /// Enclosure of 1/x; throws std::domain_error when the interval meets 0.
  Interval reciprocal() const;
  /// Enclosure of sqrt(x) with endpoints accurate to 2^-bits; lo must be >= 0.
  Interval sqrt(int bits) const;

  double lower_double() const;  // rounded toward -inf
  double upper_double() const;  // rounded toward +inf

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);

  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
  friend Interval operator/(const Interval& a, const Interval& b) { return a * b.reciprocal(); }
  friend Interval operator-(const Interval& a) { return Interval(-a.hi_, -a.lo_); }
  friend Interval operator*(const Rational& s, const Interval& a);

 private:
  Rational lo_{0};
  Rational hi_{0};
};

/// Certified enclosure of pi, width below 1e-35.
Interval pi_interval();

/// sqrt(q) rounded down / up to a multiple of 2^-bits.
Rational sqrt_lower(const Rational& q, int bits);
Rational sqrt_upper(const Rational& q, int bits);

/// Smallest enclosing interval with endpoints in 2^-bits Z.
Interval round_outward(const Interval& x, int bits);

std::ostream& operator<<(std::ostream& os, const Interval& x);

}  // namespace quatuniv
