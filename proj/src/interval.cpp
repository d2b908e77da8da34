#include "quatuniv/interval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace quatuniv {

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) throw std::invalid_argument("interval with lo > hi");
}

Interval& Interval::operator+=(const Interval& o) {
  lo_ += o.lo_;
  hi_ += o.hi_;
  return *this;
}

Interval& Interval::operator-=(const Interval& o) {
  Rational lo = lo_ - o.hi_;
  hi_ -= o.lo_;
  lo_ = std::move(lo);
  return *this;
}

Interval& Interval::operator*=(const Interval& o) {
  const Rational a = lo_ * o.lo_;
  const Rational b = lo_ * o.hi_;
  const Rational c = hi_ * o.lo_;
  const Rational d = hi_ * o.hi_;
  lo_ = std::min({a, b, c, d});
  hi_ = std::max({a, b, c, d});
  return *this;
}

Interval operator*(const Rational& s, const Interval& a) {
  if (s >= 0) return Interval(s * a.lo_, s * a.hi_);
  return Interval(s * a.hi_, s * a.lo_);
}

Interval Interval::reciprocal() const {
  if (contains_zero()) throw std::domain_error("reciprocal of an interval containing zero");
  return Interval(1 / hi_, 1 / lo_);
}

Rational sqrt_lower(const Rational& q, int bits) {
  if (q < 0) throw std::domain_error("sqrt of negative rational");
  // floor(sqrt(num * den * 4^bits)) / (den * 2^bits)
  Integer scaled = q.get_num() * q.get_den();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * static_cast<unsigned>(bits));
  Integer root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Integer den = q.get_den();
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned>(bits));
  Rational out(root, den);
  out.canonicalize();
  return out;
}

Rational sqrt_upper(const Rational& q, int bits) {
  Rational lo = sqrt_lower(q, bits);
  if (lo * lo == q) return lo;
  Integer den = q.get_den();
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned>(bits));
  Rational step(1, den);
  step.canonicalize();
  return lo + step;
}

Interval Interval::sqrt(int bits) const {
  if (lo_ < 0) throw std::domain_error("sqrt of an interval with negative part");
  return Interval(sqrt_lower(lo_, bits), sqrt_upper(hi_, bits));
}

namespace {

double round_toward(const Rational& q, bool up) {
  double d = q.get_d();  // truncates toward zero
  const Rational back(d);
  if (up && back < q) d = std::nextafter(d, INFINITY);
  if (!up && back > q) d = std::nextafter(d, -INFINITY);
  return d;
}

}  // namespace

double Interval::lower_double() const { return round_toward(lo_, false); }
double Interval::upper_double() const { return round_toward(hi_, true); }

Interval pi_interval() {
  const Rational lo("314159265358979323846264338327950288/100000000000000000000000000000000000");
  const Rational hi("314159265358979323846264338327950289/100000000000000000000000000000000000");
  Rational l = lo, h = hi;
  l.canonicalize();
  h.canonicalize();
  return Interval(l, h);
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << "[" << x.lower_double() << ", " << x.upper_double() << "]";
}

Interval round_outward(const Interval& x, int bits) {
  Integer scale = 1;
  scale <<= bits;
  const Rational lo = x.lo() * scale, hi = x.hi() * scale;
  Rational a(floor_div(lo.get_num(), lo.get_den()), scale);
  Rational b(-floor_div(-hi.get_num(), hi.get_den()), scale);
  a.canonicalize();
  b.canonicalize();
  return Interval(a, b);
}

}  // namespace quatuniv
