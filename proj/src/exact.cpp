#include "quatuniv/exact.hpp"

#include <limits>

namespace quatuniv {

Integer to_integer(std::int64_t v) {
  Integer out;
  mpz_set_si(out.get_mpz_t(), static_cast<long>(v));
  return out;
}

std::int64_t to_int64(const Integer& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
  return static_cast<std::int64_t>(v.get_si());
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0 || q.get_den() == 0) throw std::invalid_argument("bad rational literal: " + text);
  q.canonicalize();
  return q;
}

IntMatrix hermite_normal_form(const IntMatrix& rows, IntMatrix* transform) {
  IntMatrix h = rows;
  const Eigen::Index m = h.rows();
  const Eigen::Index k = h.cols();
  IntMatrix u;
  if (transform != nullptr) u = IntMatrix::Identity(m, m);

  auto combine = [&](Eigen::Index r, Eigen::Index i, Eigen::Index c) {
    // Replace rows r, i by a unimodular combination zeroing h(i, c).
    const Integer a = h(r, c);
    const Integer b = h(i, c);
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    const Integer ua = a / g;
    const Integer ub = b / g;
    for (Eigen::Index j = 0; j < k; ++j) {
      const Integer hr = h(r, j);
      const Integer hi = h(i, j);
      h(r, j) = s * hr + t * hi;
      h(i, j) = ua * hi - ub * hr;
    }
    if (transform != nullptr) {
      for (Eigen::Index j = 0; j < m; ++j) {
        const Integer ur = u(r, j);
        const Integer ui = u(i, j);
        u(r, j) = s * ur + t * ui;
        u(i, j) = ua * ui - ub * ur;
      }
    }
  };

  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < k && r < m; ++c) {
    for (Eigen::Index i = r + 1; i < m; ++i) {
      if (h(i, c) == 0) continue;
      if (h(r, c) == 0) {
        h.row(r).swap(h.row(i));
        if (transform != nullptr) u.row(r).swap(u.row(i));
        continue;
      }
      combine(r, i, c);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      h.row(r) = -h.row(r);
      if (transform != nullptr) u.row(r) = -u.row(r);
    }
    for (Eigen::Index i = 0; i < r; ++i) {
      const Integer q = floor_div(h(i, c), h(r, c));
      if (q != 0) {
        h.row(i) -= q * h.row(r);
        if (transform != nullptr) u.row(i) -= q * u.row(r);
      }
    }
    ++r;
  }
  if (transform != nullptr) *transform = u;
  return h.topRows(r);
}

std::optional<IntVector> solve_in_hnf(const IntMatrix& hnf, const IntVector& target) {
  const Eigen::Index n = hnf.rows();
  if (hnf.cols() != n || target.size() != n) {
    throw std::invalid_argument("solve_in_hnf expects a square full-rank HNF");
  }
  IntVector coeff(n);
  IntVector rest = target;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (rest(j) % hnf(j, j) != 0) return std::nullopt;
    coeff(j) = rest(j) / hnf(j, j);
    if (coeff(j) != 0) {
      for (Eigen::Index c = j; c < n; ++c) rest(c) -= coeff(j) * hnf(j, c);
    }
  }
  return coeff;
}

std::optional<RatVector> solve_rational(const RatMatrix& a, const RatVector& b) {
  const Eigen::Index n = a.rows();
  RatMatrix m(n, n + 1);
  m.leftCols(n) = a;
  m.col(n) = b;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return std::nullopt;
    if (p != c) m.row(p).swap(m.row(c));
    const Rational inv = 1 / m(c, c);
    m.row(c) *= inv;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == c || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      m.row(i) -= f * m.row(c);
    }
  }
  return RatVector(m.col(n));
}

}  // namespace quatuniv
