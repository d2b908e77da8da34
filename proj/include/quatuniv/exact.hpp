// Exact scalar types and integer linear algebra shared by every module.
//
// Integer and Rational are GMP's C++ wrappers; Eigen's NumTraits are
// specialized below so dense Eigen matrices can carry them as scalars.

#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace Eigen {

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpq_class;
  using Nested = mpz_class;
  using Literal = mpz_class;
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Nested = mpq_class;
  using Literal = mpq_class;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

}  // namespace Eigen

namespace quatuniv {

using Integer = mpz_class;
using Rational = mpq_class;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;
using IntVector = Vector<Integer>;
using RatMatrix = Matrix<Rational>;
using RatVector = Vector<Rational>;

/// Raised when a bounded search runs out of work budget before deciding.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Work limit for enumeration-based searches (lattice points visited).
struct SearchBudget {
  std::uint64_t max_points = 200'000'000;
};

/// Mutable counter charged by searches; owned by the caller.
class BudgetMeter {
 public:
  explicit BudgetMeter(SearchBudget budget = {}) : limit_(budget.max_points) {}

  void charge(std::uint64_t points = 1) {
    used_ += points;
    if (used_ > limit_) {
      throw BudgetExhausted("search budget of " + std::to_string(limit_) +
                            " points exhausted");
    }
  }
  std::uint64_t used() const noexcept { return used_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

Integer to_integer(std::int64_t v);
std::int64_t to_int64(const Integer& v);  // throws std::overflow_error
Integer floor_div(const Integer& a, const Integer& b);
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

/// Fraction-free Gaussian elimination; exact over any integral domain.
template <typename Scalar>
Scalar bareiss_determinant(Matrix<Scalar> m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  if (n == 0) return Scalar(1);
  Scalar sign(1);
  Scalar prev(1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      Eigen::Index swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return Scalar(0);
      m.row(k).swap(m.row(swap));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// Row-style Hermite normal form: upper triangular, positive pivots,
/// entries above each pivot reduced into [0, pivot). Zero rows are dropped.
/// When `transform` is non-null it receives U with U * rows = [H; 0].
IntMatrix hermite_normal_form(const IntMatrix& rows, IntMatrix* transform = nullptr);

/// Integer coefficients c with c^T * hnf = target, for a full-column-rank
/// upper-triangular HNF; nullopt when target is outside the row lattice.
std::optional<IntVector> solve_in_hnf(const IntMatrix& hnf, const IntVector& target);

/// Exact solve of A x = b over Q; nullopt when A is singular.
std::optional<RatVector> solve_rational(const RatMatrix& a, const RatVector& b);

}  // namespace quatuniv
