#include "quatuniv/exact.hpp"
#include "quatuniv/interval.hpp"

#include <gtest/gtest.h>

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <random>

using namespace quatuniv;

namespace {

IntMatrix random_matrix(std::mt19937_64& gen, int rows, int cols, int radius) {
  std::uniform_int_distribution<int> d(-radius, radius);
  IntMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = d(gen);
  return m;
}

}  // namespace

TEST(Exact, BareissMatchesFloatingDeterminant) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const IntMatrix m = random_matrix(gen, 5, 5, 9);
    Eigen::MatrixXd d(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) d(i, j) = m(i, j).get_d();
    EXPECT_NEAR(bareiss_determinant(m).get_d(), d.determinant(), 1e-6);
  }
}

TEST(Exact, HermiteNormalFormShapeAndTransform) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 30; ++trial) {
    const IntMatrix rows = random_matrix(gen, 7, 4, 20);
    IntMatrix U;
    const IntMatrix h = hermite_normal_form(rows, &U);
    ASSERT_EQ(h.rows(), 4);
    for (int i = 0; i < 4; ++i) {
      EXPECT_GT(h(i, i), 0);
      for (int j = 0; j < i; ++j) EXPECT_EQ(h(i, j), 0);
      for (int k = 0; k < i; ++k) {
        EXPECT_GE(h(k, i), 0);
        EXPECT_LT(h(k, i), h(i, i));
      }
    }
    const IntMatrix prod = U * rows;
    EXPECT_EQ(prod.topRows(4), h);
    EXPECT_TRUE(prod.bottomRows(3).isZero());
    const Integer det = bareiss_determinant(U);
    EXPECT_TRUE(det == 1 || det == -1);
  }
}

TEST(Exact, SolveInHnfMembership) {
  IntMatrix rows(3, 3);
  rows << 2, 0, 0, 0, 3, 0, 0, 0, 5;
  const IntMatrix h = hermite_normal_form(rows);
  IntVector in(3), out(3);
  in << 4, 9, -10;
  out << 1, 0, 0;
  const auto c = solve_in_hnf(h, in);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(IntVector(h.transpose() * *c), in);
  EXPECT_FALSE(solve_in_hnf(h, out).has_value());
}

TEST(Exact, RationalParsing) {
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(to_string(Rational(5, 1)), "5");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_EQ(floor_div(Integer(-7), Integer(2)), -4);
}

TEST(Exact, BudgetMeterThrows) {
  BudgetMeter m(SearchBudget{3});
  m.charge(3);
  EXPECT_THROW(m.charge(), BudgetExhausted);
}

TEST(Interval, PiAndSquareRootsEnclose) {
  const Interval pi = pi_interval();
  EXPECT_LE(pi.lower_double(), std::numbers::pi);
  EXPECT_GE(pi.upper_double(), std::numbers::pi);
  EXPECT_LT(pi.width(), Rational(1, 1000000000));
  const Interval r = Interval(Rational(2)).sqrt(80);
  EXPECT_TRUE((r * r).contains(Rational(2)));
  EXPECT_LE(r.lower_double(), std::sqrt(2.0));
  EXPECT_GE(r.upper_double(), std::sqrt(2.0));
}

TEST(Interval, ArithmeticContainment) {
  const Interval a(Rational(1), Rational(2)), b(Rational(-3), Rational(5));
  const Interval p = a * b;
  EXPECT_EQ(p.lo(), -6);
  EXPECT_EQ(p.hi(), 10);
  EXPECT_THROW(b.reciprocal(), std::domain_error);
  const Interval q = a / Interval(Rational(4));
  EXPECT_EQ(q.lo(), Rational(1, 4));
  EXPECT_EQ(q.hi(), Rational(1, 2));
  const Interval o = round_outward(Interval(Rational(1, 3)), 10);
  EXPECT_TRUE(o.contains(Rational(1, 3)));
  EXPECT_LE(o.width(), Rational(1, 1024));
}
