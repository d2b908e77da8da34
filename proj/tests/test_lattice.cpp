#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace quatuniv;
using namespace quatuniv::testing;

namespace {

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

TEST(Lattice, CoordinateRoundTrip) {
  const auto& z = zeta7();
  Rng rng(30);
  for (int trial = 0; trial < 50; ++trial) {
    const Quaternion L = rng.quaternion(*z.H, 9);
    EXPECT_EQ(quaternion_from_coords(*z.H, quaternion_coords(L)), L);
  }
}

TEST(Lattice, WholeOrderDeterminant) {
  const auto& z = zeta7();
  const IdealLattice H = IdealLattice::whole_order(*z.H);
  EXPECT_EQ(H.coordinate_determinant(), 1);
  EXPECT_EQ(H.determinant(), 2401);
  EXPECT_TRUE(H.is_integral());
}

// H(L/rho) + H contains H with index equal to the orbit size of L.
TEST(Lattice, FractionalOrbitDeterminantMatchesOrbitSize) {
  const auto& z = zeta7();
  for (const auto& rho : {z.rho7(), z.rho13()}) {
    const ResidueRing R(rho);
    const ResidueQuaternions rq(*z.H, R);
    const OrbitSet os = enumerate_orbits(*z.H, R);
    for (const auto& o : os.orbits) {
      const Quaternion L = rq.lift(o.representative);
      const IdealLattice lat = IdealLattice::fractional_orbit(L, rho);
      EXPECT_EQ(lat.determinant(), Rational(2401) / Rational(o.size));
      EXPECT_TRUE(lat.contains(Quaternion::one(*z.H)));
      EXPECT_TRUE(lat.contains(QuaternionFraction{L, rho}));
      EXPECT_FALSE(lat.contains(QuaternionFraction{Quaternion::one(*z.H), rho}));
      // Equal orbits give equal lattices.
      const Quaternion L2 = Quaternion::basis(*z.H, 1) * L + L * z.integer(2);
      if (!divides(rho, L2) && orbit_of(rq, rq.reduce(L2)) == o.space) {
        EXPECT_EQ(IdealLattice::fractional_orbit(L2, rho), lat);
      }
    }
  }
}

TEST(Lattice, NonPrincipalIdealOfSecondOrder) {
  const auto& z = zeta7();
  const Quaternion g = Quaternion::one(*z.H0) + Quaternion::basis(*z.H0, 1) + Quaternion::basis(*z.H0, 2) * z.integer(2);
  const IdealLattice S = IdealLattice::two_generator(g, z.rho7());
  EXPECT_EQ(S.determinant(), 117649);
  EXPECT_TRUE(S.contains(g));
  EXPECT_TRUE(S.contains(Quaternion::scalar(*z.H0, z.rho7())));
  EXPECT_FALSE(S.contains(Quaternion::one(*z.H0)));
  EXPECT_EQ(S, IdealLattice::left_generated(*z.H0, {{g, z.integer(1)}, {Quaternion::scalar(*z.H0, z.rho7()), z.integer(1)}}));
}

TEST(Lattice, RightMultiplicationScalesDeterminant) {
  const auto& z = zeta7();
  const IdealLattice H = IdealLattice::whole_order(*z.H);
  const Quaternion one = Quaternion::one(*z.H);
  EXPECT_EQ(H.right_multiplied({one, z.integer(2)}).determinant(), Rational(2401, 4096));
  const Quaternion g = one + Quaternion::basis(*z.H, 2);
  const IdealLattice Hg = H.right_multiplied({g, z.integer(1)});
  EXPECT_EQ(Hg.determinant(), 2401 * 64);
  EXPECT_EQ(Hg, IdealLattice::left_generated(*z.H, {{g, z.integer(1)}}));
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const Quaternion X = rng.quaternion(*z.H, 2);
    if (X.is_zero()) continue;
    const std::int64_t n = norm(nm(X));
    EXPECT_EQ(H.right_multiplied({X, z.integer(1)}).determinant(), Rational(2401) * n * n);
  }
}

TEST(Volumes, ClosedForms) {
  const Interval v1 = diamond_volume(1, 1);
  EXPECT_LT(v1.width(), Rational(1, 1000000));
  EXPECT_NEAR(v1.midpoint().get_d(), std::numbers::pi * std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(diamond_volume(2, 1).midpoint().get_d(), std::pow(std::numbers::pi, 4) / 280, 1e-12);
  EXPECT_NEAR(diamond_volume(2, 3).midpoint().get_d(), std::pow(std::numbers::pi, 4) / 280 * std::pow(3.0, 8), 1e-6);
  for (int n = 1; n <= 4; ++n) {
    const Interval ratio = jn_volume(n, 2, 8) / diamond_volume(n, 2);
    Rational four_n = 1;
    for (int i = 0; i < n; ++i) four_n *= 4;
    EXPECT_TRUE(ratio.contains(four_n / 8)) << n;
    EXPECT_LT(ratio.width(), Rational(1, 1000000));
  }
}

// Sample each R^4 block uniformly from the unit ball (radius U^(1/4)); the
// diamond sum_t |v_t| <= 1 then has probability 4/280 = 1/70 for n = 2.
TEST(Volumes, MonteCarloDiamond) {
  std::mt19937_64 gen(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::int64_t N = 10'000'000;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < N; ++i) {
    const double r1 = std::pow(u(gen), 0.25), r2 = std::pow(u(gen), 0.25);
    hits += r1 + r2 <= 1.0;
  }
  const double ball4 = std::numbers::pi * std::numbers::pi / 2;
  const double estimate = static_cast<double>(hits) / N * ball4 * ball4;
  EXPECT_NEAR(estimate / diamond_volume(2, 1).midpoint().get_d(), 1.0, 0.01);
}

TEST(Bound, MatchesFloatingPointFormula) {
  const auto& z = zeta7();
  for (const auto& [Hp, nmT] : {std::pair{z.H, 8}, std::pair{z.H0, 27}}) {
    const double expected = std::sqrt(factorial(12)) / (std::pow(std::numbers::pi, 3) * std::pow(3.0, 1.5) * std::pow(3.0, 6)) * 49 *
                            std::sqrt(static_cast<double>(nmT));
    const Interval b = order_bound(*Hp);
    EXPECT_LE(b.lower_double(), expected + 1e-9);
    EXPECT_GE(b.upper_double(), expected - 1e-9);
    EXPECT_LT(b.width(), Rational(1, 1000000));
  }
  EXPECT_NEAR(order_bound(*z.H).midpoint().get_d(), 25.8256, 1e-3);
  EXPECT_THROW(suitability_bound(0, 49, 8), std::invalid_argument);
}

TEST(Multipliers, SmallNorms) {
  const auto& z = zeta7();
  const UnitSignatures units = unit_signatures(z.K());
  ASSERT_TRUE(units.complete);
  const auto k8 = small_norm_multipliers(z.K(), 8, units);
  ASSERT_EQ(k8.size(), 2u);
  const auto k9 = small_norm_multipliers(z.K(), 9, units);
  EXPECT_EQ(k9.size(), 3u);
  // Oracle: count totally positive elements by norm, modulo squares of units.
  std::set<std::int64_t> norms;
  for (const auto& k : k9) {
    EXPECT_TRUE(is_totally_positive(k));
    norms.insert(norm(k));
  }
  EXPECT_EQ(norms, (std::set<std::int64_t>{1, 7, 8}));
  EXPECT_TRUE(is_totally_positive(totally_positive_associate(-z.rho7(), units)));
  EXPECT_TRUE(are_associates(totally_positive_associate(z.phi(1) * z.rho13(), units), z.rho13()));
}

namespace {

void check_witnesses(const Order& H, const SuitabilityCertificate& cert) {
  const ResidueRing R(cert.rho);
  const ResidueQuaternions rq(H, R);
  std::set<int> orbits;
  for (const auto& w : cert.witnesses) {
    orbits.insert(w.orbit);
    EXPECT_EQ(w.numerator, w.D * w.generator + w.C * cert.rho);
    EXPECT_EQ(nm(w.numerator), cert.rho * w.k);
    EXPECT_EQ(w.nn, Rational(std::abs(norm(w.k))) / cert.r);
    EXPECT_LT(w.nn, 1);
    const QuaternionFraction frac{w.numerator, cert.rho};
    EXPECT_EQ(double_norm(frac), w.nn);
    if (!divides(cert.rho, w.generator)) {
      EXPECT_TRUE(IdealLattice::fractional_orbit(w.generator, cert.rho).contains(frac));
    }
  }
  EXPECT_EQ(orbits.size(), cert.witnesses.size());
}

}  // namespace

TEST(Suitability, FirstOrderPrimes) {
  const auto& z = zeta7();
  struct Case {
    FieldElement rho;
    std::size_t orbits;
    bool divides_T;
  };
  for (const auto& c : {Case{z.rho7(), 8, false}, Case{z.rho13(), 14, false}, Case{z.integer(2), 1, true}}) {
    const auto cert = certify_suitable(*z.H, c.rho);
    EXPECT_TRUE(cert.certified()) << c.rho.to_string();
    EXPECT_FALSE(cert.refuted());
    EXPECT_EQ(cert.orbit_count, c.orbits);
    EXPECT_EQ(cert.witnesses.size(), c.orbits);
    EXPECT_EQ(cert.rho_divides_T, c.divides_T);
    EXPECT_EQ(cert.unit_case_nn, Rational(1, std::abs(norm(c.rho)) * std::abs(norm(c.rho))));
    EXPECT_TRUE(is_totally_positive(cert.rho));
    check_witnesses(*z.H, cert);
  }
}

TEST(Suitability, Rho7FailsForSecondOrder) {
  const auto& z = zeta7();
  const auto cert = certify_suitable(*z.H0, z.rho7());
  EXPECT_FALSE(cert.certified());
  EXPECT_TRUE(cert.refuted());
  EXPECT_EQ(cert.orbit_count, 8u);
  EXPECT_EQ(cert.missing.size(), 6u);
  check_witnesses(*z.H0, cert);
  // Oracle: orbits reached by some element of norm rho_7.
  const ResidueRing R(z.rho7());
  const ResidueQuaternions rq(*z.H0, R);
  std::set<Subspace> reached;
  for (const auto& P : norm_solutions(*z.H0, z.rho7())) reached.insert(orbit_of(rq, rq.reduce(P)));
  EXPECT_EQ(cert.witnesses.size(), reached.size());
  for (const auto& L : cert.missing_generators) {
    EXPECT_FALSE(short_vector_witness(IdealLattice::fractional_orbit(L, cert.rho)).has_value());
  }
}

TEST(Suitability, ShortVectorWitness) {
  const auto& z = zeta7();
  const ResidueRing R(z.rho13());
  const ResidueQuaternions rq(*z.H, R);
  const OrbitSet os = enumerate_orbits(*z.H, R);
  for (const auto& o : os.orbits) {
    const IdealLattice lat = IdealLattice::fractional_orbit(rq.lift(o.representative), z.rho13());
    const auto w = short_vector_witness(lat);
    ASSERT_TRUE(w.has_value());
    EXPECT_LT(double_norm(*w), 1);
    EXPECT_TRUE(lat.contains(*w));
    EXPECT_FALSE(w->numerator.is_zero());
  }
}

TEST(Suitability, LeftQuotient) {
  const auto& z = zeta7();
  const ResidueRing R(z.rho7());
  const ResidueQuaternions rq(*z.H, R);
  Rng rng(33);
  const OrbitSet os = enumerate_orbits(*z.H, R);
  for (const auto& o : os.orbits) {
    const Quaternion L = rq.lift(o.representative);
    for (int trial = 0; trial < 10; ++trial) {
      const Quaternion D = rng.quaternion(*z.H, 5);
      const Quaternion P = D * L;
      const auto Q = left_quotient_mod(rq, L, P);
      ASSERT_TRUE(Q.has_value());
      EXPECT_EQ(rq.reduce(*Q * L), rq.reduce(P));
    }
  }
  const Quaternion L0 = rq.lift(os.orbits[0].representative);
  const Quaternion L1 = rq.lift(os.orbits[1].representative);
  EXPECT_FALSE(left_quotient_mod(rq, L0, L1).has_value());
}
