#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace quatuniv;
using namespace quatuniv::testing;

namespace {

Mat2 mat_add(const ResidueRing& R, const Mat2& a, const Mat2& b) {
  return {R.add(a.X, b.X), R.add(a.Y, b.Y), R.add(a.Z, b.Z), R.add(a.W, b.W)};
}

std::vector<QRes> all_residues(const ResidueQuaternions& rq) {
  std::vector<QRes> out;
  out.reserve(static_cast<std::size_t>(rq.count()));
  for (std::int64_t i = 0; i < rq.count(); ++i) out.push_back(rq.from_index(i));
  return out;
}

}  // namespace

TEST(ResidueRing, FieldTables) {
  const auto& z = zeta7();
  for (const auto& rho : {z.rho7(), z.rho13(), z.integer(2)}) {
    const ResidueRing R(rho);
    EXPECT_EQ(R.size(), std::abs(norm(rho)));
    for (int a = 1; a < R.size(); ++a) EXPECT_EQ(R.mul(a, R.inv(a)), R.one());
    for (int a = 0; a < R.size(); ++a) {
      EXPECT_EQ(R.add(a, R.neg(a)), R.zero());
      EXPECT_EQ(R.index(R.element(a)), a);
      // Representatives multiply like the field elements they stand for.
      for (int b = 0; b < R.size(); ++b) EXPECT_EQ(R.mul(a, b), R.index(R.element(a) * R.element(b)));
    }
    EXPECT_THROW(R.inv(0), std::domain_error);
  }
  EXPECT_THROW(ResidueRing(z.integer(7)), std::invalid_argument);
  EXPECT_THROW(ResidueRing(z.integer(1)), std::invalid_argument);
  EXPECT_THROW(ResidueRing(z.integer(0)), std::invalid_argument);
}

TEST(ResidueQuaternions, ReduceIsARingMap) {
  const auto& z = zeta7();
  const ResidueRing R(z.rho13());
  const ResidueQuaternions rq(*z.H, R);
  Rng rng(20);
  for (int trial = 0; trial < 200; ++trial) {
    const Quaternion x = rng.quaternion(*z.H, 20), y = rng.quaternion(*z.H, 20);
    EXPECT_EQ(rq.reduce(x * y), rq.mul(rq.reduce(x), rq.reduce(y)));
    EXPECT_EQ(rq.reduce(x + y), rq.add(rq.reduce(x), rq.reduce(y)));
    EXPECT_EQ(rq.reduce(conj(x)), rq.conj(rq.reduce(x)));
    EXPECT_EQ(rq.nm(rq.reduce(x)), R.index(nm(x)));
    EXPECT_EQ(rq.reduce(rq.lift(rq.reduce(x))), rq.reduce(x));
  }
}

TEST(Psi, MultiplicativeOnAllPairsModRho7) {
  const auto& z = zeta7();
  const ResidueRing R(z.rho7());
  const ResidueQuaternions rq(*z.H, R);
  const PsiMap psi = build_psi(*z.H, R);
  const auto all = all_residues(rq);
  std::vector<Mat2> image;
  image.reserve(all.size());
  for (const auto& a : all) image.push_back(psi_apply(psi, R, a));
  std::size_t bad_mul = 0, bad_add = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      const Mat2 prod = image[static_cast<std::size_t>(rq.index(rq.mul(all[i], all[j])))];
      if (!(prod == mat_mul(R, image[i], image[j]))) ++bad_mul;
      const Mat2 sum = image[static_cast<std::size_t>(rq.index(rq.add(all[i], all[j])))];
      if (!(sum == mat_add(R, image[i], image[j]))) ++bad_add;
    }
  }
  EXPECT_EQ(bad_mul, 0u);
  EXPECT_EQ(bad_add, 0u);
  EXPECT_EQ(psi_apply(psi, R, rq.reduce(Quaternion::one(*z.H))), (Mat2{R.one(), 0, 0, R.one()}));
}

TEST(Psi, MultiplicativeOnBasisModRho13) {
  const auto& z = zeta7();
  for (const auto& Hp : {z.H, z.H0}) {
    const ResidueRing R(z.rho13());
    const ResidueQuaternions rq(*Hp, R);
    const PsiMap psi = build_psi(*Hp, R);
    const auto all = all_residues(rq);
    for (int i = 0; i < 4; ++i) {
      const QRes e = rq.reduce(Quaternion::basis(*Hp, i));
      const Mat2 pe = psi_apply(psi, R, e);
      for (const auto& a : all) {
        const Mat2 pa = psi_apply(psi, R, a);
        ASSERT_EQ(psi_apply(psi, R, rq.mul(a, e)), mat_mul(R, pa, pe));
        ASSERT_EQ(psi_apply(psi, R, rq.mul(e, a)), mat_mul(R, pe, pa));
      }
    }
    // Additivity over all of H/rhoH then extends the basis law to all pairs.
    Rng rng(21);
    for (int trial = 0; trial < 2000; ++trial) {
      const QRes a = all[static_cast<std::size_t>(rng.uniform(0, rq.count() - 1))];
      const QRes b = all[static_cast<std::size_t>(rng.uniform(0, rq.count() - 1))];
      ASSERT_EQ(psi_apply(psi, R, rq.add(a, b)), mat_add(R, psi_apply(psi, R, a), psi_apply(psi, R, b)));
    }
  }
}

TEST(Psi, BijectiveWithDeterminantAndAdjugate) {
  const auto& z = zeta7();
  for (const auto& rho : {z.rho7(), z.rho13()}) {
    const ResidueRing R(rho);
    const ResidueQuaternions rq(*z.H, R);
    const PsiMap psi = build_psi(*z.H, R);
    const auto [e, f] = find_precursor(*z.H, R);
    const auto& p = z.H->params();
    EXPECT_EQ(R.index(e * e + p.mu * e + p.A + p.nu * f + p.B * f * f), 0);
    std::set<std::tuple<int, int, int, int>> seen;
    for (const auto& a : all_residues(rq)) {
      const Mat2 m = psi_apply(psi, R, a);
      seen.insert({m.X, m.Y, m.Z, m.W});
      EXPECT_EQ(psi_inverse(psi, R, m), a);
      EXPECT_EQ(mat_det(R, m), rq.nm(a));
      const Mat2 adj{m.W, R.neg(m.Y), R.neg(m.Z), m.X};
      EXPECT_EQ(psi_apply(psi, R, rq.conj(a)), adj);
    }
    EXPECT_EQ(static_cast<std::int64_t>(seen.size()), rq.count());
  }
}

TEST(Orbits, CountsAndSizes) {
  const auto& z = zeta7();
  for (const auto& [rho, expected] : {std::pair{z.rho7(), 8}, std::pair{z.rho13(), 14}}) {
    const ResidueRing R(rho);
    const ResidueQuaternions rq(*z.H, R);
    const OrbitSet os = enumerate_orbits(*z.H, R, true);
    EXPECT_TRUE(os.exhaustive_checked);
    ASSERT_EQ(static_cast<int>(os.orbits.size()), expected);
    const std::int64_t r = R.size();
    for (const auto& o : os.orbits) {
      EXPECT_EQ(o.size, r * r);
      EXPECT_EQ(o.generators, r * r - 1);
      EXPECT_EQ(o.space.dim(), 2);
    }
    // Independent count: nonzero residues of norm 0 are (r+1)(r^2-1).
    std::int64_t zero_norm = 0;
    std::set<Subspace> spaces;
    for (const auto& a : all_residues(rq)) {
      if (ResidueQuaternions::is_zero(a) || R.index(nm(rq.lift(a))) != 0) continue;
      ++zero_norm;
      spaces.insert(orbit_of(rq, a));
      EXPECT_GE(os.find(R, a), 0);
    }
    EXPECT_EQ(zero_norm, (r + 1) * (r * r - 1));
    EXPECT_EQ(static_cast<int>(spaces.size()), expected);
  }
}

TEST(Orbits, ScanAgreesWithMatrixModel) {
  const auto& z = zeta7();
  const ResidueRing R(z.rho7());
  const OrbitSet a = enumerate_orbits(*z.H0, R);
  const OrbitSet b = scan_orbits(*z.H0, R);
  std::set<Subspace> sa, sb;
  for (const auto& o : a.orbits) sa.insert(o.space);
  for (const auto& o : b.orbits) sb.insert(o.space);
  EXPECT_EQ(sa, sb);
}

TEST(Orbits, RamifiedPrimeTwoHasOneOrbit) {
  const auto& z = zeta7();
  const ResidueRing R(z.integer(2));
  const ResidueQuaternions rq(*z.H, R);
  ASSERT_EQ(rq.count(), 4096);
  const Quaternion g = Quaternion::one(*z.H) + Quaternion::basis(*z.H, 2);
  int even = 0;
  for (const auto& a : all_residues(rq)) {
    const Quaternion L = rq.lift(a);
    const bool is_even = divides(z.integer(2), nm(L));
    const auto D = special_orbit_2(L);
    ASSERT_EQ(D.has_value(), is_even);
    if (D) {
      EXPECT_EQ(*D * g, L);
      ++even;
    }
  }
  // H(1+b) has index Nm(2)^2 = 64 in H.
  EXPECT_EQ(even, 4096 / 64);
  const OrbitSet os = scan_orbits(*z.H, R);
  EXPECT_EQ(os.orbits.size(), 1u);
}

TEST(Residue, HenselLift) {
  const auto& z = zeta7();
  const ResidueRing R(z.rho7());
  Rng rng(22);
  int lifted = 0;
  while (lifted < 50) {
    const Quaternion L = rng.quaternion(*z.H, 6);
    if (!divides(z.rho7(), nm(L)) || divides(z.rho7(), L)) continue;
    const Quaternion P = hensel_lift(R, L);
    EXPECT_TRUE(divides(z.rho7(), P - L));
    EXPECT_TRUE(divides(z.rho7(), nm(P)));
    EXPECT_FALSE(divides(z.rho7() * z.rho7(), nm(P)));
    ++lifted;
  }
}

TEST(Residue, OrbitNormRepresentatives) {
  const auto& z = zeta7();
  const ResidueRing R(z.rho7());
  for (const auto& Hp : {z.H, z.H0}) {
    const ResidueQuaternions rq(*Hp, R);
    const OrbitSet os = enumerate_orbits(*Hp, R);
    const auto reps = orbit_norm_representatives(*Hp, R, os);
    ASSERT_EQ(reps.size(), os.orbits.size());
    // Oracle: classify every element of norm rho_7 by its residue span.
    std::set<Subspace> hit;
    for (const auto& P : norm_solutions(*Hp, z.rho7())) hit.insert(orbit_of(rq, rq.reduce(P)));
    std::size_t present = 0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (!reps[i]) continue;
      ++present;
      EXPECT_EQ(nm(*reps[i]), z.rho7());
      EXPECT_EQ(orbit_of(rq, rq.reduce(*reps[i])), os.orbits[i].space);
    }
    EXPECT_EQ(present, hit.size());
    EXPECT_EQ(present, Hp == z.H ? 8u : 2u);
  }
}

TEST(Residue, QuadraticValueCounts) {
  const auto& z = zeta7();
  for (const auto& rho : {z.rho7(), z.rho13(), z.integer(2)}) {
    const ResidueRing R(rho);
    std::set<int> squares;
    for (int x = 0; x < R.size(); ++x) squares.insert(R.mul(x, x));
    EXPECT_EQ(count_quadratic_values(z.integer(1), z.integer(0), z.integer(0), rho),
              static_cast<int>(squares.size()));
  }
  EXPECT_EQ(count_quadratic_values(z.integer(1), z.integer(0), z.integer(0), z.rho7()), 4);
  EXPECT_EQ(count_quadratic_values(z.integer(1), z.integer(0), z.integer(0), z.integer(2)), 8);
}
