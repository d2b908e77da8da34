#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace quatuniv;
using namespace quatuniv::testing;

namespace {

// Oracle norm: product of the cosine embeddings.
std::int64_t oracle_norm(const FieldElement& x) {
  double p = 1;
  for (int t = 0; t < 3; ++t) p *= oracle_embedding(x, t);
  return std::llround(p);
}

}  // namespace

TEST(Field, RejectsBadSpecs) {
  FieldSpec s = FieldSpec::zeta7();
  s.min_poly = {1, 0, 1};  // x^2 + 1
  s.integral_basis = {{1, 0}, {0, 1}};
  s.discriminant = -4;
  EXPECT_THROW(Field::create(s), std::invalid_argument);

  FieldSpec t = FieldSpec::zeta7();
  t.discriminant = 7;
  EXPECT_THROW(Field::create(t), std::invalid_argument);

  FieldSpec u = FieldSpec::zeta7();
  u.min_poly = {-1, -2, 1, 2};
  EXPECT_THROW(Field::create(u), std::invalid_argument);

  FieldSpec q;
  q.min_poly = {-2, 0, 1};  // x^2 - 2
  q.integral_basis = {{1, 0}, {0, 1}};
  q.discriminant = 8;
  const auto f = Field::create(q);
  EXPECT_EQ(f->degree(), 2);
  EXPECT_EQ(norm(FieldElement::from_coords(*f, {1, 1})), -1);
}

TEST(Field, EmbeddingsMatchCosineExpansion) {
  const auto& z = zeta7();
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const FieldElement a = rng.element(z.K(), 6);
    const FieldElement b = rng.element(z.K(), 6);
    const EmbeddingVector ea = approximate_embeddings(a);
    const EmbeddingVector eab = approximate_embeddings(a * b);
    for (int t = 0; t < 3; ++t) {
      EXPECT_NEAR(ea[t], oracle_embedding(a, t), 1e-9);
      EXPECT_NEAR(eab[t], oracle_embedding(a, t) * oracle_embedding(b, t), 1e-7);
    }
  }
}

TEST(Field, CertifiedEnclosuresContainOracle) {
  const auto& z = zeta7();
  const EmbeddingBox box = embeddings(z.rho7(), 64);
  ASSERT_EQ(box.enclosures.size(), 3u);
  for (int t = 0; t < 3; ++t) {
    const Interval& e = box.enclosures[t];
    EXPECT_LE(e.width(), Rational(1, 1) / (Rational(Integer(1) << 64)));
    EXPECT_LE(e.lower_double(), oracle_embedding(z.rho7(), t) + 1e-12);
    EXPECT_GE(e.upper_double(), oracle_embedding(z.rho7(), t) - 1e-12);
  }
}

TEST(Field, NormAndTraceAgreeWithOracle) {
  const auto& z = zeta7();
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const FieldElement a = rng.element(z.K(), 9);
    EXPECT_EQ(norm(a), oracle_norm(a));
    double tr = 0;
    for (int t = 0; t < 3; ++t) tr += oracle_embedding(a, t);
    EXPECT_EQ(trace(a), std::llround(tr));
  }
  EXPECT_EQ(norm(z.rho7()), 7);
  EXPECT_EQ(norm(z.rho13()), 13);
  EXPECT_EQ(norm(z.integer(2)), 8);
  EXPECT_EQ(norm(z.integer(3)), 27);
  EXPECT_EQ(trace(z.integer(1)), 3);
}

TEST(Field, NormIsMultiplicative) {
  const auto& z = zeta7();
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const FieldElement a = rng.element(z.K(), 8), b = rng.element(z.K(), 8);
    EXPECT_EQ(norm(a * b), norm(a) * norm(b));
  }
}

TEST(Field, NormResiduesModSeven) {
  const auto& z = zeta7();
  const auto& filter = *z.K().spec().norm_filter;
  std::set<std::int64_t> seen;
  for (int a = -8; a <= 8; ++a)
    for (int b = -8; b <= 8; ++b)
      for (int c = -8; c <= 8; ++c) {
        const FieldElement x = FieldElement::from_coords(z.K(), {a, b, c});
        const std::int64_t r = ((oracle_norm(x) % 7) + 7) % 7;
        seen.insert(r);
        EXPECT_TRUE(filter.admits(norm(x)));
      }
  EXPECT_EQ(seen, (std::set<std::int64_t>{0, 1, 6}));
}

TEST(Field, SignsAndPositivity) {
  const auto& z = zeta7();
  EXPECT_TRUE(is_totally_positive(z.rho7()));
  EXPECT_TRUE(is_totally_positive(z.rho13()));
  EXPECT_FALSE(is_totally_positive(z.phi(1)));
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const FieldElement a = rng.element(z.K(), 5);
    if (a.is_zero()) continue;
    std::uint32_t mask = 0;
    for (int t = 0; t < 3; ++t)
      if (oracle_embedding(a, t) < 0) mask |= 1u << t;
    EXPECT_EQ(sign_mask(a), mask);
  }
  EXPECT_EQ(compare_embedding(z.integer(2), 0, Rational(2)), 0);
  EXPECT_THROW(sign_mask(z.integer(0)), std::domain_error);
}

TEST(Field, UnitsOfEverySignature) {
  const auto& z = zeta7();
  const UnitSignatures u = unit_signatures(z.K());
  EXPECT_TRUE(u.complete);
  ASSERT_EQ(u.by_signature.size(), 8u);
  for (const auto& [mask, unit] : u.by_signature) {
    EXPECT_TRUE(is_unit(unit));
    EXPECT_EQ(std::llabs(oracle_norm(unit)), 1);
    EXPECT_EQ(sign_mask(unit), mask);
  }
}

TEST(Field, DivisionAndAssociates) {
  const auto& z = zeta7();
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const FieldElement a = rng.element(z.K(), 6), b = rng.element(z.K(), 6);
    if (b.is_zero()) continue;
    const auto q = divide_exact(a * b, b);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, a);
  }
  EXPECT_FALSE(divide_exact(z.integer(1), z.rho7()).has_value());
  EXPECT_THROW(divide_exact(z.integer(1), z.integer(0)), std::domain_error);
  // The conjugates 2 - phi_2 and 2 - phi_3 are associates of rho_7.
  EXPECT_TRUE(are_associates(z.rho7(), z.integer(2) - z.phi(2)));
  EXPECT_TRUE(are_associates(z.rho7(), z.integer(2) - z.phi(3)));
  EXPECT_FALSE(are_associates(z.rho7(), z.rho13()));
}

TEST(Field, PrimalityAndResidueRings) {
  const auto& z = zeta7();
  EXPECT_TRUE(is_prime_element(z.rho7()));
  EXPECT_TRUE(is_prime_element(z.rho13()));
  EXPECT_TRUE(is_prime_element(z.integer(2)));
  EXPECT_TRUE(is_prime_element(z.integer(3)));
  EXPECT_FALSE(is_prime_element(z.integer(7)));
  EXPECT_FALSE(is_prime_element(z.integer(13)));
  EXPECT_FALSE(is_prime_element(z.integer(1)));
  const ModulusReducer r(z.rho13());
  EXPECT_EQ(r.size(), 13);
  std::set<std::int64_t> idx;
  for (std::int64_t k = 0; k < 40; ++k) idx.insert(r.index(z.integer(k)));
  EXPECT_EQ(idx.size(), 13u);
  EXPECT_TRUE(r.is_zero_mod(z.rho13() * z.phi(2)));
}

TEST(Field, FactorizationOfSmallPrimes) {
  const auto& z = zeta7();
  const Factorization f7 = factor(z.integer(7));
  ASSERT_EQ(f7.primes.size(), 1u);
  EXPECT_EQ(f7.primes[0].second, 3);
  EXPECT_TRUE(are_associates(f7.primes[0].first, z.rho7()));
  EXPECT_EQ(f7.expand(), z.integer(7));
  for (std::int64_t p : {2, 3, 5, 11}) {
    const Factorization f = factor(z.integer(p));
    ASSERT_EQ(f.primes.size(), 1u) << p;
    EXPECT_EQ(f.primes[0].second, 1);
  }
  for (std::int64_t p : {13, 29, 41, 43}) {
    const Factorization f = factor(z.integer(p));
    ASSERT_EQ(f.primes.size(), 3u) << p;
    for (const auto& [pi, e] : f.primes) EXPECT_EQ(std::llabs(norm(pi)), p);
    EXPECT_EQ(f.expand(), z.integer(p));
  }
}

TEST(Field, FactorizationRoundTrip) {
  const auto& z = zeta7();
  Rng rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const FieldElement a = rng.element(z.K(), 5);
    if (a.is_zero()) continue;
    const Factorization f = factor(a);
    EXPECT_EQ(f.expand(), a);
    EXPECT_TRUE(is_unit(f.unit));
    for (const auto& [pi, e] : f.primes) EXPECT_TRUE(is_prime_element(pi));
  }
}

TEST(Field, ChineseRemainder) {
  const auto& z = zeta7();
  const std::vector<std::pair<FieldElement, FieldElement>> c = {{z.phi(2), z.rho7()}, {z.integer(5), z.rho13()},
                                                                {z.phi(1), z.integer(2)}};
  const FieldElement x = crt_lift(c);
  for (const auto& [target, mod] : c) EXPECT_TRUE(divides(mod, x - target));
  const std::vector<std::pair<FieldElement, FieldElement>> bad = {{z.integer(1), z.rho7()},
                                                                  {z.integer(2), z.integer(7)}};
  EXPECT_THROW(crt_lift(bad), std::invalid_argument);
}

TEST(Field, LiteralsRoundTrip) {
  const auto& z = zeta7();
  const FieldElement x = parse_field_element(z.K(), "3,-1,4");
  EXPECT_EQ(parse_field_element(z.K(), x.to_string()), x);
  EXPECT_EQ(parse_field_element(z.K(), "5"), z.integer(5));
  EXPECT_THROW(parse_field_element(z.K(), "1,2"), std::invalid_argument);
  EXPECT_THROW(parse_field_element(z.K(), "a,b,c"), std::invalid_argument);
}
