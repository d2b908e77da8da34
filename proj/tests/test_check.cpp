#include "support.hpp"

#include "quatuniv/check.hpp"
#include "quatuniv/report.hpp"

#include <gtest/gtest.h>

using namespace quatuniv;
using namespace quatuniv::testing;

TEST(Serialize, FieldSpecRoundTrip) {
  const FieldSpec spec = FieldSpec::zeta7();
  const Json j = to_json(spec);
  const FieldSpec back = field_spec_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.min_poly, spec.min_poly);
  EXPECT_EQ(back.integral_basis, spec.integral_basis);
  EXPECT_EQ(back.discriminant, 49);
  ASSERT_TRUE(back.norm_filter.has_value());
  EXPECT_EQ(back.norm_filter->residues, spec.norm_filter->residues);
  EXPECT_NO_THROW(Field::create(back));
  EXPECT_EQ(load_field_spec("zeta7").discriminant, 49);
  EXPECT_THROW(load_field_spec("/nonexistent/field.json"), std::runtime_error);
}

TEST(Serialize, ShippedFieldFileMatchesBuiltin) {
  const FieldSpec file = load_field_spec(std::string(QUATUNIV_DATA_DIR) + "/zeta7.json");
  const FieldSpec builtin = FieldSpec::zeta7();
  EXPECT_EQ(file.min_poly, builtin.min_poly);
  EXPECT_EQ(file.integral_basis, builtin.integral_basis);
  EXPECT_EQ(file.discriminant, builtin.discriminant);
  EXPECT_EQ(file.norm_filter->residues, builtin.norm_filter->residues);
}

TEST(Serialize, ScalarsAndFactorizations) {
  const auto& z = zeta7();
  const Rational q(-22, 7);
  EXPECT_EQ(rational_from_json(to_json(q)), q);
  EXPECT_EQ(rational_from_json(Json(5)), 5);
  EXPECT_EQ(element_from_json(z.K(), to_json(z.rho13())), z.rho13());
  EXPECT_EQ(element_from_json(z.K(), Json(3)), z.integer(3));
  const Quaternion L = Quaternion::basis(*z.H, 3) * z.rho7() + Quaternion::one(*z.H);
  EXPECT_EQ(quaternion_from_json(*z.H, to_json(L)), L);
  const Factorization f = factor(z.integer(91));
  const Factorization g = factorization_from_json(z.K(), to_json(f));
  EXPECT_EQ(g.expand(), f.expand());
  EXPECT_EQ(g.primes.size(), f.primes.size());
  const auto p = parse_order_params(z.K(), "1,1,1,0");
  EXPECT_EQ(p[3], z.integer(0));
  const auto p2 = parse_order_params(z.K(), "1|1|1|" + z.rho7().to_string());
  EXPECT_EQ(p2[3], z.rho7());
  EXPECT_THROW(parse_order_params(z.K(), "1,1,1"), std::invalid_argument);
  EXPECT_THROW(parse_order_params(z.K(), "1,1,1,1,1"), std::invalid_argument);
}

class CheckerTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto& z = zeta7();
    suitability_ = new Json(suitability_document(*z.H, certify_suitable(*z.H, z.rho13())));
    universality_ = new Json(universality_document(*z.H, verify_universality(*z.H)));
  }
  static void TearDownTestSuite() {
    delete suitability_;
    delete universality_;
  }
  static Json* suitability_;
  static Json* universality_;
};

Json* CheckerTest::suitability_ = nullptr;
Json* CheckerTest::universality_ = nullptr;

TEST_F(CheckerTest, AcceptsGenuineCertificates) {
  const CheckReport s = check_certificate(*suitability_);
  EXPECT_TRUE(s.ok()) << (s.errors.empty() ? "" : s.errors.front());
  EXPECT_EQ(s.kind, "suitability");
  const CheckReport u = check_certificate(*universality_);
  EXPECT_TRUE(u.ok()) << (u.errors.empty() ? "" : u.errors.front());
  EXPECT_EQ(u.kind, "universality");
  Json pid = *universality_;
  pid["kind"] = "pid";
  pid["verdict"] = "principal ideal domain";
  EXPECT_TRUE(check_certificate(pid).ok());
}

TEST_F(CheckerTest, RejectsRemovedWitness) {
  Json doc = *suitability_;
  doc["certificate"]["witnesses"].erase(doc["certificate"]["witnesses"].size() - 1);
  EXPECT_FALSE(check_certificate(doc).ok());
}

TEST_F(CheckerTest, RejectsAlteredNumerator) {
  const auto& z = zeta7();
  Json doc = *suitability_;
  auto& w = doc["certificate"]["witnesses"][0];
  const Quaternion P = quaternion_from_json(*z.H, w["numerator"]) + Quaternion::scalar(*z.H, z.rho13());
  w["numerator"] = P.to_string();
  EXPECT_FALSE(check_certificate(doc).ok());
}

TEST_F(CheckerTest, RejectsDroppedSplitting) {
  Json doc = *universality_;
  doc["splittings"].erase(static_cast<std::size_t>(0));
  EXPECT_FALSE(check_certificate(doc).ok());
}

TEST_F(CheckerTest, RejectsDroppedObligation) {
  Json doc = *universality_;
  doc["obligations"].erase(doc["obligations"].size() - 1);
  EXPECT_FALSE(check_certificate(doc).ok());
}

TEST_F(CheckerTest, RejectsBadUnitMask) {
  Json doc = *universality_;
  auto& s = doc["units"]["signatures"];
  const auto m0 = s[0]["mask"].get<std::uint32_t>();
  s[0]["mask"] = s[1]["mask"];
  s[1]["mask"] = m0;
  EXPECT_FALSE(check_certificate(doc).ok());
}

TEST_F(CheckerTest, RejectsWrongBoundAndT) {
  Json doc = *universality_;
  doc["bound"]["hi"] = "20";
  EXPECT_FALSE(check_certificate(doc).ok());
  Json doc2 = *universality_;
  doc2["order"]["T"] = "3,0,0";
  EXPECT_FALSE(check_certificate(doc2).ok());
}

TEST(Checker, MalformedDocument) {
  EXPECT_FALSE(check_certificate(Json::parse(R"({"kind": "pid"})")).ok());
  EXPECT_FALSE(check_certificate(Json::parse(R"({"kind": "other"})")).ok());
}
