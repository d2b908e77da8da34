#include "quatuniv/serialize.hpp"

#include <fstream>
#include <sstream>

namespace quatuniv {

Json to_json(const FieldSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["min_poly"] = spec.min_poly;
  j["integral_basis"] = spec.integral_basis;
  j["discriminant"] = spec.discriminant;
  if (spec.norm_filter) {
    j["norm_filter"] = {{"modulus", spec.norm_filter->modulus}, {"residues", spec.norm_filter->residues}};
  }
  return j;
}

FieldSpec field_spec_from_json(const Json& j) {
  FieldSpec s;
  s.name = j.value("name", std::string("custom"));
  s.min_poly = j.at("min_poly").get<std::vector<std::int64_t>>();
  s.integral_basis = j.at("integral_basis").get<std::vector<std::vector<std::int64_t>>>();
  s.discriminant = j.at("discriminant").get<std::int64_t>();
  if (j.contains("norm_filter")) {
    const auto& f = j.at("norm_filter");
    s.norm_filter = NormResidueFilter{f.at("modulus").get<std::int64_t>(),
                                      f.at("residues").get<std::vector<std::int64_t>>()};
  }
  return s;
}

FieldSpec load_field_spec(const std::string& name_or_path) {
  if (name_or_path == "zeta7") return FieldSpec::zeta7();
  std::ifstream in(name_or_path);
  if (!in) throw std::runtime_error("cannot open field spec " + name_or_path);
  return field_spec_from_json(Json::parse(in));
}

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  return parse_rational(j.get<std::string>());
}

Json to_json(const Interval& x) {
  return {{"lo", to_string(x.lo())}, {"hi", to_string(x.hi())},
          {"lo_approx", x.lower_double()}, {"hi_approx", x.upper_double()}};
}

Json to_json(const FieldElement& x) { return x.to_string(); }
Json to_json(const Quaternion& L) { return L.to_string(); }

Json to_json(const OrderParams& p) {
  return {{"A", p.A.to_string()}, {"B", p.B.to_string()}, {"mu", p.mu.to_string()}, {"nu", p.nu.to_string()},
          {"S", p.S.to_string()}, {"T", p.T.to_string()}};
}

Json to_json(const Factorization& f) {
  Json primes = Json::array();
  for (const auto& [pi, e] : f.primes) primes.push_back({{"prime", pi.to_string()}, {"exponent", e}});
  return {{"unit", f.unit.to_string()}, {"primes", primes}};
}

Json to_json(const UnitSignatures& u) {
  Json sig = Json::array();
  for (const auto& [mask, unit] : u.by_signature) sig.push_back({{"mask", mask}, {"unit", unit.to_string()}});
  return {{"complete", u.complete}, {"signatures", sig}};
}

FieldElement element_from_json(const Field& field, const Json& j) {
  if (j.is_number_integer()) return FieldElement::from_integer(field, j.get<std::int64_t>());
  return parse_field_element(field, j.get<std::string>());
}

Quaternion quaternion_from_json(const Order& order, const Json& j) {
  return parse_quaternion(order, j.get<std::string>());
}

Factorization factorization_from_json(const Field& field, const Json& j) {
  Factorization f;
  f.unit = element_from_json(field, j.at("unit"));
  for (const auto& p : j.at("primes")) {
    f.primes.emplace_back(element_from_json(field, p.at("prime")), p.at("exponent").get<int>());
  }
  return f;
}

std::array<FieldElement, 4> parse_order_params(const Field& field, const std::string& text) {
  const char sep = text.find('|') != std::string::npos ? '|' : ',';
  std::array<FieldElement, 4> out;
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, sep)) {
    if (i == 4) throw std::invalid_argument("order needs exactly four parameters: " + text);
    out[i++] = parse_field_element(field, item);
  }
  if (i != 4) throw std::invalid_argument("order needs exactly four parameters: " + text);
  return out;
}

}  // namespace quatuniv
