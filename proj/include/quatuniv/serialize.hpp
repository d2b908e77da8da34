// JSON codecs for the exact types. Rationals are written as "p/q" strings,
// field elements as "c1,c2,c3" and quaternions as "x;y;z;w".

#pragma once

#include "quatuniv/quatorder.hpp"

#include <json.hpp>

namespace quatuniv {

using Json = nlohmann::ordered_json;

Json to_json(const FieldSpec& spec);
FieldSpec field_spec_from_json(const Json& j);
/// "zeta7" or a path to a JSON field spec.
FieldSpec load_field_spec(const std::string& name_or_path);

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);
Json to_json(const Interval& x);
Json to_json(const FieldElement& x);
Json to_json(const Quaternion& L);
Json to_json(const OrderParams& p);
Json to_json(const Factorization& f);
Json to_json(const UnitSignatures& u);

FieldElement element_from_json(const Field& field, const Json& j);
Quaternion quaternion_from_json(const Order& order, const Json& j);
Factorization factorization_from_json(const Field& field, const Json& j);

/// "A,B,mu,nu" with integer entries, or four field-element literals separated by '|'.
std::array<FieldElement, 4> parse_order_params(const Field& field, const std::string& text);

}  // namespace quatuniv
