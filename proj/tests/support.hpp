// Shared fixtures: the zeta7 field, the two orders and a seeded generator.

#pragma once

#include "quatuniv/pipeline.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace quatuniv::testing {

struct Zeta7 {
  std::shared_ptr<const Field> field = Field::create(FieldSpec::zeta7());
  std::shared_ptr<const Order> H = Order::create(field, 1, 1, 1, 1);
  std::shared_ptr<const Order> H0 = Order::create(field, 1, 1, 1, 0);

  const Field& K() const { return *field; }
  FieldElement integer(std::int64_t k) const { return FieldElement::from_integer(*field, k); }
  FieldElement phi(int m) const {
    Coords c = Coords::Zero(3);
    c[m - 1] = 1;
    return FieldElement(*field, c);
  }
  FieldElement rho7() const { return integer(2) - phi(1); }
  FieldElement rho13() const { return integer(3) + phi(1); }
};

inline const Zeta7& zeta7() {
  static const Zeta7 z;
  return z;
}

/// sigma_t(phi_m) = 2 cos(2 pi m k_t / 7), embeddings in ascending order of phi_1.
inline double phi_embedding(int m, int t) {
  static const int k[3] = {3, 2, 1};
  return 2.0 * std::cos(2.0 * std::numbers::pi * m * k[t] / 7.0);
}

inline double oracle_embedding(const FieldElement& x, int t) {
  double s = 0;
  for (int m = 1; m <= 3; ++m) s += static_cast<double>(x[m - 1]) * phi_embedding(m, t);
  return s;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 20240917) : gen_(seed) {}
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
  }
  FieldElement element(const Field& K, std::int64_t radius) {
    Coords c(K.degree());
    for (int i = 0; i < K.degree(); ++i) c[i] = uniform(-radius, radius);
    return FieldElement(K, c);
  }
  Quaternion quaternion(const Order& H, std::int64_t radius) {
    return Quaternion(H, {element(H.field(), radius), element(H.field(), radius), element(H.field(), radius),
                          element(H.field(), radius)});
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace quatuniv::testing
