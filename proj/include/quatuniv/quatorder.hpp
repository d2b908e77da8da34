// The order H = O_K + O_K a + O_K b + O_K ab attached to (A, B, mu, nu).
//
// a = (mu + i sqrt S)/2 and b = (nu i + j sqrt T)/sqrt S inside the Hamilton
// quaternions, with S = 4A - mu^2 and T = BS - nu^2. Everything here is
// stored over the basis (1, a, b, ab) so no radicals are ever needed.

#pragma once

#include "quatuniv/numfield.hpp"

#include <array>
#include <functional>

namespace quatuniv {

struct OrderParams {
  FieldElement A, B, mu, nu;
  FieldElement S, T;  // derived
};

class Order {
 public:
  /// Throws std::invalid_argument unless S and T are totally positive.
  static std::shared_ptr<const Order> create(std::shared_ptr<const Field> field, FieldElement A,
                                             FieldElement B, FieldElement mu, FieldElement nu);
  /// Shorthand for rational-integer parameters.
  static std::shared_ptr<const Order> create(std::shared_ptr<const Field> field, std::int64_t A,
                                             std::int64_t B, std::int64_t mu, std::int64_t nu);

  Order(const Order&) = delete;
  Order& operator=(const Order&) = delete;

  const Field& field() const noexcept { return *field_; }
  const std::shared_ptr<const Field>& field_ptr() const noexcept { return field_; }
  const OrderParams& params() const noexcept { return params_; }

  /// e_i * e_j over (1, a, b, ab).
  const std::array<FieldElement, 4>& basis_product(int i, int j) const { return table_[i][j]; }

  /// Approximate sigma_t of A, B, mu, nu, S, T (for search bounds only).
  const EmbeddingVector& approx_A() const noexcept { return sA_; }
  const EmbeddingVector& approx_B() const noexcept { return sB_; }
  const EmbeddingVector& approx_mu() const noexcept { return smu_; }
  const EmbeddingVector& approx_nu() const noexcept { return snu_; }
  const EmbeddingVector& approx_S() const noexcept { return sS_; }
  const EmbeddingVector& approx_T() const noexcept { return sT_; }

 private:
  Order(std::shared_ptr<const Field> field, OrderParams params);

  std::shared_ptr<const Field> field_;
  OrderParams params_;
  std::array<std::array<std::array<FieldElement, 4>, 4>, 4> table_;
  EmbeddingVector sA_, sB_, smu_, snu_, sS_, sT_;
};

class Quaternion {
 public:
  Quaternion() = default;
  Quaternion(const Order& order, std::array<FieldElement, 4> c);

  static Quaternion zero(const Order& order);
  static Quaternion one(const Order& order);
  static Quaternion scalar(const Order& order, const FieldElement& x);
  /// e_0 = 1, e_1 = a, e_2 = b, e_3 = ab.
  static Quaternion basis(const Order& order, int i);

  const Order& order() const;
  const Order* order_ptr() const noexcept { return order_; }
  const FieldElement& operator[](int i) const { return c_[i]; }
  const std::array<FieldElement, 4>& components() const noexcept { return c_; }
  bool is_zero() const;
  std::string to_string() const;  // "x;y;z;w"

  Quaternion& operator+=(const Quaternion& o);
  Quaternion& operator-=(const Quaternion& o);
  Quaternion& operator*=(const FieldElement& k);  // K is central

  friend Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
  friend Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
  friend Quaternion operator*(Quaternion a, const FieldElement& k) { return a *= k; }
  friend Quaternion operator*(const FieldElement& k, Quaternion a) { return a *= k; }
  friend Quaternion operator-(Quaternion a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b);
  friend bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.order_ == b.order_ && a.c_ == b.c_;
  }

 private:
  const Order* order_ = nullptr;
  std::array<FieldElement, 4> c_;
};

Quaternion conj(const Quaternion& L);
/// Scalar part of L * conj(L).
FieldElement nm(const Quaternion& L);
FieldElement q_eval(const OrderParams& p, const FieldElement& x, const FieldElement& y,
                    const FieldElement& z, const FieldElement& w);
Rational double_norm(const Quaternion& L);

/// L / d when d divides every component.
std::optional<Quaternion> divide_exact(const Quaternion& L, const FieldElement& d);
bool divides(const FieldElement& d, const Quaternion& L);

struct QuaternionFraction {
  Quaternion numerator;
  FieldElement denominator;  // nonzero
};

/// Cancels every prime common to the denominator and all numerator
/// components, then prefers a totally positive denominator.
QuaternionFraction reduce(const QuaternionFraction& q, const SearchBudget& budget = {});
Rational double_norm(const QuaternionFraction& q);

using IntervalMatrix4 = std::array<std::array<Interval, 4>, 4>;

/// Upper-triangular M_t with sigma_t(Q)(v) = |M_t v|^2 and det M_t = sigma_t(T)/4.
IntervalMatrix4 to4squares_matrix(const Order& order, int t, int precision_bits);
Interval determinant(const IntervalMatrix4& m);

struct FormEquivalence {
  IntMatrix substitution;  // rows give X, Y, Z, W in terms of x, y, z, w
  Integer determinant;
  bool identity_holds = false;  // Gram matrices agree exactly
};

/// Carries x^2+xy+y^2+yz-xw+z^2+zw+w^2 to X^2+Y^2+Z^2+W^2+XY+XZ+XW.
FormEquivalence form_equivalence();
bool check_form_equivalence();

/// Visits every L in H with nm(L) = lambda (lambda totally positive or 0);
/// fn returns false to stop. Throws std::invalid_argument otherwise.
void for_each_norm_solution(const Order& order, const FieldElement& lambda,
                            const std::function<bool(const Quaternion&)>& fn,
                            BudgetMeter* meter = nullptr);
std::vector<Quaternion> norm_solutions(const Order& order, const FieldElement& lambda,
                                       const SearchBudget& budget = {});

/// "x;y;z;w", each component a field element literal.
Quaternion parse_quaternion(const Order& order, const std::string& text);

}  // namespace quatuniv
