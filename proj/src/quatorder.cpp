#include "quatuniv/quatorder.hpp"

#include <sstream>

namespace quatuniv {

namespace {

FieldElement int_elt(const Field& f, std::int64_t k) { return FieldElement::from_integer(f, k); }

}  // namespace

// ---------------------------------------------------------------------------
// Order

std::shared_ptr<const Order> Order::create(std::shared_ptr<const Field> field, FieldElement A,
                                           FieldElement B, FieldElement mu, FieldElement nu) {
  if (!field) throw std::invalid_argument("order needs a field");
  for (const FieldElement* x : {&A, &B, &mu, &nu}) {
    if (x->field_ptr() != field.get()) throw std::invalid_argument("order parameter from another field");
  }
  OrderParams p{A, B, mu, nu, {}, {}};
  p.S = int_elt(*field, 4) * A - mu * mu;
  p.T = B * p.S - nu * nu;
  if (!is_totally_positive(p.S)) throw std::invalid_argument("S = 4A - mu^2 is not totally positive");
  if (!is_totally_positive(p.T)) throw std::invalid_argument("T = BS - nu^2 is not totally positive");
  return std::shared_ptr<const Order>(new Order(std::move(field), std::move(p)));
}

std::shared_ptr<const Order> Order::create(std::shared_ptr<const Field> field, std::int64_t A,
                                           std::int64_t B, std::int64_t mu, std::int64_t nu) {
  const Field& f = *field;
  return create(std::move(field), int_elt(f, A), int_elt(f, B), int_elt(f, mu), int_elt(f, nu));
}

Order::Order(std::shared_ptr<const Field> field, OrderParams params)
    : field_(std::move(field)), params_(std::move(params)) {
  const Field& f = *field_;
  const FieldElement zero = FieldElement::zero(f);
  const FieldElement one = FieldElement::one(f);
  const FieldElement &A = params_.A, &B = params_.B, &mu = params_.mu, &nu = params_.nu;
  for (auto& row : table_)
    for (auto& cell : row) cell.fill(zero);
  for (int j = 0; j < 4; ++j) {
    table_[0][j][j] = one;
    table_[j][0][j] = one;
  }
  // a a = -A + mu a
  table_[1][1] = {-A, mu, zero, zero};
  // a b = ab
  table_[1][2] = {zero, zero, zero, one};
  // a ab = -A b + mu ab
  table_[1][3] = {zero, zero, -A, mu};
  // b a = -nu + mu b - ab
  table_[2][1] = {-nu, zero, mu, -one};
  // b b = -B
  table_[2][2] = {-B, zero, zero, zero};
  // b ab = -mu B + B a - nu b
  table_[2][3] = {-(mu * B), B, -nu, zero};
  // ab a = -nu a + A b
  table_[3][1] = {zero, -nu, A, zero};
  // ab b = -B a
  table_[3][2] = {zero, -B, zero, zero};
  // ab ab = -AB - nu ab
  table_[3][3] = {-(A * B), zero, zero, -nu};

  sA_ = approximate_embeddings(A);
  sB_ = approximate_embeddings(B);
  smu_ = approximate_embeddings(mu);
  snu_ = approximate_embeddings(nu);
  sS_ = approximate_embeddings(params_.S);
  sT_ = approximate_embeddings(params_.T);
}

// ---------------------------------------------------------------------------
// Quaternion

Quaternion::Quaternion(const Order& order, std::array<FieldElement, 4> c)
    : order_(&order), c_(std::move(c)) {
  for (const auto& x : c_) {
    if (x.field_ptr() != &order.field()) throw std::invalid_argument("quaternion component from another field");
  }
}

Quaternion Quaternion::zero(const Order& order) {
  const auto z = FieldElement::zero(order.field());
  return Quaternion(order, {z, z, z, z});
}

Quaternion Quaternion::one(const Order& order) { return basis(order, 0); }

Quaternion Quaternion::scalar(const Order& order, const FieldElement& x) {
  const auto z = FieldElement::zero(order.field());
  return Quaternion(order, {x, z, z, z});
}

Quaternion Quaternion::basis(const Order& order, int i) {
  if (i < 0 || i > 3) throw std::out_of_range("quaternion basis index");
  Quaternion q = zero(order);
  q.c_[i] = FieldElement::one(order.field());
  return q;
}

const Order& Quaternion::order() const {
  if (order_ == nullptr) throw std::logic_error("detached Quaternion");
  return *order_;
}

bool Quaternion::is_zero() const {
  for (const auto& x : c_)
    if (!x.is_zero()) return false;
  return true;
}

std::string Quaternion::to_string() const {
  std::string s;
  for (int i = 0; i < 4; ++i) {
    if (i) s += ';';
    s += c_[i].to_string();
  }
  return s;
}

Quaternion& Quaternion::operator+=(const Quaternion& o) {
  if (order_ != o.order_) throw std::invalid_argument("mismatched OrderParams");
  for (int i = 0; i < 4; ++i) c_[i] += o.c_[i];
  return *this;
}

Quaternion& Quaternion::operator-=(const Quaternion& o) {
  if (order_ != o.order_) throw std::invalid_argument("mismatched OrderParams");
  for (int i = 0; i < 4; ++i) c_[i] -= o.c_[i];
  return *this;
}

Quaternion& Quaternion::operator*=(const FieldElement& k) {
  for (auto& x : c_) x *= k;
  return *this;
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  if (a.order_ != b.order_ || a.order_ == nullptr) throw std::invalid_argument("mismatched OrderParams");
  const Order& order = *a.order_;
  const FieldElement zero = FieldElement::zero(order.field());
  std::array<FieldElement, 4> out{zero, zero, zero, zero};
  for (int i = 0; i < 4; ++i) {
    if (a.c_[i].is_zero()) continue;
    for (int j = 0; j < 4; ++j) {
      if (b.c_[j].is_zero()) continue;
      const FieldElement ab = a.c_[i] * b.c_[j];
      const auto& cell = order.basis_product(i, j);
      for (int k = 0; k < 4; ++k) {
        if (cell[k].is_zero()) continue;
        out[k] += ab * cell[k];
      }
    }
  }
  return Quaternion(order, std::move(out));
}

Quaternion conj(const Quaternion& L) {
  const OrderParams& p = L.order().params();
  return Quaternion(L.order(), {L[0] + p.mu * L[1] - p.nu * L[3], -L[1], -L[2], -L[3]});
}

FieldElement q_eval(const OrderParams& p, const FieldElement& x, const FieldElement& y,
                    const FieldElement& z, const FieldElement& w) {
  return x * x + p.mu * x * y + p.A * y * y + p.nu * (y * z - x * w) +
         p.B * (z * z + p.mu * z * w + p.A * w * w);
}

FieldElement nm(const Quaternion& L) { return q_eval(L.order().params(), L[0], L[1], L[2], L[3]); }

Rational double_norm(const Quaternion& L) { return Rational(static_cast<long>(norm(nm(L)))); }

std::optional<Quaternion> divide_exact(const Quaternion& L, const FieldElement& d) {
  std::array<FieldElement, 4> out;
  for (int i = 0; i < 4; ++i) {
    auto q = divide_exact(L[i], d);
    if (!q) return std::nullopt;
    out[i] = *q;
  }
  return Quaternion(L.order(), std::move(out));
}

bool divides(const FieldElement& d, const Quaternion& L) { return divide_exact(L, d).has_value(); }

QuaternionFraction reduce(const QuaternionFraction& q, const SearchBudget& budget) {
  if (q.denominator.is_zero()) throw std::domain_error("quaternion fraction with zero denominator");
  QuaternionFraction out = q;
  if (out.numerator.is_zero()) {
    out.denominator = FieldElement::one(q.denominator.field());
    return out;
  }
  const Factorization f = factor(q.denominator, budget);
  for (const auto& [p, e] : f.primes) {
    for (int k = 0; k < e; ++k) {
      auto num = divide_exact(out.numerator, p);
      if (!num) break;
      out.numerator = *num;
      out.denominator = *divide_exact(out.denominator, p);
    }
  }
  if (!is_totally_positive(out.denominator)) {
    const auto units = unit_signatures(out.denominator.field(), budget);
    const auto it = units.by_signature.find(sign_mask(out.denominator));
    if (it != units.by_signature.end()) {
      out.denominator *= it->second;
      out.numerator *= it->second;
    }
  }
  return out;
}

Rational double_norm(const QuaternionFraction& q) {
  const Rational den(static_cast<long>(norm(q.denominator)));
  Rational out = double_norm(q.numerator) / (den * den);
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// Four squares

IntervalMatrix4 to4squares_matrix(const Order& order, int t, int precision_bits) {
  const Field& field = order.field();
  if (t < 0 || t >= field.degree()) throw std::out_of_range("embedding index");
  const OrderParams& p = order.params();
  const int bits = precision_bits + 16;
  auto sigma = [&](const FieldElement& x) { return embeddings(x, bits).enclosures[t]; };
  const Interval mu = sigma(p.mu), nu = sigma(p.nu), S = sigma(p.S), T = sigma(p.T);
  const Interval rS = S.sqrt(bits);
  const Interval rT = T.sqrt(bits);
  const Interval rTS = (T / S).sqrt(bits);
  const Rational half(1, 2);
  const Interval zero(Rational(0));
  IntervalMatrix4 m;
  for (auto& row : m) row.fill(zero);
  m[0][0] = Interval(Rational(1));
  m[0][1] = half * mu;
  m[0][3] = half * -nu;
  m[1][1] = half * rS;
  m[1][2] = nu / rS;
  m[1][3] = half * (mu * nu) / rS;
  m[2][2] = rTS;
  m[2][3] = half * mu * rTS;
  m[3][3] = half * rT;
  return m;
}

Interval determinant(const IntervalMatrix4& m) {
  // Laplace expansion along the first row of 3x3 minors.
  auto det3 = [&](int c0, int c1, int c2) {
    return m[1][c0] * (m[2][c1] * m[3][c2] - m[2][c2] * m[3][c1]) -
           m[1][c1] * (m[2][c0] * m[3][c2] - m[2][c2] * m[3][c0]) +
           m[1][c2] * (m[2][c0] * m[3][c1] - m[2][c1] * m[3][c0]);
  };
  return m[0][0] * det3(1, 2, 3) - m[0][1] * det3(0, 2, 3) + m[0][2] * det3(0, 1, 3) -
         m[0][3] * det3(0, 1, 2);
}

FormEquivalence form_equivalence() {
  // Doubled Gram matrices: v^T G v = 2 Q(v).
  IntMatrix q(4, 4), f(4, 4), s(4, 4);
  const int qg[4][4] = {{2, 1, 0, -1}, {1, 2, 1, 0}, {0, 1, 2, 1}, {-1, 0, 1, 2}};
  const int fg[4][4] = {{2, 1, 1, 1}, {1, 2, 0, 0}, {1, 0, 2, 0}, {1, 0, 0, 2}};
  const int sub[4][4] = {{2, 1, 0, -1}, {-1, 0, 0, 0}, {-1, 0, 1, 1}, {-1, 0, 0, 1}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      q(i, j) = qg[i][j];
      f(i, j) = fg[i][j];
      s(i, j) = sub[i][j];
    }
  }
  FormEquivalence out;
  out.substitution = s;
  out.determinant = bareiss_determinant<Integer>(s);
  const IntMatrix pulled = s.transpose() * f * s;
  out.identity_holds = (pulled == q);
  return out;
}

bool check_form_equivalence() {
  const FormEquivalence e = form_equivalence();
  return e.identity_holds && abs(e.determinant) == 1;
}

// ---------------------------------------------------------------------------
// Representations

namespace {

bool level_box(const EmbeddingVector& center, const EmbeddingVector& radius_sq, double scale,
               const EmbeddingVector& lam, std::vector<std::pair<double, double>>& box) {
  const int n = static_cast<int>(center.size());
  box.resize(n);
  for (int t = 0; t < n; ++t) {
    const double tol = 1e-9 * (1.0 + std::abs(lam[t]));
    double r2 = radius_sq[t];
    if (r2 < -tol) return false;
    r2 = std::max(r2, 0.0);
    const double r = std::sqrt(r2 * scale) * (1.0 + 1e-9) + 1e-7;
    box[t] = {center[t] - r, center[t] + r};
  }
  return true;
}

}  // namespace

void for_each_norm_solution(const Order& order, const FieldElement& lambda,
                            const std::function<bool(const Quaternion&)>& fn, BudgetMeter* meter) {
  const Field& field = order.field();
  if (lambda.is_zero()) {
    fn(Quaternion::zero(order));
    return;
  }
  if (!is_totally_positive(lambda)) throw std::invalid_argument("represent: lambda is not totally positive");
  const int n = field.degree();
  const OrderParams& p = order.params();
  const EmbeddingVector lam = approximate_embeddings(lambda);
  const EmbeddingVector &S = order.approx_S(), &T = order.approx_T(), &mu = order.approx_mu(),
                        &nu = order.approx_nu();

  std::vector<std::pair<double, double>> wbox, zbox, ybox, xbox;
  EmbeddingVector zero = EmbeddingVector::Zero(n);
  EmbeddingVector c(n), r2(n), rem1(n), rem2(n), rem3(n);
  for (int t = 0; t < n; ++t) r2[t] = 4.0 * lam[t] / T[t];
  level_box(zero, r2, 1.0, lam, wbox);
  bool stop = false;

  for_each_in_box(
      field, wbox, BoxMode::kSuperset,
      [&](const Coords& wc, const EmbeddingVector& w) {
        for (int t = 0; t < n; ++t) {
          rem1[t] = lam[t] - T[t] * w[t] * w[t] / 4.0;
          c[t] = -mu[t] * w[t] / 2.0;
          r2[t] = rem1[t] * S[t] / T[t];
        }
        if (!level_box(c, r2, 1.0, lam, zbox)) return true;
        const FieldElement we(field, wc);
        for_each_in_box(
            field, zbox, BoxMode::kSuperset,
            [&](const Coords& zc, const EmbeddingVector& z) {
              for (int t = 0; t < n; ++t) {
                const double d = z[t] + mu[t] * w[t] / 2.0;
                rem2[t] = rem1[t] - T[t] / S[t] * d * d;
                c[t] = -(2.0 * nu[t] * z[t] + mu[t] * nu[t] * w[t]) / S[t];
                r2[t] = 4.0 * rem2[t] / S[t];
              }
              if (!level_box(c, r2, 1.0, lam, ybox)) return true;
              const FieldElement ze(field, zc);
              const EmbeddingVector ycenter = c;
              for_each_in_box(
                  field, ybox, BoxMode::kSuperset,
                  [&](const Coords& yc, const EmbeddingVector& y) {
                    for (int t = 0; t < n; ++t) {
                      const double d = y[t] - ycenter[t];
                      rem3[t] = rem2[t] - S[t] / 4.0 * d * d;
                      c[t] = -(mu[t] * y[t] - nu[t] * w[t]) / 2.0;
                    }
                    if (!level_box(c, rem3, 1.0, lam, xbox)) return true;
                    const FieldElement ye(field, yc);
                    for_each_in_box(
                        field, xbox, BoxMode::kSuperset,
                        [&](const Coords& xc, const EmbeddingVector&) {
                          const FieldElement xe(field, xc);
                          if (q_eval(p, xe, ye, ze, we) == lambda) {
                            if (!fn(Quaternion(order, {xe, ye, ze, we}))) {
                              stop = true;
                              return false;
                            }
                          }
                          return true;
                        },
                        meter);
                    return !stop;
                  },
                  meter);
              return !stop;
            },
            meter);
        return !stop;
      },
      meter);
}

std::vector<Quaternion> norm_solutions(const Order& order, const FieldElement& lambda,
                                       const SearchBudget& budget) {
  BudgetMeter meter(budget);
  std::vector<Quaternion> out;
  for_each_norm_solution(
      order, lambda,
      [&](const Quaternion& L) {
        out.push_back(L);
        return true;
      },
      &meter);
  return out;
}

Quaternion parse_quaternion(const Order& order, const std::string& text) {
  std::array<FieldElement, 4> parts;
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ';')) {
    if (i == 4) throw std::invalid_argument("quaternion literal has more than 4 components: " + text);
    parts[i++] = parse_field_element(order.field(), item);
  }
  if (i != 4) throw std::invalid_argument("quaternion literal needs 4 components: " + text);
  return Quaternion(order, std::move(parts));
}

}  // namespace quatuniv
