#include "quatuniv/numfield.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

namespace quatuniv {

namespace {

constexpr int kBaseRootBits = 96;

using RatPoly = std::vector<Rational>;  // ascending coefficients
using Int64Matrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Rational eval(const RatPoly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int sign_of(const Rational& q) { return sgn(q); }

RatPoly derivative(const RatPoly& p) {
  RatPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

RatPoly remainder(RatPoly a, const RatPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= f * b[k];
    trim(a);
  }
  return a;
}

std::size_t gcd_degree(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    RatPoly r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? 0 : a.size() - 1;
}

std::vector<RatPoly> sturm_sequence(const RatPoly& f) {
  std::vector<RatPoly> seq{f, derivative(f)};
  while (seq.back().size() > 1) {
    RatPoly r = remainder(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(std::move(r));
  }
  return seq;
}

int sign_changes(const std::vector<RatPoly>& seq, const Rational& x) {
  int changes = 0;
  int prev = 0;
  for (const auto& p : seq) {
    const int s = sign_of(eval(p, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

// Roots in (a, b] for squarefree f.
int count_roots(const std::vector<RatPoly>& seq, const Rational& a, const Rational& b) {
  return sign_changes(seq, a) - sign_changes(seq, b);
}

Interval horner(const std::vector<std::int64_t>& coeffs, const Interval& x) {
  Interval acc(Rational(0));
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * x + Interval(Rational(static_cast<long>(*it)));
  }
  return acc;
}

Interval horner_wide(const std::vector<Integer>& coeffs, const Interval& x) {
  Interval acc(Rational(0));
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + Interval(Rational(*it));
  return acc;
}

Rational pow2(int e) {
  Integer one = 1;
  if (e >= 0) {
    mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), static_cast<unsigned>(e));
    return Rational(one);
  }
  mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), static_cast<unsigned>(-e));
  Rational q(1, one);
  q.canonicalize();
  return q;
}

// Hadamard-style bound decides whether int128 Bareiss is safe.
bool int128_safe(const Int64Matrix& m) {
  double log_bound = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double row = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = static_cast<double>(m(i, j));
      row += v * v;
    }
    log_bound += 0.5 * std::log2(std::max(row, 1.0));
  }
  return log_bound < 60.0;
}

Integer determinant(const Int64Matrix& m) {
  const Eigen::Index n = m.rows();
  if (int128_safe(m)) {
    __int128 w[kMaxDegree][kMaxDegree];
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) w[i][j] = m(i, j);
    __int128 sign = 1, prev = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      if (w[k][k] == 0) {
        Eigen::Index s = k + 1;
        while (s < n && w[s][k] == 0) ++s;
        if (s == n) return Integer(0);
        for (Eigen::Index j = 0; j < n; ++j) std::swap(w[k][j], w[s][j]);
        sign = -sign;
      }
      for (Eigen::Index i = k + 1; i < n; ++i) {
        for (Eigen::Index j = k + 1; j < n; ++j) {
          w[i][j] = (w[i][j] * w[k][k] - w[i][k] * w[k][j]) / prev;
        }
      }
      prev = w[k][k];
    }
    const __int128 d = sign * w[n - 1][n - 1];
    const auto hi = static_cast<std::int64_t>(d >> 64);
    const auto lo = static_cast<std::uint64_t>(d);
    Integer out = to_integer(hi);
    mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), 64);
    Integer low;
    mpz_import(low.get_mpz_t(), 1, -1, sizeof(lo), 0, 0, &lo);
    return out + low;
  }
  IntMatrix big(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) big(i, j) = to_integer(m(i, j));
  return bareiss_determinant<Integer>(big);
}

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("O_K coordinate overflow");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

// ---------------------------------------------------------------------------
// FieldSpec

bool NormResidueFilter::admits(std::int64_t norm) const {
  const std::int64_t r = ((norm % modulus) + modulus) % modulus;
  return std::find(residues.begin(), residues.end(), r) != residues.end();
}

FieldSpec FieldSpec::zeta7() {
  FieldSpec s;
  s.name = "zeta7";
  s.min_poly = {-1, -2, 1, 1};
  s.integral_basis = {{0, 1, 0}, {-2, 0, 1}, {1, -1, -1}};
  s.discriminant = 49;
  s.norm_filter = NormResidueFilter{7, {0, 1, 6}};
  return s;
}

// ---------------------------------------------------------------------------
// Field

std::shared_ptr<const Field> Field::create(FieldSpec spec) {
  return std::shared_ptr<const Field>(new Field(std::move(spec)));
}

Field::Field(FieldSpec spec) : spec_(std::move(spec)) {
  if (spec_.min_poly.size() < 2) throw std::invalid_argument("min_poly must have degree >= 1");
  n_ = static_cast<int>(spec_.min_poly.size()) - 1;
  if (n_ > kMaxDegree) throw std::invalid_argument("degree exceeds kMaxDegree");
  if (spec_.min_poly.back() != 1) throw std::invalid_argument("min_poly must be monic");
  if (static_cast<int>(spec_.integral_basis.size()) != n_) {
    throw std::invalid_argument("integral_basis must have degree rows");
  }
  for (auto& row : spec_.integral_basis) {
    if (static_cast<int>(row.size()) > n_) throw std::invalid_argument("basis row too long");
    row.resize(n_, 0);
  }

  RatPoly f;
  for (auto c : spec_.min_poly) f.emplace_back(static_cast<long>(c));
  if (gcd_degree(f, derivative(f)) != 0) throw std::invalid_argument("min_poly is not squarefree");

  // Real root isolation by Sturm sequences.
  const auto seq = sturm_sequence(f);
  long cauchy = 1;
  for (auto c : spec_.min_poly) cauchy = std::max(cauchy, 1 + std::labs(static_cast<long>(c)));
  const Rational bound(cauchy);
  if (count_roots(seq, -bound, bound) != n_) throw std::invalid_argument("min_poly is not totally real");

  std::vector<std::pair<Rational, Rational>> pending{{-bound, bound}};
  std::vector<std::pair<Rational, Rational>> isolated;
  while (!pending.empty()) {
    auto [a, b] = pending.back();
    pending.pop_back();
    const int k = count_roots(seq, a, b);
    if (k == 0) continue;
    if (k == 1 && eval(f, b) != 0) {
      isolated.emplace_back(a, b);
      continue;
    }
    Rational mid = (a + b) / 2;
    while (eval(f, mid) == 0) mid = (mid + b) / 2;  // only for rational roots
    pending.emplace_back(a, mid);
    pending.emplace_back(mid, b);
  }
  std::sort(isolated.begin(), isolated.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  if (n_ == 1) {
    const Rational root(static_cast<long>(-spec_.min_poly[0]));
    roots_.emplace_back(root);
    sign_at_lo_.push_back(0);
  } else {
    const Rational target = pow2(-kBaseRootBits);
    for (auto [a, b] : isolated) {
      if (eval(f, a) == 0) throw std::invalid_argument("min_poly has a rational root");
      const int sa = sign_of(eval(f, a));
      while (b - a > target) {
        const Rational mid = (a + b) / 2;
        const int sm = sign_of(eval(f, mid));
        if (sm == 0) throw std::invalid_argument("min_poly has a rational root");
        if (sm == sa) a = mid; else b = mid;
      }
      roots_.emplace_back(a, b);
      sign_at_lo_.push_back(sa);
    }
  }

  // Basis change: coordinates c of a polynomial p satisfy B^T c = p.
  RatMatrix basis_t(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) basis_t(k, i) = Rational(static_cast<long>(spec_.integral_basis[i][k]));
  auto to_coords = [&](const RatPoly& p) {
    RatVector rhs = RatVector::Zero(n_);
    for (std::size_t k = 0; k < p.size(); ++k) rhs(static_cast<Eigen::Index>(k)) = p[k];
    auto sol = solve_rational(basis_t, rhs);
    if (!sol) throw std::invalid_argument("integral basis is singular");
    Coords c(n_);
    for (int i = 0; i < n_; ++i) {
      Rational v = (*sol)(i);
      v.canonicalize();
      if (v.get_den() != 1) throw std::invalid_argument("basis products are not integral");
      c[i] = to_int64(v.get_num());
    }
    return c;
  };
  one_ = to_coords(RatPoly{Rational(1)});

  mul_.resize(static_cast<std::size_t>(n_ * n_));
  for (int r = 0; r < n_; ++r) {
    for (int s = 0; s < n_; ++s) {
      RatPoly prod(2 * n_, Rational(0));
      for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
          prod[a + b] += Rational(static_cast<long>(spec_.integral_basis[r][a] * spec_.integral_basis[s][b]));
      mul_[r * n_ + s] = to_coords(remainder(prod, f));
    }
  }
  traces_.resize(n_);
  for (int r = 0; r < n_; ++r) {
    std::int64_t t = 0;
    for (int s = 0; s < n_; ++s) t += mul_[r * n_ + s][s];
    traces_[r] = t;
  }
  IntMatrix trace_form(n_, n_);
  for (int r = 0; r < n_; ++r) {
    for (int s = 0; s < n_; ++s) {
      std::int64_t t = 0;
      for (int k = 0; k < n_; ++k) t += mul_[r * n_ + s][k] * traces_[k];
      trace_form(r, s) = to_integer(t);
    }
  }
  if (bareiss_determinant<Integer>(trace_form) != to_integer(spec_.discriminant)) {
    throw std::invalid_argument("discriminant does not match the trace form of the basis");
  }

  embed_.resize(n_, n_);
  for (int t = 0; t < n_; ++t)
    for (int i = 0; i < n_; ++i)
      embed_(t, i) = horner(spec_.integral_basis[i], roots_[t]).midpoint().get_d();
  embed_inv_ = embed_.inverse();
}

Interval Field::root_enclosure(int t, int bits) const {
  if (n_ == 1 || bits <= kBaseRootBits) return roots_[t];
  RatPoly f;
  for (auto c : spec_.min_poly) f.emplace_back(static_cast<long>(c));
  Rational a = roots_[t].lo(), b = roots_[t].hi();
  const Rational target = pow2(-bits);
  while (b - a > target) {
    const Rational mid = (a + b) / 2;
    if (sign_of(eval(f, mid)) == sign_at_lo_[t]) a = mid; else b = mid;
  }
  return Interval(a, b);
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(const Field& field, Coords coords)
    : field_(&field), coords_(std::move(coords)) {
  if (coords_.size() != field.degree()) throw std::invalid_argument("coordinate count != degree");
}

FieldElement FieldElement::zero(const Field& field) {
  return FieldElement(field, Coords::Zero(field.degree()));
}
FieldElement FieldElement::one(const Field& field) { return FieldElement(field, field.one()); }
FieldElement FieldElement::from_integer(const Field& field, std::int64_t k) {
  return FieldElement(field, field.one() * k);
}
FieldElement FieldElement::from_coords(const Field& field, std::initializer_list<std::int64_t> c) {
  Coords v(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (auto x : c) v[i++] = x;
  return FieldElement(field, v);
}

const Field& FieldElement::field() const {
  if (field_ == nullptr) throw std::logic_error("detached FieldElement");
  return *field_;
}

void FieldElement::check_same(const FieldElement& o) const {
  if (field_ == nullptr || field_ != o.field_) throw std::invalid_argument("mismatched FieldSpec");
}

std::optional<std::int64_t> FieldElement::as_integer() const {
  const Coords& one = field().one();
  Eigen::Index pivot = 0;
  while (one[pivot] == 0) ++pivot;
  if (coords_[pivot] % one[pivot] != 0) return std::nullopt;
  const std::int64_t k = coords_[pivot] / one[pivot];
  if (coords_ != one * k) return std::nullopt;
  return k;
}

std::string FieldElement::to_string() const {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < coords_.size(); ++i) {
    if (i) os << ',';
    os << coords_[i];
  }
  return os.str();
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same(o);
  coords_ += o.coords_;
  return *this;
}
FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same(o);
  coords_ -= o.coords_;
  return *this;
}
FieldElement& FieldElement::operator*=(std::int64_t k) {
  coords_ *= k;
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check_same(o);
  const int n = field_->degree();
  __int128 acc[kMaxDegree] = {};
  for (int r = 0; r < n; ++r) {
    if (coords_[r] == 0) continue;
    for (int s = 0; s < n; ++s) {
      if (o.coords_[s] == 0) continue;
      const __int128 f = static_cast<__int128>(coords_[r]) * o.coords_[s];
      const Coords& p = field_->basis_product(r, s);
      for (int k = 0; k < n; ++k) acc[k] += f * p[k];
    }
  }
  for (int k = 0; k < n; ++k) coords_[k] = checked(acc[k]);
  return *this;
}

bool coords_less(const FieldElement& a, const FieldElement& b) {
  const auto& x = a.coords();
  const auto& y = b.coords();
  return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
}

// ---------------------------------------------------------------------------
// Norm, trace, embeddings

Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> multiplication_matrix(
    const FieldElement& a) {
  const Field& field = a.field();
  const int n = field.degree();
  Int64Matrix m(n, n);
  for (int s = 0; s < n; ++s) {
    FieldElement basis(field, Coords::Unit(n, s));
    m.col(s) = (a * basis).coords();
  }
  return m;
}

std::int64_t norm(const FieldElement& a) {
  if (a.is_zero()) return 0;
  return to_int64(determinant(multiplication_matrix(a)));
}

std::int64_t trace(const FieldElement& a) {
  const Field& field = a.field();
  __int128 t = 0;
  for (int r = 0; r < field.degree(); ++r) t += static_cast<__int128>(a[r]) * field.basis_trace(r);
  return checked(t);
}

namespace {

std::vector<Integer> element_polynomial(const FieldElement& a) {
  const Field& field = a.field();
  const int n = field.degree();
  std::vector<Integer> g(n, Integer(0));
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    const auto& row = field.basis_polynomial(i);
    for (int k = 0; k < n; ++k) g[k] += to_integer(a[i]) * to_integer(row[k]);
  }
  return g;
}

}  // namespace

EmbeddingBox embeddings(const FieldElement& a, int precision_bits) {
  if (precision_bits < 8) throw std::invalid_argument("precision must be at least 8 bits");
  const Field& field = a.field();
  const auto g = element_polynomial(a);
  Integer coeff_sum = 1;
  for (const auto& c : g) coeff_sum += abs(c);
  const int extra = static_cast<int>(mpz_sizeinbase(coeff_sum.get_mpz_t(), 2)) + 8 + 2 * field.degree();
  const Rational target = pow2(-precision_bits);
  EmbeddingBox box;
  box.precision_bits = precision_bits;
  for (int t = 0; t < field.degree(); ++t) {
    int bits = precision_bits + extra;
    while (true) {
      Interval v = horner_wide(g, field.root_enclosure(t, bits));
      if (v.width() <= target) {
        box.enclosures.push_back(std::move(v));
        break;
      }
      bits += 32;
    }
  }
  return box;
}

EmbeddingVector approximate_embeddings(const FieldElement& a) {
  const Field& field = a.field();
  const int n = field.degree();
  EmbeddingVector v = EmbeddingVector::Zero(n);
  const auto& e = field.embedding_matrix();
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int t = 0; t < n; ++t) v[t] += e(t, i) * static_cast<double>(a[i]);
  }
  return v;
}

double embedding_error_bound(const FieldElement& a, int t) {
  const auto& e = a.field().embedding_matrix();
  double s = 0;
  for (int i = 0; i < a.field().degree(); ++i) {
    s += std::abs(static_cast<double>(a[i])) * (1.0 + std::abs(e(t, i)));
  }
  return s * 0x1p-40;
}

int compare_embedding(const FieldElement& a, int t, const Rational& bound) {
  if (auto k = a.as_integer()) {
    const Rational v(static_cast<long>(*k));
    return v < bound ? -1 : (v > bound ? 1 : 0);
  }
  const double approx = approximate_embeddings(a)[t];
  const double err = embedding_error_bound(a, t);
  const double b = bound.get_d();
  const double b_err = std::abs(b) * 0x1p-50 + 0x1p-1000;
  if (approx - err > b + b_err) return 1;
  if (approx + err < b - b_err) return -1;
  // Irrational sigma_t(a) never equals a rational bound; refinement terminates.
  for (int bits = 64;; bits *= 2) {
    const Interval v = embeddings(a, bits).enclosures[t];
    if (v.lo() > bound) return 1;
    if (v.hi() < bound) return -1;
    if (bits > (1 << 16)) throw std::logic_error("embedding comparison failed to resolve");
  }
}

int embedding_sign(const FieldElement& a, int t) {
  if (a.is_zero()) return 0;
  return compare_embedding(a, t, Rational(0));
}

bool is_totally_positive(const FieldElement& a) {
  if (a.is_zero()) return false;
  for (int t = 0; t < a.field().degree(); ++t)
    if (embedding_sign(a, t) <= 0) return false;
  return true;
}

std::uint32_t sign_mask(const FieldElement& a) {
  if (a.is_zero()) throw std::domain_error("sign vector of zero");
  std::uint32_t mask = 0;
  for (int t = 0; t < a.field().degree(); ++t)
    if (embedding_sign(a, t) < 0) mask |= 1u << t;
  return mask;
}

double max_abs_embedding(const FieldElement& a) { return approximate_embeddings(a).cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// Divisibility

std::optional<FieldElement> divide_exact(const FieldElement& a, const FieldElement& b) {
  if (b.is_zero()) throw std::domain_error("division by zero in O_K");
  if (a.field_ptr() != b.field_ptr()) throw std::invalid_argument("mismatched FieldSpec");
  if (a.is_zero()) return FieldElement::zero(a.field());
  const Field& field = a.field();
  const int n = field.degree();
  const Int64Matrix m = multiplication_matrix(b);
  const Integer det = determinant(m);
  Coords out(n);
  for (int i = 0; i < n; ++i) {
    Int64Matrix mi = m;
    mi.col(i) = a.coords();
    const Integer num = determinant(mi);
    if (num % det != 0) return std::nullopt;
    out[i] = to_int64(num / det);
  }
  return FieldElement(field, out);
}

bool divides(const FieldElement& d, const FieldElement& a) { return divide_exact(a, d).has_value(); }

bool is_unit(const FieldElement& a) {
  const std::int64_t nm = norm(a);
  return nm == 1 || nm == -1;
}

bool are_associates(const FieldElement& a, const FieldElement& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  if (std::llabs(norm(a)) != std::llabs(norm(b))) return false;
  return divides(a, b) && divides(b, a);
}

// ---------------------------------------------------------------------------
// Residues modulo a principal ideal

ModulusReducer::ModulusReducer(const FieldElement& modulus) : modulus_(modulus) {
  if (modulus.is_zero()) throw std::invalid_argument("reduction modulo zero");
  const Field& field = modulus.field();
  const int n = field.degree();
  const Int64Matrix m = multiplication_matrix(modulus);
  IntMatrix rows(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows(i, j) = to_integer(m(j, i));
  const IntMatrix h = hermite_normal_form(rows);
  hnf_.resize(n, n);
  size_ = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) hnf_(i, j) = to_int64(h(i, j));
    size_ *= hnf_(i, i);
  }
}

Coords ModulusReducer::reduce(Coords c) const {
  for (Eigen::Index i = 0; i < hnf_.rows(); ++i) {
    const std::int64_t p = hnf_(i, i);
    std::int64_t q = c[i] / p;
    if (c[i] % p != 0 && c[i] < 0) --q;
    if (q != 0) c -= q * hnf_.row(i).transpose();
  }
  return c;
}

FieldElement ModulusReducer::reduce(const FieldElement& x) const {
  return FieldElement(x.field(), reduce(x.coords()));
}

bool ModulusReducer::is_zero_mod(const FieldElement& x) const { return reduce(x.coords()).isZero(); }

std::int64_t ModulusReducer::index(const FieldElement& x) const {
  const Coords c = reduce(x.coords());
  std::int64_t idx = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) idx = idx * hnf_(i, i) + c[i];
  return idx;
}

FieldElement ModulusReducer::element(std::int64_t index) const {
  const Eigen::Index n = hnf_.rows();
  Coords c(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    c[i] = index % hnf_(i, i);
    index /= hnf_(i, i);
  }
  return FieldElement(modulus_.field(), c);
}

// ---------------------------------------------------------------------------
// Integers

std::vector<std::pair<std::int64_t, int>> factor_integer(std::int64_t m) {
  if (m <= 0) throw std::invalid_argument("factor_integer expects a positive integer");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

bool is_prime_power(std::int64_t m, std::int64_t* base, int* exponent) {
  if (m < 2) return false;
  const auto f = factor_integer(m);
  if (f.size() != 1) return false;
  if (base) *base = f[0].first;
  if (exponent) *exponent = f[0].second;
  return true;
}

bool is_prime_element(const FieldElement& pi) {
  if (pi.is_zero()) return false;
  const std::int64_t q = std::llabs(norm(pi));
  int e = 0;
  if (!is_prime_power(q, nullptr, &e)) return false;
  if (e == 1) return true;
  if (q > 2'000'000) throw BudgetExhausted("residue field too large for the primality test");
  // O_K/pi is a field iff every nonzero residue x satisfies x^(q-1) = 1.
  const ModulusReducer red(pi);
  const Field& field = pi.field();
  const FieldElement one = red.reduce(FieldElement::one(field));
  for (std::int64_t idx = 1; idx < q; ++idx) {
    FieldElement base = red.element(idx);
    FieldElement acc = one;
    for (std::int64_t k = q - 1; k > 0; k >>= 1) {
      if (k & 1) acc = red.reduce(acc * base);
      base = red.reduce(base * base);
    }
    if (acc != one) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Searches

namespace detail {

double box_slack(double lo, double hi) { return 1e-9 * (1.0 + std::abs(lo) + std::abs(hi)); }

bool certified_in_box(const FieldElement& a, std::span<const std::pair<double, double>> bounds,
                      const EmbeddingVector& approx) {
  for (int t = 0; t < a.field().degree(); ++t) {
    const double err = embedding_error_bound(a, t);
    const auto [lo, hi] = bounds[t];
    if (approx[t] - err >= lo && approx[t] + err <= hi) continue;
    if (compare_embedding(a, t, Rational(lo)) < 0) return false;
    if (compare_embedding(a, t, Rational(hi)) > 0) return false;
  }
  return true;
}

}  // namespace detail

std::vector<FieldElement> enumerate_box(const Field& field,
                                        std::span<const std::pair<double, double>> bounds,
                                        BudgetMeter* meter) {
  std::vector<FieldElement> out;
  for_each_in_box(
      field, bounds, BoxMode::kCertified,
      [&](const Coords& c, const EmbeddingVector&) {
        out.emplace_back(field, c);
        return true;
      },
      meter);
  return out;
}

namespace {

void sort_by_size(std::vector<FieldElement>& v) {
  std::stable_sort(v.begin(), v.end(), [](const FieldElement& a, const FieldElement& b) {
    const double ma = max_abs_embedding(a), mb = max_abs_embedding(b);
    if (std::abs(ma - mb) > 1e-9) return ma < mb;
    return coords_less(a, b);
  });
}

}  // namespace

UnitSignatures unit_signatures(const Field& field, const SearchBudget& budget) {
  UnitSignatures out;
  const int n = field.degree();
  const std::uint32_t all = (n >= 32) ? 0xffffffffu : ((1u << n) - 1);
  BudgetMeter meter(budget);
  try {
    for (double radius = 2.0;; radius *= 2.0) {
      std::vector<std::pair<double, double>> box(n, {-radius, radius});
      std::vector<FieldElement> units;
      for_each_in_box(
          field, box, BoxMode::kSuperset,
          [&](const Coords& c, const EmbeddingVector&) {
            FieldElement u(field, c);
            if (!u.is_zero() && is_unit(u)) units.push_back(std::move(u));
            return true;
          },
          &meter);
      sort_by_size(units);
      out.by_signature.clear();
      for (const auto& u : units) out.by_signature.emplace(sign_mask(u), u);
      out.units = std::move(units);
      if (out.by_signature.size() == static_cast<std::size_t>(all) + 1) {
        out.complete = true;
        return out;
      }
      if (radius > 1e6) return out;
    }
  } catch (const BudgetExhausted&) {
    return out;
  }
}

std::vector<FieldElement> elements_of_norm(const Field& field, std::int64_t m, double radius,
                                           BudgetMeter& meter) {
  const int n = field.degree();
  std::vector<std::pair<double, double>> box(n, {-radius, radius});
  std::vector<FieldElement> found;
  for_each_in_box(
      field, box, BoxMode::kSuperset,
      [&](const Coords& c, const EmbeddingVector&) {
        FieldElement x(field, c);
        if (!x.is_zero() && std::llabs(norm(x)) == m) found.push_back(std::move(x));
        return true;
      },
      &meter);
  sort_by_size(found);
  std::vector<FieldElement> classes;
  for (auto& x : found) {
    bool seen = false;
    for (const auto& y : classes) {
      if (are_associates(x, y)) {
        seen = true;
        break;
      }
    }
    if (!seen) classes.push_back(std::move(x));
  }
  return classes;
}

FieldElement Factorization::expand() const {
  FieldElement acc = unit;
  for (const auto& [p, e] : primes)
    for (int k = 0; k < e; ++k) acc *= p;
  return acc;
}

bool Factorization::squarefree() const {
  return std::all_of(primes.begin(), primes.end(), [](const auto& pe) { return pe.second == 1; });
}

Factorization factor(const FieldElement& a, const SearchBudget& budget) {
  if (a.is_zero()) throw std::domain_error("factor of zero");
  const Field& field = a.field();
  const int n = field.degree();
  BudgetMeter meter(budget);
  Factorization out;
  FieldElement rem = a;
  const auto zfactors = factor_integer(std::llabs(norm(a)));
  for (const auto& [p, total] : zfactors) {
    auto p_exponent = [&, p = p](std::int64_t value) {
      int e = 0;
      value = std::llabs(value);
      while (value % p == 0) {
        value /= p;
        ++e;
      }
      return e;
    };
    int remaining = p_exponent(norm(rem));
    while (remaining > 0) {
      std::int64_t pk_max = 1;
      for (int k = 0; k < remaining; ++k) pk_max *= p;
      std::optional<FieldElement> prime;
      for (double radius = 1.0 + 1.5 * std::pow(static_cast<double>(p), 1.0 / n); !prime;
           radius *= 1.6) {
        std::vector<std::pair<double, double>> box(n, {-radius, radius});
        std::vector<FieldElement> cands;
        for_each_in_box(
            field, box, BoxMode::kSuperset,
            [&](const Coords& c, const EmbeddingVector&) {
              FieldElement x(field, c);
              if (x.is_zero()) return true;
              const std::int64_t nx = std::llabs(norm(x));
              if (nx > 1 && pk_max % nx == 0 && p_exponent(nx) > 0) cands.push_back(std::move(x));
              return true;
            },
            &meter);
        sort_by_size(cands);
        std::stable_sort(cands.begin(), cands.end(), [](const FieldElement& x, const FieldElement& y) {
          return std::llabs(norm(x)) < std::llabs(norm(y));
        });
        for (const auto& x : cands) {
          if (divides(x, rem) && is_prime_element(x)) {
            prime = x;
            break;
          }
        }
      }
      int e = 0;
      while (auto q = divide_exact(rem, *prime)) {
        rem = *q;
        ++e;
      }
      out.primes.emplace_back(*prime, e);
      remaining = p_exponent(norm(rem));
    }
  }
  if (!is_unit(rem)) throw std::logic_error("factorization left a non-unit cofactor");
  out.unit = rem;
  return out;
}

// ---------------------------------------------------------------------------
// Chinese remainders

FieldElement crt_lift(std::span<const std::pair<FieldElement, FieldElement>> constraints) {
  if (constraints.empty()) throw std::invalid_argument("crt_lift needs a field; pass at least one constraint");
  const Field& field = constraints.front().first.field();
  if (constraints.size() == 1) return constraints.front().first;
  const int n = field.degree();
  FieldElement total = FieldElement::one(field);
  for (const auto& [target, modulus] : constraints) {
    if (modulus.is_zero()) throw std::invalid_argument("crt modulus is zero");
    total *= modulus;
  }
  FieldElement result = FieldElement::zero(field);
  for (const auto& [target, modulus] : constraints) {
    const FieldElement cofactor = *divide_exact(total, modulus);
    // Solve cofactor*y + modulus*z = 1 over the integers.
    IntMatrix gens(2 * n, n);
    const Int64Matrix mc = multiplication_matrix(cofactor);
    const Int64Matrix mm = multiplication_matrix(modulus);
    for (int s = 0; s < n; ++s) {
      for (int k = 0; k < n; ++k) {
        gens(s, k) = to_integer(mc(k, s));
        gens(n + s, k) = to_integer(mm(k, s));
      }
    }
    IntMatrix u;
    const IntMatrix h = hermite_normal_form(gens, &u);
    IntVector one(n);
    for (int k = 0; k < n; ++k) one(k) = to_integer(field.one()[k]);
    if (h.rows() != n) throw std::invalid_argument("crt moduli are not coprime");
    auto d = solve_in_hnf(h, one);
    if (!d) throw std::invalid_argument("crt moduli are not coprime");
    const IntVector coeff = u.topRows(n).transpose() * (*d);
    Coords y(n);
    y.setZero();
    for (int s = 0; s < n; ++s) {
      const std::int64_t cs = to_int64(coeff(s));
      y += cs * Coords::Unit(n, s);
    }
    result += target * cofactor * FieldElement(field, y);
  }
  return ModulusReducer(total).reduce(result);
}

// ---------------------------------------------------------------------------

FieldElement parse_field_element(const Field& field, const std::string& text) {
  std::vector<std::int64_t> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      vals.push_back(std::stoll(item, &pos));
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad field element literal: " + text);
    }
  }
  if (vals.size() == 1 && field.degree() > 1) return FieldElement::from_integer(field, vals[0]);
  if (static_cast<int>(vals.size()) != field.degree()) {
    throw std::invalid_argument("field element literal needs " + std::to_string(field.degree()) +
                                " coordinates: " + text);
  }
  Coords c(field.degree());
  for (int i = 0; i < field.degree(); ++i) c[i] = vals[i];
  return FieldElement(field, c);
}

}  // namespace quatuniv
