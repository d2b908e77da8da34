// Exact arithmetic in a totally real number field K and its ring of integers.
//
// Elements of O_K are integer coordinate vectors over a fixed integral basis
// w_1..w_n. Real embeddings are ordered by ascending root of the minimal
// polynomial and are only ever evaluated through certified enclosures, or
// through double approximations whose error is bounded explicitly.

#pragma once

#include "quatuniv/exact.hpp"
#include "quatuniv/interval.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace quatuniv {

inline constexpr int kMaxDegree = 8;

/// Coordinates over the integral basis; fixed capacity, no heap allocation.
using Coords = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1, 0, kMaxDegree, 1>;
using EmbeddingVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDegree, 1>;

/// Norms of O_K elements may only take these residues (e.g. 0, +-1 mod 7).
struct NormResidueFilter {
  std::int64_t modulus = 1;
  std::vector<std::int64_t> residues;

  bool admits(std::int64_t norm) const;
};

struct FieldSpec {
  std::string name;
  std::vector<std::int64_t> min_poly;                     // ascending, monic
  std::vector<std::vector<std::int64_t>> integral_basis;  // rows: w_i in powers of theta
  std::int64_t discriminant = 0;
  std::optional<NormResidueFilter> norm_filter;

  /// Q(zeta_7 + zeta_7^-1) with basis phi_m = zeta_7^m + zeta_7^-m.
  static FieldSpec zeta7();
};

class Field {
 public:
  /// Validates the spec (monic, squarefree, totally real, integral
  /// multiplication table, trace-form discriminant); throws std::invalid_argument.
  static std::shared_ptr<const Field> create(FieldSpec spec);

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  int degree() const noexcept { return n_; }
  const FieldSpec& spec() const noexcept { return spec_; }
  std::int64_t discriminant() const noexcept { return spec_.discriminant; }

  const Coords& one() const noexcept { return one_; }
  /// w_r * w_s in basis coordinates.
  const Coords& basis_product(int r, int s) const { return mul_[r * n_ + s]; }
  std::int64_t basis_trace(int r) const { return traces_[r]; }

  /// Approximate sigma_t(w_i); rows are embeddings in ascending root order.
  const Eigen::MatrixXd& embedding_matrix() const noexcept { return embed_; }
  const Eigen::MatrixXd& inverse_embedding_matrix() const noexcept { return embed_inv_; }

  /// Isolating enclosure of the t-th real root, width at most 2^-bits.
  Interval root_enclosure(int t, int bits) const;
  /// w_i as an integer polynomial in the generator (ascending).
  const std::vector<std::int64_t>& basis_polynomial(int i) const {
    return spec_.integral_basis[i];
  }

 private:
  explicit Field(FieldSpec spec);

  FieldSpec spec_;
  int n_ = 0;
  Coords one_;
  std::vector<Coords> mul_;
  std::vector<std::int64_t> traces_;
  std::vector<Interval> roots_;  // width <= 2^-kBaseRootBits
  std::vector<int> sign_at_lo_;  // sign of min_poly at each root's lower end
  Eigen::MatrixXd embed_;
  Eigen::MatrixXd embed_inv_;
};

class FieldElement {
 public:
  FieldElement() = default;  // detached zero; only assignable
  FieldElement(const Field& field, Coords coords);

  static FieldElement zero(const Field& field);
  static FieldElement one(const Field& field);
  static FieldElement from_integer(const Field& field, std::int64_t k);
  /// Element from explicit coordinates, e.g. {2,0,0} = 2*phi_1.
  static FieldElement from_coords(const Field& field, std::initializer_list<std::int64_t> c);

  const Field& field() const;
  const Field* field_ptr() const noexcept { return field_; }
  const Coords& coords() const noexcept { return coords_; }
  std::int64_t operator[](int i) const { return coords_[i]; }

  bool is_zero() const { return coords_.isZero(); }
  /// k when the element is the rational integer k.
  std::optional<std::int64_t> as_integer() const;
  std::string to_string() const;  // "c1,c2,...,cn"

  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator*=(std::int64_t k);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator*(FieldElement a, std::int64_t k) { return a *= k; }
  friend FieldElement operator*(std::int64_t k, FieldElement a) { return a *= k; }
  friend FieldElement operator-(FieldElement a) {
    a.coords_ = -a.coords_;
    return a;
  }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.coords_ == b.coords_;
  }

 private:
  void check_same(const FieldElement& o) const;

  const Field* field_ = nullptr;
  Coords coords_;
};

/// Lexicographic order on coordinates; used only for deterministic output.
bool coords_less(const FieldElement& a, const FieldElement& b);

/// Matrix of multiplication by a: column s holds the coordinates of a*w_s.
Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> multiplication_matrix(
    const FieldElement& a);

std::int64_t norm(const FieldElement& a);
std::int64_t trace(const FieldElement& a);

struct EmbeddingBox {
  std::vector<Interval> enclosures;  // one per embedding, ascending root order
  int precision_bits = 0;            // every enclosure has width <= 2^-bits
};

/// Certified enclosures of sigma_1(a)..sigma_n(a); precision_bits >= 8.
EmbeddingBox embeddings(const FieldElement& a, int precision_bits);

/// Fast approximations of sigma_t(a) and a bound on their absolute error.
EmbeddingVector approximate_embeddings(const FieldElement& a);
double embedding_error_bound(const FieldElement& a, int t);

/// Exact sign of sigma_t(a) - bound (bound rational).
int compare_embedding(const FieldElement& a, int t, const Rational& bound);
int embedding_sign(const FieldElement& a, int t);
bool is_totally_positive(const FieldElement& a);
/// Bit t set when sigma_t(a) < 0; a must be nonzero.
std::uint32_t sign_mask(const FieldElement& a);

/// c with a = b*c, or nullopt when b does not divide a. Throws on b = 0.
std::optional<FieldElement> divide_exact(const FieldElement& a, const FieldElement& b);
bool divides(const FieldElement& d, const FieldElement& a);
bool is_unit(const FieldElement& a);
/// Up-to-unit equality by mutual exact divisibility.
bool are_associates(const FieldElement& a, const FieldElement& b);

/// Canonical residues modulo the principal ideal aO_K (a nonzero).
class ModulusReducer {
 public:
  explicit ModulusReducer(const FieldElement& modulus);

  const FieldElement& modulus() const noexcept { return modulus_; }
  std::int64_t size() const noexcept { return size_; }
  /// Canonical representative of c mod aO_K: 0 <= c_i < hnf(i, i).
  Coords reduce(Coords c) const;
  FieldElement reduce(const FieldElement& x) const;
  bool is_zero_mod(const FieldElement& x) const;
  std::int64_t index(const FieldElement& x) const;  // mixed radix of reduce(x)
  FieldElement element(std::int64_t index) const;
  const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& hnf() const { return hnf_; }

 private:
  FieldElement modulus_;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> hnf_;
  std::int64_t size_ = 0;
};

/// True iff O_K / pi O_K is a field.
bool is_prime_element(const FieldElement& pi);

struct UnitSignatures {
  std::map<std::uint32_t, FieldElement> by_signature;  // sign mask -> unit
  bool complete = false;                               // all 2^n masks found
  std::vector<FieldElement> units;                     // every unit seen
};

/// Searches units in growing coordinate boxes until every sign vector is
/// realized or the budget runs out (reported through `complete`).
UnitSignatures unit_signatures(const Field& field, const SearchBudget& budget = {});

struct Factorization {
  FieldElement unit;
  std::vector<std::pair<FieldElement, int>> primes;

  FieldElement expand() const;
  bool squarefree() const;
};

/// Factorization into prime elements (class number one is assumed, not
/// verified). Throws BudgetExhausted when a prime divisor cannot be located.
Factorization factor(const FieldElement& a, const SearchBudget& budget = {});

/// Elements of O_K with |norm| == m inside the coordinate-embedding box of
/// the given radius; one per associate class, ordered by max |sigma_t|.
std::vector<FieldElement> elements_of_norm(const Field& field, std::int64_t m, double radius,
                                           BudgetMeter& meter);

/// Factor a positive integer by trial division.
std::vector<std::pair<std::int64_t, int>> factor_integer(std::int64_t m);
bool is_prime_power(std::int64_t m, std::int64_t* base = nullptr, int* exponent = nullptr);

/// x with x = target_i mod modulus_i for all i. Throws std::invalid_argument
/// when two moduli share a prime factor.
FieldElement crt_lift(std::span<const std::pair<FieldElement, FieldElement>> constraints);

enum class BoxMode {
  kCertified,  // exactly the elements with lo_t <= sigma_t <= hi_t
  kSuperset,   // may include elements within a tiny slack of the box
};

namespace detail {
double box_slack(double lo, double hi);
bool certified_in_box(const FieldElement& a, std::span<const std::pair<double, double>> bounds,
                      const EmbeddingVector& approx);
}  // namespace detail

/// Calls fn(coords, sigma) for every lattice point of O_K whose embeddings
/// lie in the box; fn returns false to stop early. Charges `meter` per
/// candidate visited when one is provided.
template <typename Fn>
void for_each_in_box(const Field& field, std::span<const std::pair<double, double>> bounds,
                     BoxMode mode, Fn&& fn, BudgetMeter* meter = nullptr) {
  const int n = field.degree();
  const Eigen::MatrixXd& e = field.embedding_matrix();
  const Eigen::MatrixXd& einv = field.inverse_embedding_matrix();
  std::int64_t lo[kMaxDegree];
  std::int64_t hi[kMaxDegree];
  for (int i = 0; i < n; ++i) {
    double a = 0, b = 0;
    for (int t = 0; t < n; ++t) {
      const double u = einv(i, t) * bounds[t].first;
      const double v = einv(i, t) * bounds[t].second;
      a += std::min(u, v);
      b += std::max(u, v);
    }
    const double slack = 1e-7 * (1.0 + std::abs(a) + std::abs(b));
    lo[i] = static_cast<std::int64_t>(std::ceil(a - slack));
    hi[i] = static_cast<std::int64_t>(std::floor(b + slack));
    if (lo[i] > hi[i]) return;
  }
  double slack[kMaxDegree];
  for (int t = 0; t < n; ++t) slack[t] = detail::box_slack(bounds[t].first, bounds[t].second);

  Coords c(n);
  for (int i = 0; i < n; ++i) c[i] = lo[i];
  const int last = n - 1;
  EmbeddingVector partial(n);
  EmbeddingVector sigma(n);
  while (true) {
    partial.setZero();
    for (int i = 0; i < last; ++i) {
      for (int t = 0; t < n; ++t) partial[t] += e(t, i) * static_cast<double>(c[i]);
    }
    if (meter != nullptr) meter->charge();
    // Solve the last coordinate's range directly from each embedding.
    double clo = static_cast<double>(lo[last]);
    double chi = static_cast<double>(hi[last]);
    bool feasible = true;
    for (int t = 0; t < n && feasible; ++t) {
      const double coef = e(t, last);
      const double a = bounds[t].first - slack[t] - partial[t];
      const double b = bounds[t].second + slack[t] - partial[t];
      if (std::abs(coef) < 1e-12) {
        feasible = a <= 0.0 && 0.0 <= b;
        continue;
      }
      double u = a / coef, v = b / coef;
      if (u > v) std::swap(u, v);
      const double pad = 1e-9 * (1.0 + std::abs(u) + std::abs(v));
      clo = std::max(clo, u - pad);
      chi = std::min(chi, v + pad);
    }
    if (feasible && clo <= chi) {
      const auto first = static_cast<std::int64_t>(std::ceil(clo));
      const auto final = static_cast<std::int64_t>(std::floor(chi));
      for (std::int64_t v = first; v <= final; ++v) {
        c[last] = v;
        bool inside = true;
        for (int t = 0; t < n; ++t) {
          sigma[t] = partial[t] + e(t, last) * static_cast<double>(v);
          if (sigma[t] < bounds[t].first - slack[t] || sigma[t] > bounds[t].second + slack[t]) {
            inside = false;
          }
        }
        if (!inside) continue;
        if (mode == BoxMode::kCertified &&
            !detail::certified_in_box(FieldElement(field, c), bounds, sigma)) {
          continue;
        }
        if (!fn(static_cast<const Coords&>(c), static_cast<const EmbeddingVector&>(sigma))) {
          return;
        }
      }
    }
    // Odometer over the leading coordinates.
    int i = last - 1;
    while (i >= 0 && c[i] == hi[i]) {
      c[i] = lo[i];
      --i;
    }
    if (i < 0) return;
    ++c[i];
  }
}

/// All elements with sigma_t in [lo_t, hi_t] for every t (certified).
std::vector<FieldElement> enumerate_box(const Field& field,
                                        std::span<const std::pair<double, double>> bounds,
                                        BudgetMeter* meter = nullptr);

/// max_t |sigma_t(a)| (approximate), the ordering key for searches.
double max_abs_embedding(const FieldElement& a);

FieldElement parse_field_element(const Field& field, const std::string& text);

}  // namespace quatuniv
