#include "quatuniv/check.hpp"

#include <set>

namespace quatuniv {

namespace {

// F_r = O_K / rho with residues numbered by the reducer's mixed-radix index.
class SmallField {
 public:
  explicit SmallField(const FieldElement& rho) : red_(rho), r_(static_cast<int>(red_.size())) {
    if (r_ > 4096) throw std::invalid_argument("residue field too large for the checker");
    reps_.reserve(r_);
    for (int i = 0; i < r_; ++i) reps_.push_back(red_.element(i));
    add_.resize(static_cast<std::size_t>(r_) * r_);
    mul_.resize(static_cast<std::size_t>(r_) * r_);
    for (int a = 0; a < r_; ++a)
      for (int b = 0; b < r_; ++b) {
        add_[a * r_ + b] = static_cast<int>(red_.index(reps_[a] + reps_[b]));
        mul_[a * r_ + b] = static_cast<int>(red_.index(reps_[a] * reps_[b]));
      }
    one_ = static_cast<int>(red_.index(FieldElement::one(rho.field())));
    inv_.assign(r_, 0);
    neg_.assign(r_, 0);
    for (int a = 0; a < r_; ++a)
      for (int b = 0; b < r_; ++b) {
        if (mul_[a * r_ + b] == one_) inv_[a] = b;
        if (add_[a * r_ + b] == 0) neg_[a] = b;
      }
  }

  int size() const { return r_; }
  int add(int a, int b) const { return add_[a * r_ + b]; }
  int mul(int a, int b) const { return mul_[a * r_ + b]; }
  int neg(int a) const { return neg_[a]; }
  int inv(int a) const { return inv_[a]; }
  int index(const FieldElement& x) const { return static_cast<int>(red_.index(x)); }
  const FieldElement& rep(int i) const { return reps_[i]; }
  bool is_zero(const FieldElement& x) const { return red_.is_zero_mod(x); }

 private:
  ModulusReducer red_;
  int r_;
  int one_ = 0;
  std::vector<FieldElement> reps_;
  std::vector<int> add_, mul_, inv_, neg_;
};

using Row = std::array<int, 4>;

// Reduced row echelon form of the F_r-span of {e_j L}: the left orbit of L.
std::vector<Row> orbit_key(const SmallField& F, const Order& order, const Quaternion& L) {
  std::vector<Row> m;
  for (int j = 0; j < 4; ++j) {
    const Quaternion q = Quaternion::basis(order, j) * L;
    m.push_back({F.index(q[0]), F.index(q[1]), F.index(q[2]), F.index(q[3])});
  }
  std::size_t row = 0;
  for (int c = 0; c < 4 && row < m.size(); ++c) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[row]);
    const int inv = F.inv(m[row][c]);
    for (auto& v : m[row]) v = F.mul(inv, v);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][c] == 0) continue;
      const int f = F.neg(m[i][c]);
      for (int k = 0; k < 4; ++k) m[i][k] = F.add(m[i][k], F.mul(f, m[row][k]));
    }
    ++row;
  }
  m.resize(row);
  return m;
}

std::string show(const FieldElement& x) { return "[" + x.to_string() + "]"; }

Interval recompute_bound(int n, std::int64_t d_K, std::int64_t nm_T) {
  constexpr int kBits = 96;
  Integer fact = 1;
  for (int i = 2; i <= 4 * n; ++i) fact *= i;
  Rational three_n = 1, n_2n = 1;
  for (int i = 0; i < n; ++i) three_n *= 3;
  for (int i = 0; i < 2 * n; ++i) n_2n *= n;
  Interval pi_n(Rational(1));
  for (int i = 0; i < n; ++i) pi_n *= pi_interval();
  const Interval num = Interval(Rational(fact)).sqrt(kBits) * Interval(Rational(static_cast<long>(nm_T))).sqrt(kBits);
  const Interval den = n_2n * (pi_n * Interval(three_n).sqrt(kBits));
  return Rational(static_cast<long>(d_K)) * (num / den);
}

class Checker {
 public:
  explicit Checker(const Json& doc) : doc_(doc) {
    field_ = Field::create(field_spec_from_json(doc.at("field")));
    const auto& o = doc.at("order");
    order_ = Order::create(field_, element_from_json(*field_, o.at("A")), element_from_json(*field_, o.at("B")),
                           element_from_json(*field_, o.at("mu")), element_from_json(*field_, o.at("nu")));
    if (o.contains("T") && !(element_from_json(*field_, o.at("T")) == order_->params().T)) {
      error("stated T does not match the order parameters");
    }
  }

  CheckReport run() {
    report_.kind = doc_.at("kind").get<std::string>();
    if (report_.kind == "suitability") {
      const bool ok = check_obligation(doc_.at("certificate"));
      const std::string verdict = doc_.at("certificate").value("verdict", "");
      if (verdict == "suitable" && !ok) error("certificate claims suitability that does not verify");
      report_.notes.push_back(ok ? "prime verified H-suitable" : "prime not verified H-suitable");
    } else if (report_.kind == "pid" || report_.kind == "universality") {
      check_pid();
    } else {
      error("unknown certificate kind " + report_.kind);
    }
    return report_;
  }

 private:
  void error(std::string msg) { report_.errors.push_back(std::move(msg)); }

  bool check_factorization(const Factorization& f, const FieldElement& target, const std::string& what) {
    bool ok = true;
    if (!is_unit(f.unit)) {
      error(what + ": unit part is not a unit");
      ok = false;
    }
    for (const auto& [pi, e] : f.primes) {
      if (e < 1 || !is_prime_element(pi)) {
        error(what + ": " + show(pi) + " is not a prime element");
        ok = false;
      }
    }
    if (!(f.expand() == target)) {
      error(what + ": factors do not multiply to " + show(target));
      ok = false;
    }
    return ok;
  }

  // Witnesses and orbit coverage for one prime; true when it is certified.
  bool check_obligation(const Json& ob) {
    const Order& order = *order_;
    const FieldElement rho = element_from_json(*field_, ob.at("rho"));
    const std::string tag = "prime " + show(rho);
    if (!is_prime_element(rho)) {
      error(tag + " is not prime");
      return false;
    }
    const std::int64_t r = std::llabs(norm(rho));
    if (ob.at("r").get<std::int64_t>() != r) error(tag + ": wrong residue field size");
    const Rational unit_nn(1, static_cast<long>(r * r));
    if (rational_from_json(ob.at("unit_case_nn")) != unit_nn || unit_nn >= 1) {
      error(tag + ": wrong double norm for 1/rho");
    }
    if (!ob.at("missing").empty()) return false;

    bool ok = true;
    SmallField F(rho);
    std::set<std::vector<Row>> covered;
    for (const auto& w : ob.at("witnesses")) {
      const Quaternion G = quaternion_from_json(order, w.at("generator"));
      const Quaternion P = quaternion_from_json(order, w.at("numerator"));
      const Quaternion D = quaternion_from_json(order, w.at("D"));
      const Quaternion C = quaternion_from_json(order, w.at("C"));
      const FieldElement k = element_from_json(*field_, w.at("k"));
      const Rational nn = rational_from_json(w.at("nn"));
      bool good = true;
      if (!F.is_zero(nm(G)) || divides(rho, G)) good = false;
      if (!(P == D * G + C * rho)) good = false;
      if (!(nm(P) == rho * k)) good = false;
      if (P.is_zero() || double_norm(QuaternionFraction{P, rho}) != nn || nn >= 1) good = false;
      if (!good) {
        error(tag + ": witness for generator " + G.to_string() + " does not verify");
        ok = false;
        continue;
      }
      covered.insert(orbit_key(F, order, G));
    }

    // Every nonzero residue L with rho | nm(L) must share its orbit with a generator.
    const std::int64_t rr = r;
    const std::int64_t total = rr * rr * rr * rr;
    std::int64_t uncovered = 0;
    for (std::int64_t idx = 1; idx < total; ++idx) {
      std::int64_t t = idx;
      std::array<FieldElement, 4> c;
      for (int j = 0; j < 4; ++j) {
        c[j] = F.rep(static_cast<int>(t % rr));
        t /= rr;
      }
      const Quaternion L(order, std::move(c));
      if (!F.is_zero(nm(L))) continue;
      if (!covered.count(orbit_key(F, order, L))) {
        if (uncovered++ == 0) error(tag + ": residue " + L.to_string() + " lies in no witnessed orbit");
        ok = false;
      }
    }
    if (uncovered > 1) error(tag + ": " + std::to_string(uncovered) + " uncovered residues in total");
    if (ok) {
      report_.notes.push_back(tag + " of norm " + std::to_string(r) + ": " + std::to_string(covered.size()) +
                              " orbits witnessed");
    }
    return ok;
  }

  void check_pid() {
    const Field& field = *field_;
    const Order& order = *order_;
    const int n = field.degree();
    const std::int64_t nm_T = std::llabs(norm(order.params().T));
    const Interval bound = recompute_bound(n, field.discriminant(), nm_T);
    const std::int64_t top = to_int64(floor_div(bound.hi().get_num(), bound.hi().get_den()));
    const Rational stated_hi = rational_from_json(doc_.at("bound").at("hi"));
    if (to_int64(floor_div(stated_hi.get_num(), stated_hi.get_den())) != top) {
      error("stated bound disagrees with the recomputed one");
    }
    report_.notes.push_back("bound in [" + std::to_string(bound.lower_double()) + ", " +
                            std::to_string(bound.upper_double()) + "]");

    std::vector<FieldElement> required;
    auto require = [&](const FieldElement& pi) {
      for (const auto& q : required)
        if (are_associates(q, pi)) return;
      required.push_back(pi);
    };
    std::map<std::int64_t, Factorization> splits;
    for (const auto& s : doc_.at("splittings")) splits[s.at("p").get<std::int64_t>()] = factorization_from_json(field, s);
    bool complete = true;
    for (std::int64_t p = 2; p <= top; ++p) {
      const auto fz = factor_integer(p);
      if (fz.size() != 1 || fz[0].second != 1) continue;
      const auto it = splits.find(p);
      if (it == splits.end()) {
        error("missing factorization of " + std::to_string(p));
        complete = false;
        continue;
      }
      if (!check_factorization(it->second, FieldElement::from_integer(field, p), "factorization of " + std::to_string(p))) {
        complete = false;
        continue;
      }
      for (const auto& [pi, e] : it->second.primes)
        if (std::llabs(norm(pi)) <= top) require(pi);
    }
    const Factorization tf = factorization_from_json(field, doc_.at("T_factorization"));
    if (!check_factorization(tf, order.params().T, "factorization of T")) complete = false;
    for (const auto& [pi, e] : tf.primes) require(pi);

    bool pid = complete;
    for (const auto& pi : required) {
      const Json* found = nullptr;
      for (const auto& ob : doc_.at("obligations")) {
        if (are_associates(element_from_json(field, ob.at("rho")), pi)) {
          found = &ob;
          break;
        }
      }
      if (found == nullptr) {
        error("no obligation for the prime " + show(pi));
        pid = false;
      } else if (!check_obligation(*found)) {
        pid = false;
      }
    }

    const std::string verdict = doc_.value("verdict", "");
    if (report_.kind == "pid") {
      if (verdict == "principal ideal domain" && !pid) error("PID verdict does not verify");
      report_.notes.push_back(pid ? "PID verified" : "PID not verified");
      return;
    }

    bool squarefree = complete && tf.squarefree();
    if (doc_.value("T_squarefree", false) && !squarefree) error("T is not squarefree");
    std::set<std::uint32_t> masks;
    for (const auto& s : doc_.at("units").at("signatures")) {
      const FieldElement u = element_from_json(field, s.at("unit"));
      const auto mask = s.at("mask").get<std::uint32_t>();
      if (!is_unit(u) || sign_mask(u) != mask) {
        error("unit " + show(u) + " does not have sign vector " + std::to_string(mask));
      } else {
        masks.insert(mask);
      }
    }
    const bool all_signs = masks.size() == (std::size_t{1} << n);
    const bool universal = pid && squarefree && all_signs;
    if (verdict == "universal" && !universal) error("universality verdict does not verify");
    report_.notes.push_back(universal ? "universality verified" : "universality not verified");
  }

  const Json& doc_;
  std::shared_ptr<const Field> field_;
  std::shared_ptr<const Order> order_;
  CheckReport report_;
};

}  // namespace

CheckReport check_certificate(const Json& doc) {
  try {
    return Checker(doc).run();
  } catch (const std::exception& e) {
    CheckReport r;
    r.kind = doc.value("kind", "");
    r.errors.push_back(std::string("malformed certificate: ") + e.what());
    return r;
  }
}

}  // namespace quatuniv
