#include "quatuniv/lattice.hpp"

#include <algorithm>
#include <map>

namespace quatuniv {

IntVector quaternion_coords(const Quaternion& L) {
  const int n = L.order().field().degree();
  IntVector v(4 * n);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < n; ++i) v(j * n + i) = to_integer(L[j][i]);
  return v;
}

Quaternion quaternion_from_coords(const Order& order, const IntVector& v) {
  const Field& field = order.field();
  const int n = field.degree();
  if (v.size() != 4 * n) throw std::invalid_argument("coordinate vector has the wrong length");
  std::array<FieldElement, 4> c;
  for (int j = 0; j < 4; ++j) {
    Coords x(n);
    for (int i = 0; i < n; ++i) x[i] = to_int64(v(j * n + i));
    c[j] = FieldElement(field, x);
  }
  return Quaternion(order, std::move(c));
}

IntegralFraction to_integral_fraction(const QuaternionFraction& q) {
  const Field& field = q.denominator.field();
  const std::int64_t nd = norm(q.denominator);
  if (nd == 0) throw std::domain_error("quaternion fraction with zero denominator");
  // 1/d = d'/Nm(d) with d' = Nm(d)/d in O_K.
  const FieldElement adj = *divide_exact(FieldElement::from_integer(field, nd), q.denominator);
  Quaternion num = q.numerator * adj;
  Integer den = to_integer(nd);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Integer g = den;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < field.degree(); ++i) g = gcd(g, to_integer(num[j][i]));
  if (g > 1) {
    const std::int64_t gi = to_int64(g);
    std::array<FieldElement, 4> c;
    for (int j = 0; j < 4; ++j) {
      Coords x = num[j].coords();
      for (int i = 0; i < field.degree(); ++i) x[i] /= gi;
      c[j] = FieldElement(field, x);
    }
    num = Quaternion(num.order(), std::move(c));
    den /= g;
  }
  return {std::move(num), std::move(den)};
}

// ---------------------------------------------------------------------------
// IdealLattice

IdealLattice::IdealLattice(const Order& order, Kind kind, IntMatrix rows, Integer den)
    : order_(&order), kind_(kind) {
  IntMatrix h = hermite_normal_form(rows);
  Integer g = den;
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j) g = gcd(g, h(i, j));
  if (g > 1) {
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      for (Eigen::Index j = 0; j < h.cols(); ++j) h(i, j) /= g;
    den /= g;
  }
  hnf_ = std::move(h);
  den_ = std::move(den);
}

IdealLattice IdealLattice::whole_order(const Order& order) {
  const int m = 4 * order.field().degree();
  IdealLattice out(order, Kind::kWholeOrder, IntMatrix::Identity(m, m), Integer(1));
  return out;
}

IdealLattice IdealLattice::left_generated(const Order& order,
                                          const std::vector<QuaternionFraction>& gens) {
  if (gens.empty()) throw std::invalid_argument("ideal needs at least one generator");
  const Field& field = order.field();
  const int n = field.degree();
  std::vector<IntegralFraction> fr;
  Integer den = 1;
  for (const auto& g : gens) {
    if (g.numerator.order_ptr() != &order) throw std::invalid_argument("generator from another order");
    fr.push_back(to_integral_fraction(g));
    den = lcm(den, fr.back().denominator);
  }
  IntMatrix rows(static_cast<Eigen::Index>(fr.size()) * 4 * n, 4 * n);
  Eigen::Index r = 0;
  for (const auto& g : fr) {
    const Integer scale = den / g.denominator;
    for (int j = 0; j < 4; ++j) {
      const Quaternion ej = Quaternion::basis(order, j) * g.numerator;
      for (int i = 0; i < n; ++i) {
        const Quaternion q = ej * FieldElement(field, Coords::Unit(n, i));
        rows.row(r++) = (quaternion_coords(q) * scale).transpose();
      }
    }
  }
  return IdealLattice(order, Kind::kLeftGenerated, std::move(rows), std::move(den));
}

IdealLattice IdealLattice::fractional_orbit(const Quaternion& L, const FieldElement& rho) {
  const Order& order = L.order();
  if (!is_prime_element(rho)) throw std::invalid_argument("fractional_orbit: rho is not prime");
  if (!divides(rho, nm(L))) throw std::invalid_argument("fractional_orbit: rho does not divide nm(L)");
  if (divides(rho, L)) throw std::invalid_argument("fractional_orbit: rho divides L");
  IdealLattice out = left_generated(
      order, {QuaternionFraction{L, rho},
              QuaternionFraction{Quaternion::one(order), FieldElement::one(order.field())}});
  out.kind_ = Kind::kFractionalOrbit;
  out.gen_ = L;
  out.mod_ = rho;
  return out;
}

IdealLattice IdealLattice::two_generator(const Quaternion& L, const FieldElement& lambda) {
  const Order& order = L.order();
  const FieldElement one = FieldElement::one(order.field());
  IdealLattice out = left_generated(
      order, {QuaternionFraction{L, one}, QuaternionFraction{Quaternion::scalar(order, lambda), one}});
  out.kind_ = Kind::kTwoGenerator;
  out.gen_ = L;
  out.mod_ = lambda;
  return out;
}

IdealLattice IdealLattice::right_multiplied(const QuaternionFraction& U) const {
  const IntegralFraction u = to_integral_fraction(U);
  IntMatrix rows(hnf_.rows(), hnf_.cols());
  for (Eigen::Index i = 0; i < hnf_.rows(); ++i) {
    const Quaternion b = quaternion_from_coords(*order_, hnf_.row(i).transpose());
    rows.row(i) = quaternion_coords(b * u.numerator).transpose();
  }
  return IdealLattice(*order_, Kind::kRightMultiplied, std::move(rows), den_ * u.denominator);
}

Rational IdealLattice::coordinate_determinant() const {
  const Eigen::Index m = hnf_.cols();
  if (hnf_.rows() != m) throw std::logic_error("ideal lattice is not of full rank");
  Integer num = 1;
  for (Eigen::Index i = 0; i < m; ++i) num *= hnf_(i, i);
  Integer den = 1;
  for (Eigen::Index i = 0; i < m; ++i) den *= den_;
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational IdealLattice::determinant() const {
  const Rational dk(static_cast<long>(order_->field().discriminant()));
  return coordinate_determinant() * dk * dk;
}

bool IdealLattice::contains(const QuaternionFraction& q) const {
  const IntegralFraction f = to_integral_fraction(q);
  IntVector v = quaternion_coords(f.numerator) * den_;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) % f.denominator != 0) return false;
    v(i) /= f.denominator;
  }
  if (hnf_.rows() != hnf_.cols()) throw std::logic_error("ideal lattice is not of full rank");
  return solve_in_hnf(hnf_, v).has_value();
}

bool IdealLattice::contains(const Quaternion& L) const {
  return contains(QuaternionFraction{L, FieldElement::one(order_->field())});
}

std::vector<IntegralFraction> IdealLattice::basis() const {
  std::vector<IntegralFraction> out;
  for (Eigen::Index i = 0; i < hnf_.rows(); ++i) {
    out.push_back({quaternion_from_coords(*order_, hnf_.row(i).transpose()), den_});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Volumes and the bound

namespace {

Integer factorial(int k) {
  Integer out = 1;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

Interval power(const Interval& x, int k) {
  Interval out(Rational(1));
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

Rational rpow(const Rational& x, int k) {
  Rational out = 1;
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

}  // namespace

Interval diamond_volume(int n, const Rational& r) {
  if (n < 1 || r <= 0) throw std::invalid_argument("diamond_volume needs n >= 1 and r > 0");
  Rational scale = rpow(Rational(12), n) * rpow(r, 4 * n) / Rational(factorial(4 * n));
  scale.canonicalize();
  return scale * power(pi_interval(), 2 * n);
}

Interval jn_volume(int n, const Rational& r, const Rational& nm_T) {
  if (n < 1 || r <= 0 || nm_T <= 0) throw std::invalid_argument("jn_volume needs positive inputs");
  Rational scale = rpow(Rational(48), n) * rpow(r, 4 * n) / (Rational(factorial(4 * n)) * nm_T);
  scale.canonicalize();
  return scale * power(pi_interval(), 2 * n);
}

Interval suitability_bound(int n, const Rational& d_K, const Rational& nm_T, int precision_bits) {
  if (n < 1 || d_K <= 0 || nm_T <= 0) throw std::invalid_argument("suitability_bound needs positive inputs");
  const Interval root_fact = Interval(Rational(factorial(4 * n))).sqrt(precision_bits);
  const Interval root_3n = Interval(rpow(Rational(3), n)).sqrt(precision_bits);
  const Interval root_T = Interval(nm_T).sqrt(precision_bits);
  const Rational n2n = rpow(Rational(n), 2 * n);
  const Interval den = n2n * (power(pi_interval(), n) * root_3n);
  return round_outward(d_K * (root_fact / den * root_T), precision_bits);
}

// ---------------------------------------------------------------------------
// Suitability

FieldElement totally_positive_associate(const FieldElement& x, const UnitSignatures& units) {
  const std::uint32_t mask = sign_mask(x);
  if (mask == 0) return x;
  const auto it = units.by_signature.find(mask);
  if (it == units.by_signature.end()) {
    throw std::runtime_error("no unit with the sign vector of " + x.to_string());
  }
  return x * it->second;
}

std::vector<FieldElement> small_norm_multipliers(const Field& field, std::int64_t bound,
                                                 const UnitSignatures& units,
                                                 const SearchBudget& budget) {
  std::vector<std::pair<FieldElement, std::int64_t>> primes;
  for (std::int64_t p = 2; p < bound; ++p) {
    if (factor_integer(p).size() != 1 || factor_integer(p)[0].second != 1) continue;
    // Primes above a p that no norm can equal have norm at least p^2.
    const auto& filter = field.spec().norm_filter;
    if (filter && !filter->admits(p) && p * p >= bound) continue;
    const Factorization f = factor(FieldElement::from_integer(field, p), budget);
    for (const auto& [pi, e] : f.primes) {
      const std::int64_t np = std::llabs(norm(pi));
      if (np < bound) primes.emplace_back(pi, np);
    }
  }
  std::vector<FieldElement> out;
  std::function<void(std::size_t, const FieldElement&, std::int64_t)> grow =
      [&](std::size_t start, const FieldElement& acc, std::int64_t nacc) {
        const std::uint32_t mask = sign_mask(acc);
        const auto it = units.by_signature.find(mask);
        if (mask == 0) out.push_back(acc);
        else if (it != units.by_signature.end()) out.push_back(acc * it->second);
        for (std::size_t i = start; i < primes.size(); ++i) {
          if (nacc * primes[i].second < bound) grow(i, acc * primes[i].first, nacc * primes[i].second);
        }
      };
  grow(0, FieldElement::one(field), 1);
  std::stable_sort(out.begin(), out.end(), [](const FieldElement& a, const FieldElement& b) {
    const auto na = std::llabs(norm(a)), nb = std::llabs(norm(b));
    if (na != nb) return na < nb;
    return coords_less(a, b);
  });
  return out;
}

std::optional<Quaternion> left_quotient_mod(const ResidueQuaternions& rq, const Quaternion& L,
                                            const Quaternion& P) {
  const ResidueRing& R = rq.ring();
  const QRes l = rq.reduce(L);
  const QRes p = rq.reduce(P);
  // Columns e_j L; solve sum_j d_j (e_j L) = P over F_r.
  std::array<std::array<int, 5>, 4> a{};
  for (int j = 0; j < 4; ++j) {
    QRes e{0, 0, 0, 0};
    e[j] = R.one();
    const QRes col = rq.mul(e, l);
    for (int i = 0; i < 4; ++i) a[i][j] = col[i];
  }
  for (int i = 0; i < 4; ++i) a[i][4] = p[i];
  int row = 0;
  std::array<int, 4> pivot_col{-1, -1, -1, -1};
  for (int c = 0; c < 4 && row < 4; ++c) {
    int piv = row;
    while (piv < 4 && a[piv][c] == 0) ++piv;
    if (piv == 4) continue;
    std::swap(a[piv], a[row]);
    const int inv = R.inv(a[row][c]);
    for (auto& v : a[row]) v = R.mul(inv, v);
    for (int i = 0; i < 4; ++i) {
      if (i == row || a[i][c] == 0) continue;
      const int f = a[i][c];
      for (int k = 0; k < 5; ++k) a[i][k] = R.sub(a[i][k], R.mul(f, a[row][k]));
    }
    pivot_col[row] = c;
    ++row;
  }
  for (int i = row; i < 4; ++i)
    if (a[i][4] != 0) return std::nullopt;
  QRes d{0, 0, 0, 0};
  for (int i = 0; i < row; ++i) d[pivot_col[i]] = a[i][4];
  return rq.lift(d);
}

namespace {

bool quaternion_less(const Quaternion& a, const Quaternion& b) {
  for (int i = 0; i < 4; ++i) {
    if (coords_less(a[i], b[i])) return true;
    if (coords_less(b[i], a[i])) return false;
  }
  return false;
}

}  // namespace

SuitabilityCertificate certify_suitable(const Order& order, const FieldElement& rho,
                                        const SearchBudget& budget) {
  const Field& field = order.field();
  const UnitSignatures units = unit_signatures(field, budget);
  SuitabilityCertificate cert;
  cert.rho = totally_positive_associate(rho, units);
  const ResidueRing R(cert.rho);
  const ResidueQuaternions rq(order, R);
  cert.r = R.size();
  cert.unit_case_nn = Rational(1, static_cast<long>(cert.r) * cert.r);
  cert.rho_divides_T = R.index(order.params().T) == 0;
  const OrbitSet orbits = cert.rho_divides_T ? scan_orbits(order, R) : enumerate_orbits(order, R);
  cert.orbit_count = orbits.orbits.size();
  std::map<Subspace, int> lookup;
  for (std::size_t i = 0; i < orbits.orbits.size(); ++i) lookup.emplace(orbits.orbits[i].space, static_cast<int>(i));

  std::vector<std::optional<SuitabilityWitness>> found(orbits.orbits.size());
  std::size_t remaining = found.size();
  bool exhausted = false;
  try {
    const auto ks = small_norm_multipliers(field, cert.r, units, budget);
    for (const auto& k : ks) {
      if (remaining == 0) break;
      auto sols = norm_solutions(order, cert.rho * k, budget);
      std::sort(sols.begin(), sols.end(), quaternion_less);
      for (const auto& P : sols) {
        const QRes p = rq.reduce(P);
        if (ResidueQuaternions::is_zero(p)) continue;
        const auto it = lookup.find(orbit_of(rq, p));
        if (it == lookup.end() || found[it->second]) continue;
        SuitabilityWitness w;
        w.orbit = it->second;
        w.generator = rq.lift(orbits.orbits[w.orbit].representative);
        w.numerator = P;
        const auto D = left_quotient_mod(rq, w.generator, P);
        if (!D) throw std::logic_error("orbit member is not a left multiple of its generator");
        w.D = *D;
        const auto C = divide_exact(P - w.D * w.generator, cert.rho);
        if (!C) throw std::logic_error("P - D L is not divisible by rho");
        w.C = *C;
        w.k = k;
        w.nn = double_norm(QuaternionFraction{P, cert.rho});
        found[w.orbit] = std::move(w);
        --remaining;
      }
    }
  } catch (const BudgetExhausted&) {
    exhausted = true;
  }
  cert.exhaustive = units.complete && !exhausted;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (found[i]) {
      cert.witnesses.push_back(std::move(*found[i]));
    } else {
      cert.missing.push_back(static_cast<int>(i));
      cert.missing_generators.push_back(rq.lift(orbits.orbits[i].representative));
    }
  }
  return cert;
}

std::optional<QuaternionFraction> short_vector_witness(const IdealLattice& lat, const SearchBudget& budget) {
  if (lat.kind() != IdealLattice::Kind::kFractionalOrbit) {
    throw std::invalid_argument("short_vector_witness needs a lattice H(L/rho)+H");
  }
  const Order& order = lat.order();
  const Field& field = order.field();
  const UnitSignatures units = unit_signatures(field, budget);
  const FieldElement rho = totally_positive_associate(*lat.modulus(), units);
  const ResidueRing R(rho);
  const ResidueQuaternions rq(order, R);
  const Subspace target = orbit_of(rq, rq.reduce(*lat.generator()));
  try {
    for (const auto& k : small_norm_multipliers(field, R.size(), units, budget)) {
      auto sols = norm_solutions(order, rho * k, budget);
      std::sort(sols.begin(), sols.end(), quaternion_less);
      for (const auto& P : sols) {
        const QRes p = rq.reduce(P);
        if (ResidueQuaternions::is_zero(p) || !(orbit_of(rq, p) == target)) continue;
        QuaternionFraction w{P, rho};
        if (!lat.contains(w)) throw std::logic_error("orbit witness outside its lattice");
        return w;
      }
    }
  } catch (const BudgetExhausted&) {
  }
  return std::nullopt;
}

}  // namespace quatuniv
