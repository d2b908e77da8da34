#include "quatuniv/residue.hpp"

#include <algorithm>
#include <set>

namespace quatuniv {

namespace {

constexpr int kMaxResidueField = 2048;

FieldElement checked_prime(const FieldElement& rho) {
  if (rho.is_zero()) throw std::invalid_argument("residue ring modulo zero");
  if (is_unit(rho)) throw std::invalid_argument("residue ring modulo a unit");
  if (!is_prime_element(rho)) throw std::invalid_argument("modulus " + rho.to_string() + " is not prime");
  return rho;
}

}  // namespace

// ---------------------------------------------------------------------------
// ResidueRing

ResidueRing::ResidueRing(const FieldElement& rho) : modulus_(checked_prime(rho)), reducer_(rho) {
  if (reducer_.size() > kMaxResidueField) {
    throw std::invalid_argument("residue field of size " + std::to_string(reducer_.size()) +
                                " exceeds the table limit");
  }
  r_ = static_cast<int>(reducer_.size());
  reps_.reserve(r_);
  for (int i = 0; i < r_; ++i) reps_.push_back(reducer_.element(i));
  one_ = index(FieldElement::one(field()));
  add_.resize(static_cast<std::size_t>(r_) * r_);
  mul_.resize(static_cast<std::size_t>(r_) * r_);
  neg_.resize(r_);
  inv_.assign(r_, -1);
  for (int a = 0; a < r_; ++a) {
    neg_[a] = index(-reps_[a]);
    for (int b = a; b < r_; ++b) {
      const int s = index(reps_[a] + reps_[b]);
      const int p = index(reps_[a] * reps_[b]);
      add_[a * r_ + b] = add_[b * r_ + a] = s;
      mul_[a * r_ + b] = mul_[b * r_ + a] = p;
      if (p == one_) {
        inv_[a] = b;
        inv_[b] = a;
      }
    }
  }
}

int ResidueRing::index(const FieldElement& x) const { return static_cast<int>(reducer_.index(x)); }

int ResidueRing::inv(int a) const {
  if (a == 0 || inv_[a] < 0) throw std::domain_error("inverse of zero residue");
  return inv_[a];
}

// ---------------------------------------------------------------------------
// ResidueQuaternions

ResidueQuaternions::ResidueQuaternions(const Order& order, const ResidueRing& ring)
    : order_(&order), ring_(&ring) {
  if (&order.field() != &ring.field()) throw std::invalid_argument("order and residue ring over different fields");
  const std::int64_t r = ring.size();
  count_ = r * r * r * r;
  const OrderParams& p = order.params();
  A_ = ring.index(p.A);
  B_ = ring.index(p.B);
  mu_ = ring.index(p.mu);
  nu_ = ring.index(p.nu);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) table_[i][j][k] = ring.index(order.basis_product(i, j)[k]);
}

QRes ResidueQuaternions::reduce(const Quaternion& L) const {
  return {ring_->index(L[0]), ring_->index(L[1]), ring_->index(L[2]), ring_->index(L[3])};
}

Quaternion ResidueQuaternions::lift(const QRes& q) const {
  return Quaternion(*order_, {ring_->element(q[0]), ring_->element(q[1]), ring_->element(q[2]),
                              ring_->element(q[3])});
}

QRes ResidueQuaternions::add(const QRes& a, const QRes& b) const {
  QRes out;
  for (int i = 0; i < 4; ++i) out[i] = ring_->add(a[i], b[i]);
  return out;
}

QRes ResidueQuaternions::scale(int k, const QRes& a) const {
  QRes out;
  for (int i = 0; i < 4; ++i) out[i] = ring_->mul(k, a[i]);
  return out;
}

QRes ResidueQuaternions::mul(const QRes& a, const QRes& b) const {
  const ResidueRing& R = *ring_;
  QRes out{0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < 4; ++j) {
      if (b[j] == 0) continue;
      const int ab = R.mul(a[i], b[j]);
      for (int k = 0; k < 4; ++k) out[k] = R.add(out[k], R.mul(ab, table_[i][j][k]));
    }
  }
  return out;
}

QRes ResidueQuaternions::conj(const QRes& a) const {
  const ResidueRing& R = *ring_;
  const int x = R.sub(R.add(a[0], R.mul(mu_, a[1])), R.mul(nu_, a[3]));
  return {x, R.neg(a[1]), R.neg(a[2]), R.neg(a[3])};
}

int ResidueQuaternions::nm(const QRes& a) const {
  const ResidueRing& R = *ring_;
  const auto [x, y, z, w] = a;
  const int first = R.add(R.add(R.mul(x, x), R.mul(mu_, R.mul(x, y))), R.mul(A_, R.mul(y, y)));
  const int middle = R.mul(nu_, R.sub(R.mul(y, z), R.mul(x, w)));
  const int last = R.mul(B_, R.add(R.add(R.mul(z, z), R.mul(mu_, R.mul(z, w))), R.mul(A_, R.mul(w, w))));
  return R.add(R.add(first, middle), last);
}

std::int64_t ResidueQuaternions::index(const QRes& a) const {
  const std::int64_t r = ring_->size();
  return ((static_cast<std::int64_t>(a[0]) * r + a[1]) * r + a[2]) * r + a[3];
}

QRes ResidueQuaternions::from_index(std::int64_t i) const {
  const std::int64_t r = ring_->size();
  QRes out;
  for (int k = 3; k >= 0; --k) {
    out[k] = static_cast<int>(i % r);
    i /= r;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subspaces

Subspace span(const ResidueRing& R, std::vector<QRes> rows) {
  std::size_t rank = 0;
  for (int col = 0; col < 4 && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const int inv = R.inv(rows[rank][col]);
    for (auto& v : rows[rank]) v = R.mul(inv, v);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      const int f = rows[i][col];
      for (int k = 0; k < 4; ++k) rows[i][k] = R.sub(rows[i][k], R.mul(f, rows[rank][k]));
    }
    ++rank;
  }
  rows.resize(rank);
  return Subspace{std::move(rows)};
}

bool in_span(const ResidueRing& R, const Subspace& s, const QRes& v) {
  QRes rest = v;
  for (const auto& row : s.basis) {
    int col = 0;
    while (row[col] == 0) ++col;
    const int f = rest[col];
    if (f == 0) continue;
    for (int k = 0; k < 4; ++k) rest[k] = R.sub(rest[k], R.mul(f, row[k]));
  }
  return ResidueQuaternions::is_zero(rest);
}

Subspace orbit_of(const ResidueQuaternions& rq, const QRes& L) {
  std::vector<QRes> gens;
  for (int j = 0; j < 4; ++j) {
    QRes e{0, 0, 0, 0};
    e[j] = rq.ring().one();
    gens.push_back(rq.mul(e, L));
  }
  return span(rq.ring(), std::move(gens));
}

int OrbitSet::find(const ResidueRing& ring, const QRes& L) const {
  if (ResidueQuaternions::is_zero(L)) return -1;
  for (std::size_t i = 0; i < orbits.size(); ++i)
    if (in_span(ring, orbits[i].space, L)) return static_cast<int>(i);
  return -1;
}

// ---------------------------------------------------------------------------

int count_quadratic_values(const FieldElement& a, const FieldElement& b, const FieldElement& c,
                           const FieldElement& rho) {
  const ResidueRing R(rho);
  const int ia = R.index(a), ib = R.index(b), ic = R.index(c);
  if (ia == 0 && ib == 0) throw std::invalid_argument("quadratic with a = b = 0 mod rho");
  std::set<int> values;
  for (int x = 0; x < R.size(); ++x) {
    values.insert(R.add(R.add(R.mul(ia, R.mul(x, x)), R.mul(ib, x)), ic));
  }
  return static_cast<int>(values.size());
}

std::pair<FieldElement, FieldElement> find_precursor(const Order& order, const ResidueRing& R) {
  const OrderParams& p = order.params();
  if (R.index(p.T) == 0) throw std::invalid_argument("rho divides T: no precursor");
  const int A = R.index(p.A), B = R.index(p.B), mu = R.index(p.mu), nu = R.index(p.nu);
  for (int e = 0; e < R.size(); ++e) {
    const int ee = R.add(R.add(R.mul(e, e), R.mul(mu, e)), A);
    for (int f = 0; f < R.size(); ++f) {
      const int v = R.add(ee, R.add(R.mul(nu, f), R.mul(B, R.mul(f, f))));
      if (v == 0) return {R.element(e), R.element(f)};
    }
  }
  throw std::logic_error("no precursor found although rho does not divide T");
}

PsiMap build_psi(const Order& order, const ResidueRing& R) {
  PsiMap psi;
  psi.rho = R.modulus();
  std::tie(psi.e, psi.f) = find_precursor(order, R);
  const OrderParams& p = order.params();
  const int e = R.index(psi.e), f = R.index(psi.f);
  const int B = R.index(p.B), mu = R.index(p.mu), nu = R.index(p.nu), one = R.one();
  const int e_mu = R.add(e, mu);
  const int Bf = R.mul(B, f);
  const int Bf_nu = R.add(Bf, nu);
  // X = x + (e+mu) y + Bf w
  psi.coeff[0] = {one, e_mu, 0, Bf};
  // Y = -f y + z + (e+mu) w
  psi.coeff[1] = {0, R.neg(f), one, e_mu};
  // Z = -(Bf+nu) y - B z + Be w
  psi.coeff[2] = {0, R.neg(Bf_nu), R.neg(B), R.mul(B, e)};
  // W = x - e y - (Bf+nu) w
  psi.coeff[3] = {one, R.neg(e), 0, R.neg(Bf_nu)};
  return psi;
}

Mat2 psi_apply(const PsiMap& psi, const ResidueRing& R, const QRes& L) {
  int v[4];
  for (int k = 0; k < 4; ++k) {
    int acc = 0;
    for (int j = 0; j < 4; ++j) acc = R.add(acc, R.mul(psi.coeff[k][j], L[j]));
    v[k] = acc;
  }
  return Mat2{v[0], v[1], v[2], v[3]};
}

QRes psi_inverse(const PsiMap& psi, const ResidueRing& R, const Mat2& m) {
  std::array<std::array<int, 5>, 4> a;
  const int rhs[4] = {m.X, m.Y, m.Z, m.W};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[i][j] = psi.coeff[i][j];
    a[i][4] = rhs[i];
  }
  for (int c = 0; c < 4; ++c) {
    int p = c;
    while (p < 4 && a[p][c] == 0) ++p;
    if (p == 4) throw std::logic_error("psi is singular modulo rho");
    std::swap(a[p], a[c]);
    const int inv = R.inv(a[c][c]);
    for (auto& v : a[c]) v = R.mul(inv, v);
    for (int i = 0; i < 4; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const int f = a[i][c];
      for (int k = 0; k < 5; ++k) a[i][k] = R.sub(a[i][k], R.mul(f, a[c][k]));
    }
  }
  return {a[0][4], a[1][4], a[2][4], a[3][4]};
}

Mat2 mat_mul(const ResidueRing& R, const Mat2& a, const Mat2& b) {
  return Mat2{R.add(R.mul(a.X, b.X), R.mul(a.Y, b.Z)), R.add(R.mul(a.X, b.Y), R.mul(a.Y, b.W)),
              R.add(R.mul(a.Z, b.X), R.mul(a.W, b.Z)), R.add(R.mul(a.Z, b.Y), R.mul(a.W, b.W))};
}

int mat_det(const ResidueRing& R, const Mat2& a) { return R.sub(R.mul(a.X, a.W), R.mul(a.Y, a.Z)); }

// ---------------------------------------------------------------------------
// Orbits

OrbitSet scan_orbits(const Order& order, const ResidueRing& R) {
  const ResidueQuaternions rq(order, R);
  std::map<Subspace, std::size_t> slot;
  OrbitSet out;
  out.rho = R.modulus();
  out.r = R.size();
  for (std::int64_t i = 1; i < rq.count(); ++i) {
    const QRes L = rq.from_index(i);
    if (rq.nm(L) != 0) continue;
    Subspace s = orbit_of(rq, L);
    auto [it, fresh] = slot.try_emplace(s, out.orbits.size());
    if (fresh) {
      std::int64_t size = 1;
      for (int k = 0; k < s.dim(); ++k) size *= R.size();
      out.orbits.push_back(Orbit{std::move(s), L, size, 0});
    }
    ++out.orbits[it->second].generators;
  }
  out.exhaustive_checked = true;
  return out;
}

OrbitSet enumerate_orbits(const Order& order, const ResidueRing& R, bool exhaustive_check) {
  const PsiMap psi = build_psi(order, R);
  const ResidueQuaternions rq(order, R);
  const std::int64_t r = R.size();
  OrbitSet out;
  out.rho = R.modulus();
  out.r = R.size();
  auto add_line = [&](int v1, int v2) {
    const QRes L = psi_inverse(psi, R, Mat2{v1, v2, 0, 0});
    Subspace s = orbit_of(rq, L);
    if (s.dim() != 2) throw std::logic_error("psi orbit does not have dimension 2");
    out.orbits.push_back(Orbit{std::move(s), L, r * r, r * r - 1});
  };
  add_line(0, R.one());
  for (int a = 0; a < R.size(); ++a) add_line(R.one(), a);

  if (exhaustive_check) {
    const OrbitSet scan = scan_orbits(order, R);
    std::set<Subspace> mine, theirs;
    for (const auto& o : out.orbits) mine.insert(o.space);
    for (const auto& o : scan.orbits) {
      theirs.insert(o.space);
      if (o.size != r * r) throw std::logic_error("orbit size differs from r^2");
      if (o.generators != r * r - 1) throw std::logic_error("orbits are not disjoint");
    }
    if (mine != theirs || mine.size() != static_cast<std::size_t>(r + 1)) {
      throw std::logic_error("psi orbits disagree with the exhaustive scan");
    }
    out.exhaustive_checked = true;
  }
  return out;
}

std::optional<Quaternion> special_orbit_2(const Quaternion& L) {
  const Order& order = L.order();
  const Field& field = order.field();
  const OrderParams& p = order.params();
  for (const FieldElement* x : {&p.A, &p.B, &p.mu, &p.nu}) {
    if (x->as_integer() != 1) throw std::invalid_argument("special_orbit_2 needs the (1,1,1,1) order");
  }
  const FieldElement two = FieldElement::from_integer(field, 2);
  auto half = [&](const FieldElement& v) { return divide_exact(v, two); };
  const auto d0 = half(L[0] + L[2]), d1 = half(L[1] + L[3]);
  const auto d2 = half(L[2] - L[0]), d3 = half(L[3] - L[1]);
  if (!d0 || !d1 || !d2 || !d3) return std::nullopt;
  return Quaternion(order, {*d0, *d1, *d2, *d3});
}

Quaternion hensel_lift(const ResidueRing& R, const Quaternion& L) {
  const Order& order = L.order();
  const FieldElement& rho = R.modulus();
  if (R.index(order.params().T) == 0) throw std::invalid_argument("hensel_lift: rho divides T");
  if (divides(rho, L)) throw std::invalid_argument("hensel_lift: rho divides L");
  const FieldElement n0 = nm(L);
  if (!divides(rho, n0)) throw std::invalid_argument("hensel_lift: rho does not divide nm(L)");
  const FieldElement rho2 = rho * rho;
  if (!divides(rho2, n0)) return L;
  // nm(L + C rho) = nm(L) + rho <L, C> + rho^2 nm(C); some basis C has <L, C> != 0 mod rho.
  for (int j = 0; j < 4; ++j) {
    const Quaternion lifted = L + Quaternion::basis(order, j) * rho;
    if (!divides(rho2, nm(lifted))) return lifted;
  }
  throw std::logic_error("hensel_lift: all partial derivatives vanish mod rho");
}

std::vector<std::optional<Quaternion>> orbit_norm_representatives(const Order& order,
                                                                   const ResidueRing& R,
                                                                   const OrbitSet& orbits,
                                                                   const SearchBudget& budget) {
  const FieldElement& rho = R.modulus();
  if (!is_totally_positive(rho)) throw std::invalid_argument("orbit representatives need rho >> 0");
  const ResidueQuaternions rq(order, R);
  auto sols = norm_solutions(order, rho, budget);
  std::sort(sols.begin(), sols.end(), [](const Quaternion& a, const Quaternion& b) {
    for (int i = 0; i < 4; ++i) {
      if (coords_less(a[i], b[i])) return true;
      if (coords_less(b[i], a[i])) return false;
    }
    return false;
  });
  std::vector<std::optional<Quaternion>> out(orbits.orbits.size());
  for (const auto& P : sols) {
    const int k = orbits.find(R, rq.reduce(P));
    if (k >= 0 && !out[k]) out[k] = P;
  }
  return out;
}

}  // namespace quatuniv
