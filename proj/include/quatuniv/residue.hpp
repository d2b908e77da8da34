// Residue rings O_K/rho and H/rhoH, the 2x2 matrix model psi, and rho-orbits.
//
// For a prime rho the ring O_K/rho is the finite field F_r, r = |Nm(rho)|.
// Residues are small integers (indices into the canonical coset list) and
// all arithmetic goes through precomputed tables.

#pragma once

#include "quatuniv/quatorder.hpp"

#include <array>
#include <map>

namespace quatuniv {

class ResidueRing {
 public:
  /// Throws std::invalid_argument when rho is zero, a unit or not prime.
  explicit ResidueRing(const FieldElement& rho);

  const Field& field() const { return modulus_.field(); }
  const FieldElement& modulus() const noexcept { return modulus_; }
  int size() const noexcept { return r_; }

  int index(const FieldElement& x) const;
  /// Canonical coset representative with the given index.
  const FieldElement& element(int i) const { return reps_[i]; }
  const std::vector<FieldElement>& representatives() const noexcept { return reps_; }

  int zero() const noexcept { return 0; }
  int one() const noexcept { return one_; }
  int add(int a, int b) const { return add_[a * r_ + b]; }
  int mul(int a, int b) const { return mul_[a * r_ + b]; }
  int neg(int a) const { return neg_[a]; }
  int sub(int a, int b) const { return add(a, neg(b)); }
  int inv(int a) const;  // throws std::domain_error on 0

 private:
  FieldElement modulus_;
  ModulusReducer reducer_;
  int r_ = 0;
  int one_ = 0;
  std::vector<FieldElement> reps_;
  std::vector<int> add_, mul_, neg_, inv_;
};

/// Residue class of a quaternion: component indices into a ResidueRing.
using QRes = std::array<int, 4>;

class ResidueQuaternions {
 public:
  ResidueQuaternions(const Order& order, const ResidueRing& ring);

  const Order& order() const noexcept { return *order_; }
  const ResidueRing& ring() const noexcept { return *ring_; }
  std::int64_t count() const noexcept { return count_; }  // r^4

  QRes reduce(const Quaternion& L) const;
  Quaternion lift(const QRes& q) const;
  QRes add(const QRes& a, const QRes& b) const;
  QRes scale(int k, const QRes& a) const;
  QRes mul(const QRes& a, const QRes& b) const;
  QRes conj(const QRes& a) const;
  int nm(const QRes& a) const;
  static bool is_zero(const QRes& a) { return a == QRes{0, 0, 0, 0}; }

  std::int64_t index(const QRes& a) const;
  QRes from_index(std::int64_t i) const;

 private:
  const Order* order_;
  const ResidueRing* ring_;
  std::int64_t count_;
  int A_, B_, mu_, nu_;
  std::array<std::array<QRes, 4>, 4> table_;
};

/// F_r-subspace of (H/rhoH) = F_r^4 kept in reduced row echelon form, so two
/// subspaces are equal iff their bases are equal.
struct Subspace {
  std::vector<QRes> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  friend bool operator==(const Subspace&, const Subspace&) = default;
  friend auto operator<=>(const Subspace&, const Subspace&) = default;
};

Subspace span(const ResidueRing& ring, std::vector<QRes> gens);
bool in_span(const ResidueRing& ring, const Subspace& s, const QRes& v);
/// {D L : D in H/rhoH}, spanned by L, aL, bL, abL.
Subspace orbit_of(const ResidueQuaternions& rq, const QRes& L);

struct Orbit {
  Subspace space;
  QRes representative;    // a generator, as residues
  std::int64_t size = 0;  // r^dim, zero included
  std::int64_t generators = 0;  // nonzero residues whose orbit is this one
};

struct OrbitSet {
  FieldElement rho;
  int r = 0;
  std::vector<Orbit> orbits;
  bool exhaustive_checked = false;
  /// Index of the orbit containing a nonzero residue of norm 0, or -1.
  int find(const ResidueRing& ring, const QRes& L) const;
};

/// Number of distinct values of a x^2 + b x + c on O_K/rho.
int count_quadratic_values(const FieldElement& a, const FieldElement& b, const FieldElement& c,
                           const FieldElement& rho);

/// (e, f) with e^2 + mu e + A + nu f + B f^2 = 0 mod rho; needs rho not dividing T.
std::pair<FieldElement, FieldElement> find_precursor(const Order& order, const ResidueRing& ring);

struct Mat2 {
  int X = 0, Y = 0, Z = 0, W = 0;  // [[X, Y], [Z, W]]
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

struct PsiMap {
  FieldElement rho;
  FieldElement e, f;
  /// Row k gives entry k of (X, Y, Z, W) as a form in (x, y, z, w).
  std::array<std::array<int, 4>, 4> coeff{};
};

PsiMap build_psi(const Order& order, const ResidueRing& ring);
Mat2 psi_apply(const PsiMap& psi, const ResidueRing& ring, const QRes& L);
QRes psi_inverse(const PsiMap& psi, const ResidueRing& ring, const Mat2& m);
Mat2 mat_mul(const ResidueRing& ring, const Mat2& a, const Mat2& b);
int mat_det(const ResidueRing& ring, const Mat2& a);

/// Orbits via psi: one per line of F_r^2 (rows of rank-one matrices).
/// With exhaustive_check every residue of H/rhoH is scanned as well and
/// the partition properties are asserted (throws std::logic_error).
OrbitSet enumerate_orbits(const Order& order, const ResidueRing& ring, bool exhaustive_check = false);
/// Orbits by scanning all r^4 residues; valid for any prime, including rho | T.
OrbitSet scan_orbits(const Order& order, const ResidueRing& ring);

/// D with D (1 + b) = L exactly when 2 divides nm(L); order must be (1,1,1,1).
std::optional<Quaternion> special_orbit_2(const Quaternion& L);

/// L + C rho with rho || nm; preconditions: rho prime, rho not dividing T or L,
/// rho | nm(L).
Quaternion hensel_lift(const ResidueRing& ring, const Quaternion& L);

/// For each orbit, a quaternion in it of norm u*rho (u a totally positive
/// unit, so u = 1 when every such unit is a square), smallest coordinates
/// first; nullopt where none exists. rho must be totally positive.
std::vector<std::optional<Quaternion>> orbit_norm_representatives(const Order& order,
                                                                   const ResidueRing& ring,
                                                                   const OrbitSet& orbits,
                                                                   const SearchBudget& budget = {});

}  // namespace quatuniv
