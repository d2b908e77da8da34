// Left ideals of H as lattices, spherical-diamond volumes, the suitability
// bound and short-vector certificates.
//
// A lattice is stored exactly over the omega-coordinates of H, i.e. the
// vector [x_1..x_n, y_1..y_n, z_1..z_n, w_1..w_n] of integer coordinates.
// The map f to R^{4n} only rescales volumes: det f(I) = det_coord(I) * d_K^2.

#pragma once

#include "quatuniv/residue.hpp"

namespace quatuniv {

/// Integer omega-coordinates of a quaternion (length 4n).
IntVector quaternion_coords(const Quaternion& L);
Quaternion quaternion_from_coords(const Order& order, const IntVector& v);

/// P / D with D a positive rational integer and P in H.
struct IntegralFraction {
  Quaternion numerator;
  Integer denominator;
};
IntegralFraction to_integral_fraction(const QuaternionFraction& q);

class IdealLattice {
 public:
  enum class Kind { kWholeOrder, kFractionalOrbit, kTwoGenerator, kLeftGenerated, kRightMultiplied };

  static IdealLattice whole_order(const Order& order);
  /// H (L/rho) + H; requires rho prime, rho | nm(L), rho not dividing L.
  static IdealLattice fractional_orbit(const Quaternion& L, const FieldElement& rho);
  /// H L + H lambda.
  static IdealLattice two_generator(const Quaternion& L, const FieldElement& lambda);
  /// Left H-module generated by the given fractions.
  static IdealLattice left_generated(const Order& order, const std::vector<QuaternionFraction>& gens);
  /// I * U (again a left ideal).
  IdealLattice right_multiplied(const QuaternionFraction& U) const;

  Kind kind() const noexcept { return kind_; }
  const Order& order() const noexcept { return *order_; }
  /// Row-style HNF of the numerator lattice; the ideal is rows / denominator.
  const IntMatrix& hnf() const noexcept { return hnf_; }
  const Integer& denominator() const noexcept { return den_; }
  /// Stored generating data: (L, rho) or (L, lambda) for the structured kinds.
  const std::optional<Quaternion>& generator() const noexcept { return gen_; }
  const std::optional<FieldElement>& modulus() const noexcept { return mod_; }

  /// Covolume of the coordinate lattice (index relative to H when inside H).
  Rational coordinate_determinant() const;
  /// det f(I) = coordinate_determinant * d_K^2.
  Rational determinant() const;

  bool contains(const Quaternion& L) const;
  bool contains(const QuaternionFraction& q) const;
  /// Every element lies in H.
  bool is_integral() const { return den_ == 1; }
  std::vector<IntegralFraction> basis() const;

  friend bool operator==(const IdealLattice& a, const IdealLattice& b) {
    return a.order_ == b.order_ && a.den_ == b.den_ && a.hnf_ == b.hnf_;
  }

 private:
  IdealLattice(const Order& order, Kind kind, IntMatrix rows, Integer den);

  const Order* order_;
  Kind kind_;
  IntMatrix hnf_;
  Integer den_;
  std::optional<Quaternion> gen_;
  std::optional<FieldElement> mod_;
};

/// pi^{2n} 12^n r^{4n} / (4n)!
Interval diamond_volume(int n, const Rational& r);
/// pi^{2n} 48^n r^{4n} / ((4n)! NmT)
Interval jn_volume(int n, const Rational& r, const Rational& nm_T);
/// sqrt((4n)!) / (pi^n 3^{n/2} n^{2n}) * d_K * sqrt(NmT)
Interval suitability_bound(int n, const Rational& d_K, const Rational& nm_T, int precision_bits = 96);

/// Totally positive k with Nm(k) < bound, one per class modulo totally
/// positive units, built as products of the primes over each p < bound.
/// Complete whenever every totally positive unit is a square.
std::vector<FieldElement> small_norm_multipliers(const Field& field, std::int64_t bound,
                                                 const UnitSignatures& units,
                                                 const SearchBudget& budget = {});

struct SuitabilityWitness {
  int orbit = -1;
  Quaternion generator;  // L, a lift of the orbit generator
  Quaternion numerator;  // P; the witness is P / rho
  Quaternion D, C;       // P = D L + C rho
  FieldElement k;        // nm(P) = rho k
  Rational nn;           // NN(P / rho) = |Nm(k)| / r
};

struct SuitabilityCertificate {
  FieldElement rho;  // totally positive associate of the requested prime
  int r = 0;
  bool rho_divides_T = false;
  Rational unit_case_nn;  // NN(1/rho) for the case rho not dividing nm(L)
  std::vector<SuitabilityWitness> witnesses;
  std::vector<int> missing;       // orbits without a witness
  std::vector<Quaternion> missing_generators;
  bool exhaustive = false;        // every candidate numerator was examined
  std::size_t orbit_count = 0;

  bool certified() const { return missing.empty(); }
  /// No witness exists for some orbit (the search was exhaustive).
  bool refuted() const { return !missing.empty() && exhaustive; }
};

/// Witness search for H (L/rho) + H over the numerators P with nm(P) = rho k,
/// |Nm(k)| < r. Every element of the ideal has this shape, so the search is
/// complete once all multipliers k have been tried.
SuitabilityCertificate certify_suitable(const Order& order, const FieldElement& rho,
                                        const SearchBudget& budget = {});

/// A nonzero element of a fractional-orbit lattice with NN < 1, or nullopt.
std::optional<QuaternionFraction> short_vector_witness(const IdealLattice& lat,
                                                       const SearchBudget& budget = {});

/// D with D L = P mod rho when P lies in the orbit of L.
std::optional<Quaternion> left_quotient_mod(const ResidueQuaternions& rq, const Quaternion& L,
                                            const Quaternion& P);

/// rho times the unit that makes it totally positive.
FieldElement totally_positive_associate(const FieldElement& x, const UnitSignatures& units);

}  // namespace quatuniv
