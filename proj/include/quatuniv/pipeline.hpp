// End-to-end drivers: PID and universality certificates, representation
// search and counting, and the class-number-two machinery for (1,1,1,0).

#pragma once

#include "quatuniv/lattice.hpp"

namespace quatuniv {

/// Enclosure of the suitability bound for the order.
Interval order_bound(const Order& order, int precision_bits = 96);

/// Prime powers m <= floor(bound) passing the field's norm-residue filter.
std::vector<std::int64_t> admissible_prime_norms(const Order& order);
std::vector<std::int64_t> admissible_prime_norms(const Field& field, const Interval& bound);

/// Totally positive prime of norm m, or nullopt when none exists.
std::optional<FieldElement> find_prime_of_norm(const Field& field, std::int64_t m,
                                               const SearchBudget& budget = {});

struct PrimeObligation {
  FieldElement prime;
  std::int64_t norm = 0;
  bool divides_T = false;
  SuitabilityCertificate certificate;
  bool discharged() const { return certificate.certified(); }
};

struct RationalPrimeSplit {
  std::int64_t p = 0;
  Factorization factorization;
};

struct PidCertificate {
  OrderParams params;
  Interval bound;
  std::vector<std::int64_t> admissible_norms;
  std::vector<RationalPrimeSplit> splittings;  // every rational p <= floor(bound)
  Factorization T_factorization;
  std::vector<PrimeObligation> obligations;
  std::vector<std::string> undischarged;
  bool budget_exhausted = false;

  bool certified() const { return undischarged.empty() && !budget_exhausted; }
};

PidCertificate verify_pid(const Order& order, const SearchBudget& budget = {});

struct UniversalityCertificate {
  PidCertificate pid;
  bool T_squarefree = false;
  UnitSignatures units;
  std::vector<std::string> failures;

  bool universal() const { return failures.empty(); }
};

UniversalityCertificate verify_universality(const Order& order, const SearchBudget& budget = {});

struct RepresentationReport {
  FieldElement lambda;
  std::vector<Quaternion> solutions;  // coordinates (x, y, z, w) of each solution
  std::size_t count = 0;
  std::optional<Integer> formula;     // jacobi_count, (1,1,1,1) only
};

/// Every solution of q(x, y, z, w) = lambda, sorted.
RepresentationReport represent(const Order& order, const FieldElement& lambda,
                               const SearchBudget& budget = {});

/// True for the order (1,1,1,1), the only one with a counting formula here.
bool is_hurwitz_type(const Order& order);
/// 24 * sum of |O_K/delta| over odd divisors delta of lambda (up to units).
Integer jacobi_count(const Order& order, const FieldElement& lambda, const SearchBudget& budget = {});

struct SquarefreeIdeal {
  FieldElement lambda;
  Quaternion L;
  IdealLattice lattice;
};

/// I = H L + H lambda with det f(I) = d_K^2 Nm(lambda)^2 (checked).
SquarefreeIdeal build_squarefree_ideal(const Order& order, const FieldElement& lambda,
                                       const SearchBudget& budget = {});

struct PrincipalityResult {
  std::optional<Quaternion> generator;  // H D = I
  bool exhaustive = false;              // no generator exists when unset and exhaustive
};

PrincipalityResult test_ideal_principal(const IdealLattice& I, const FieldElement& lambda,
                                        const SearchBudget& budget = {});

/// The order (1,1,1,0), rho_7 and the non-principal ideal S = H(1+a+2b) + H rho_7.
struct ClassTwoContext {
  std::shared_ptr<const Order> order;
  FieldElement rho7;
  Quaternion s_generator;
  IdealLattice S;

  static ClassTwoContext create(std::shared_ptr<const Field> field);
};

struct Transporter {
  QuaternionFraction U;  // I = S U
  FieldElement unit;     // nm(U) = unit * lambda / rho_7
};

/// U with S U = I, found as rho_7 U in I of norm lambda rho_7.
std::optional<Transporter> transporter_search(const ClassTwoContext& ctx, const IdealLattice& I,
                                              const FieldElement& lambda, const SearchBudget& budget = {});

struct ThetaCertificate {
  FieldElement theta;
  Quaternion P;               // P in S, nm(P) = rho_7 theta
  Quaternion representation;  // nm = theta
};

/// nullopt when no such P or representation exists (the searches are
/// complete); throws BudgetExhausted when a search runs out.
std::optional<ThetaCertificate> theta_certificate(const ClassTwoContext& ctx, const FieldElement& theta,
                                                  const SearchBudget& budget = {});

struct MultipleRepresentation {
  FieldElement lambda;
  bool principal = false;
  Quaternion solution;  // nm(solution) = lambda theta
};

/// A representation of lambda*theta; nullopt when a sub-search runs out.
std::optional<MultipleRepresentation> represent_multiple(const ClassTwoContext& ctx,
                                                         const ThetaCertificate& cert,
                                                         const FieldElement& lambda,
                                                         const SearchBudget& budget = {});

/// Totally positive squarefree elements with norm <= max_norm, one per
/// associate class, ordered by norm.
std::vector<FieldElement> squarefree_totally_positive(const Field& field, std::int64_t max_norm,
                                                      const SearchBudget& budget = {});

}  // namespace quatuniv
