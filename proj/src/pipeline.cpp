#include "quatuniv/pipeline.hpp"

#include <algorithm>
#include <sstream>

namespace quatuniv {

namespace {

std::int64_t floor_of(const Rational& q) { return to_int64(floor_div(q.get_num(), q.get_den())); }

bool is_rational_prime(std::int64_t p) {
  const auto f = factor_integer(p);
  return p > 1 && f.size() == 1 && f[0].second == 1;
}

std::string describe(const FieldElement& x) { return "[" + x.to_string() + "]"; }

}  // namespace

Interval order_bound(const Order& order, int precision_bits) {
  const Field& field = order.field();
  const std::int64_t nm_T = std::llabs(norm(order.params().T));
  return suitability_bound(field.degree(), Rational(static_cast<long>(field.discriminant())),
                           Rational(static_cast<long>(nm_T)), precision_bits);
}

std::vector<std::int64_t> admissible_prime_norms(const Field& field, const Interval& bound) {
  std::vector<std::int64_t> out;
  const std::int64_t top = floor_of(bound.hi());
  const auto& filter = field.spec().norm_filter;
  for (std::int64_t m = 2; m <= top; ++m) {
    if (!is_prime_power(m)) continue;
    if (filter && !filter->admits(m)) continue;
    out.push_back(m);
  }
  return out;
}

std::vector<std::int64_t> admissible_prime_norms(const Order& order) {
  return admissible_prime_norms(order.field(), order_bound(order));
}

std::optional<FieldElement> find_prime_of_norm(const Field& field, std::int64_t m, const SearchBudget& budget) {
  std::int64_t p = 0;
  if (!is_prime_power(m, &p)) return std::nullopt;
  const Factorization f = factor(FieldElement::from_integer(field, p), budget);
  for (const auto& [pi, e] : f.primes) {
    if (std::llabs(norm(pi)) != m) continue;
    const UnitSignatures units = unit_signatures(field, budget);
    return totally_positive_associate(pi, units);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// PID and universality

PidCertificate verify_pid(const Order& order, const SearchBudget& budget) {
  const Field& field = order.field();
  PidCertificate c;
  c.params = order.params();
  c.bound = order_bound(order);
  c.admissible_norms = admissible_prime_norms(field, c.bound);
  const std::int64_t top = floor_of(c.bound.hi());

  const UnitSignatures units = unit_signatures(field, budget);
  auto add_prime = [&](const FieldElement& pi, bool from_T) {
    for (auto& ob : c.obligations) {
      if (are_associates(ob.prime, pi)) {
        ob.divides_T = ob.divides_T || from_T;
        return;
      }
    }
    PrimeObligation ob;
    ob.prime = units.by_signature.count(sign_mask(pi)) ? totally_positive_associate(pi, units) : pi;
    ob.norm = std::llabs(norm(pi));
    ob.divides_T = from_T;
    c.obligations.push_back(std::move(ob));
  };

  try {
    for (std::int64_t p = 2; p <= top; ++p) {
      if (!is_rational_prime(p)) continue;
      RationalPrimeSplit split{p, factor(FieldElement::from_integer(field, p), budget)};
      for (const auto& [pi, e] : split.factorization.primes) {
        if (std::llabs(norm(pi)) <= top) add_prime(pi, false);
      }
      c.splittings.push_back(std::move(split));
    }
    c.T_factorization = factor(order.params().T, budget);
    for (const auto& [pi, e] : c.T_factorization.primes) add_prime(pi, true);
  } catch (const BudgetExhausted& e) {
    c.budget_exhausted = true;
    c.undischarged.push_back(std::string("factorization: ") + e.what());
    return c;
  }

  for (auto& ob : c.obligations) {
    try {
      ob.certificate = certify_suitable(order, ob.prime, budget);
    } catch (const BudgetExhausted&) {
      c.budget_exhausted = true;
      ob.certificate.missing.push_back(-1);
    }
    if (!ob.discharged()) {
      std::ostringstream msg;
      msg << "prime " << describe(ob.prime) << " of norm " << ob.norm << ": ";
      if (ob.certificate.orbit_count == 0) {
        msg << "search budget exhausted";
      } else {
        msg << ob.certificate.missing.size() << " of " << ob.certificate.orbit_count
            << " orbits without a short vector";
        msg << (ob.certificate.refuted() ? " (none exists; the prime is not H-suitable)"
                                         : " (search budget exhausted)");
      }
      c.undischarged.push_back(msg.str());
    }
  }
  return c;
}

UniversalityCertificate verify_universality(const Order& order, const SearchBudget& budget) {
  UniversalityCertificate u;
  u.pid = verify_pid(order, budget);
  for (const auto& s : u.pid.undischarged) u.failures.push_back("PID: " + s);
  if (!u.pid.budget_exhausted) {
    u.T_squarefree = u.pid.T_factorization.squarefree();
    if (!u.T_squarefree) u.failures.push_back("T = " + describe(order.params().T) + " is not squarefree");
  }
  u.units = unit_signatures(order.field(), budget);
  if (!u.units.complete) {
    u.failures.push_back("units: only " + std::to_string(u.units.by_signature.size()) + " of " +
                         std::to_string(1u << order.field().degree()) + " sign vectors found");
  }
  return u;
}

// ---------------------------------------------------------------------------
// Representations

namespace {

bool quaternion_less(const Quaternion& a, const Quaternion& b) {
  for (int i = 0; i < 4; ++i) {
    if (coords_less(a[i], b[i])) return true;
    if (coords_less(b[i], a[i])) return false;
  }
  return false;
}

// First solution of nm(L) = lambda accepted by pred, in enumeration order.
std::optional<Quaternion> first_solution(const Order& order, const FieldElement& lambda,
                                         const std::function<bool(const Quaternion&)>& pred,
                                         const SearchBudget& budget) {
  BudgetMeter meter(budget);
  std::optional<Quaternion> found;
  for_each_norm_solution(
      order, lambda,
      [&](const Quaternion& L) {
        if (!pred(L)) return true;
        found = L;
        return false;
      },
      &meter);
  return found;
}

}  // namespace

RepresentationReport represent(const Order& order, const FieldElement& lambda, const SearchBudget& budget) {
  RepresentationReport rep;
  rep.lambda = lambda;
  rep.solutions = norm_solutions(order, lambda, budget);
  std::sort(rep.solutions.begin(), rep.solutions.end(), quaternion_less);
  rep.count = rep.solutions.size();
  if (is_hurwitz_type(order) && !lambda.is_zero()) rep.formula = jacobi_count(order, lambda, budget);
  return rep;
}

bool is_hurwitz_type(const Order& order) {
  const auto& p = order.params();
  const FieldElement one = FieldElement::one(order.field());
  return p.A == one && p.B == one && p.mu == one && p.nu == one;
}

Integer jacobi_count(const Order& order, const FieldElement& lambda, const SearchBudget& budget) {
  if (!is_hurwitz_type(order)) throw std::domain_error("jacobi_count is only available for the order (1,1,1,1)");
  if (!is_totally_positive(lambda)) throw std::invalid_argument("jacobi_count needs a totally positive element");
  const FieldElement two = FieldElement::from_integer(order.field(), 2);
  const Factorization f = factor(lambda, budget);
  Integer total = 24;
  for (const auto& [pi, e] : f.primes) {
    if (divides(pi, two)) continue;
    const Integer N = to_integer(std::llabs(norm(pi)));
    Integer sum = 1, pw = 1;
    for (int i = 0; i < e; ++i) {
      pw *= N;
      sum += pw;
    }
    total *= sum;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Squarefree ideals and principality

SquarefreeIdeal build_squarefree_ideal(const Order& order, const FieldElement& lambda, const SearchBudget& budget) {
  const Field& field = order.field();
  if (!is_totally_positive(lambda)) throw std::invalid_argument("build_squarefree_ideal needs a totally positive element");
  const Factorization f = factor(lambda, budget);
  if (!f.squarefree()) throw std::invalid_argument(describe(lambda) + " is not squarefree");

  std::array<std::vector<std::pair<FieldElement, FieldElement>>, 4> constraints;
  const Quaternion one_plus_a = Quaternion::one(order) + Quaternion::basis(order, 1);
  for (const auto& [pi, e] : f.primes) {
    const ResidueRing R(pi);
    const ResidueQuaternions rq(order, R);
    Quaternion L;
    if (R.index(order.params().T) == 0) {
      if (divides(pi, nm(one_plus_a))) {
        L = one_plus_a;
      } else {
        for (std::int64_t i = 1; i < rq.count(); ++i) {
          const QRes q = rq.from_index(i);
          if (rq.nm(q) == 0 && orbit_of(rq, q).dim() == 2) {
            L = rq.lift(q);
            break;
          }
        }
      }
    } else {
      L = rq.lift(enumerate_orbits(order, R).orbits.front().representative);
    }
    for (int j = 0; j < 4; ++j) constraints[j].emplace_back(L[j], pi);
  }

  Quaternion L = Quaternion::one(order);
  if (!f.primes.empty()) {
    std::array<FieldElement, 4> c;
    for (int j = 0; j < 4; ++j) c[j] = crt_lift(constraints[j]);
    L = Quaternion(order, std::move(c));
  }
  IdealLattice lat = IdealLattice::two_generator(L, lambda);
  const Rational dk(static_cast<long>(field.discriminant()));
  const Rational nl(static_cast<long>(std::llabs(norm(lambda))));
  if (lat.determinant() != dk * dk * nl * nl) {
    throw std::logic_error("squarefree ideal for " + describe(lambda) + " has the wrong determinant");
  }
  return {lambda, std::move(L), std::move(lat)};
}

PrincipalityResult test_ideal_principal(const IdealLattice& I, const FieldElement& lambda, const SearchBudget& budget) {
  const Order& order = I.order();
  const UnitSignatures units = unit_signatures(order.field(), budget);
  const FieldElement target = totally_positive_associate(lambda, units);
  PrincipalityResult out;
  try {
    out.generator = first_solution(
        order, target,
        [&](const Quaternion& D) {
          if (!I.contains(D)) return false;
          const FieldElement one = FieldElement::one(order.field());
          return IdealLattice::left_generated(order, {QuaternionFraction{D, one}}) == I;
        },
        budget);
    out.exhaustive = units.complete;
  } catch (const BudgetExhausted&) {
    out.exhaustive = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The order (1,1,1,0)

ClassTwoContext ClassTwoContext::create(std::shared_ptr<const Field> field) {
  const Field& K = *field;
  auto order = Order::create(field, 1, 1, 1, 0);
  const FieldElement rho7 = FieldElement::from_integer(K, 2) - FieldElement::from_coords(K, {1, 0, 0});
  const Quaternion g = Quaternion::one(*order) + Quaternion::basis(*order, 1) +
                       Quaternion::basis(*order, 2) * FieldElement::from_integer(K, 2);
  const FieldElement one = FieldElement::one(K);
  IdealLattice S = IdealLattice::left_generated(
      *order, {QuaternionFraction{g, one}, QuaternionFraction{Quaternion::scalar(*order, rho7), one}});
  return ClassTwoContext{std::move(order), rho7, g, std::move(S)};
}

std::optional<Transporter> transporter_search(const ClassTwoContext& ctx, const IdealLattice& I,
                                              const FieldElement& lambda, const SearchBudget& budget) {
  const Order& order = *ctx.order;
  const UnitSignatures units = unit_signatures(order.field(), budget);
  const FieldElement target = totally_positive_associate(lambda * ctx.rho7, units);
  std::optional<Transporter> out;
  try {
    const auto X = first_solution(
        order, target,
        [&](const Quaternion& X) {
          return I.contains(X) && ctx.S.right_multiplied(QuaternionFraction{X, ctx.rho7}) == I;
        },
        budget);
    if (X) out = Transporter{QuaternionFraction{*X, ctx.rho7}, *divide_exact(target, lambda * ctx.rho7)};
  } catch (const BudgetExhausted&) {
  }
  return out;
}

std::optional<ThetaCertificate> theta_certificate(const ClassTwoContext& ctx, const FieldElement& theta,
                                                  const SearchBudget& budget) {
  if (!is_totally_positive(theta)) throw std::invalid_argument("theta must be totally positive");
  const Order& order = *ctx.order;
  const auto P = first_solution(
      order, ctx.rho7 * theta, [&](const Quaternion& P) { return ctx.S.contains(P); }, budget);
  if (!P) return std::nullopt;
  const auto R = first_solution(order, theta, [](const Quaternion&) { return true; }, budget);
  if (!R) return std::nullopt;
  return ThetaCertificate{theta, *P, *R};
}

std::optional<MultipleRepresentation> represent_multiple(const ClassTwoContext& ctx, const ThetaCertificate& cert,
                                                         const FieldElement& lambda, const SearchBudget& budget) {
  const SquarefreeIdeal sq = build_squarefree_ideal(*ctx.order, lambda, budget);
  MultipleRepresentation out;
  out.lambda = lambda;
  const PrincipalityResult pr = test_ideal_principal(sq.lattice, lambda, budget);
  if (pr.generator) {
    out.principal = true;
    out.solution = *pr.generator * cert.representation;
  } else {
    const auto tr = transporter_search(ctx, sq.lattice, lambda, budget);
    if (!tr) return std::nullopt;
    // P in S and S U = I, so P U lies in H; check it coordinate by coordinate.
    const auto PU = divide_exact(cert.P * tr->U.numerator, tr->U.denominator);
    if (!PU) throw std::logic_error("P U is not integral for " + describe(lambda));
    out.solution = *PU;
    const auto unit = tr->unit;
    if (!(unit == FieldElement::one(lambda.field()))) {
      throw std::logic_error("transporter with a nontrivial unit for " + describe(lambda));
    }
  }
  if (!(nm(out.solution) == lambda * cert.theta)) {
    throw std::logic_error("represent_multiple produced a wrong norm for " + describe(lambda));
  }
  return out;
}

std::vector<FieldElement> squarefree_totally_positive(const Field& field, std::int64_t max_norm,
                                                      const SearchBudget& budget) {
  std::vector<std::pair<FieldElement, std::int64_t>> primes;
  for (std::int64_t p = 2; p <= max_norm; ++p) {
    if (!is_rational_prime(p)) continue;
    // No prime above p has norm p, so every one has norm at least p^2.
    const auto& filter = field.spec().norm_filter;
    if (filter && !filter->admits(p) && p * p > max_norm) continue;
    for (const auto& [pi, e] : factor(FieldElement::from_integer(field, p), budget).primes) {
      const std::int64_t np = std::llabs(norm(pi));
      if (np <= max_norm) primes.emplace_back(pi, np);
    }
  }
  const UnitSignatures units = unit_signatures(field, budget);
  std::vector<FieldElement> out;
  std::function<void(std::size_t, const FieldElement&, std::int64_t)> grow =
      [&](std::size_t start, const FieldElement& acc, std::int64_t nacc) {
        if (units.by_signature.count(sign_mask(acc)) || sign_mask(acc) == 0) {
          out.push_back(totally_positive_associate(acc, units));
        }
        for (std::size_t i = start; i < primes.size(); ++i) {
          if (nacc * primes[i].second <= max_norm) grow(i + 1, acc * primes[i].first, nacc * primes[i].second);
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

}  // namespace quatuniv
