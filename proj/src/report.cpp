#include "quatuniv/report.hpp"

namespace quatuniv {

namespace {

Json header(const Order& order, const char* kind) {
  Json j;
  j["kind"] = kind;
  j["field"] = to_json(order.field().spec());
  j["order"] = to_json(order.params());
  return j;
}

Json pid_body(const PidCertificate& c) {
  Json j;
  j["bound"] = to_json(c.bound);
  j["admissible_norms"] = c.admissible_norms;
  Json splits = Json::array();
  for (const auto& s : c.splittings) {
    Json e = to_json(s.factorization);
    e["p"] = s.p;
    splits.push_back(std::move(e));
  }
  j["splittings"] = std::move(splits);
  j["T_factorization"] = to_json(c.T_factorization);
  Json obs = Json::array();
  for (const auto& ob : c.obligations) {
    Json e = to_json(ob.certificate);
    e["requested_prime"] = ob.prime.to_string();
    e["norm"] = ob.norm;
    e["divides_T"] = ob.divides_T;
    obs.push_back(std::move(e));
  }
  j["obligations"] = std::move(obs);
  j["undischarged"] = c.undischarged;
  j["budget_exhausted"] = c.budget_exhausted;
  return j;
}

}  // namespace

Json to_json(const ResidueRing& ring, const ResidueQuaternions& rq, const OrbitSet& orbits) {
  Json j;
  j["rho"] = ring.modulus().to_string();
  j["r"] = ring.size();
  j["orbit_count"] = orbits.orbits.size();
  j["exhaustive_checked"] = orbits.exhaustive_checked;
  Json list = Json::array();
  for (const auto& o : orbits.orbits) {
    list.push_back({{"representative", rq.lift(o.representative).to_string()},
                    {"size", o.size},
                    {"generators", o.generators},
                    {"dimension", o.space.dim()}});
  }
  j["orbits"] = std::move(list);
  return j;
}

Json to_json(const SuitabilityCertificate& c) {
  Json j;
  j["rho"] = c.rho.to_string();
  j["r"] = c.r;
  j["rho_divides_T"] = c.rho_divides_T;
  j["unit_case_nn"] = to_json(c.unit_case_nn);
  j["orbit_count"] = c.orbit_count;
  Json w = Json::array();
  for (const auto& x : c.witnesses) {
    w.push_back({{"orbit", x.orbit},
                 {"generator", x.generator.to_string()},
                 {"numerator", x.numerator.to_string()},
                 {"D", x.D.to_string()},
                 {"C", x.C.to_string()},
                 {"k", x.k.to_string()},
                 {"nn", to_json(x.nn)}});
  }
  j["witnesses"] = std::move(w);
  Json miss = Json::array();
  for (std::size_t i = 0; i < c.missing.size(); ++i) {
    Json e = {{"orbit", c.missing[i]}};
    if (i < c.missing_generators.size()) e["generator"] = c.missing_generators[i].to_string();
    miss.push_back(std::move(e));
  }
  j["missing"] = std::move(miss);
  j["exhaustive"] = c.exhaustive;
  j["verdict"] = c.certified() ? "suitable" : (c.refuted() ? "not suitable" : "inconclusive");
  return j;
}

Json suitability_document(const Order& order, const SuitabilityCertificate& c) {
  Json j = header(order, "suitability");
  j["certificate"] = to_json(c);
  return j;
}

Json pid_document(const Order& order, const PidCertificate& c) {
  Json j = header(order, "pid");
  j.update(pid_body(c));
  j["verdict"] = c.certified() ? "principal ideal domain" : "not certified";
  return j;
}

Json universality_document(const Order& order, const UniversalityCertificate& c) {
  Json j = header(order, "universality");
  j.update(pid_body(c.pid));
  j["T_squarefree"] = c.T_squarefree;
  j["units"] = to_json(c.units);
  j["failures"] = c.failures;
  j["verdict"] = c.universal() ? "universal" : "not certified";
  return j;
}

Json to_json(const RepresentationReport& r) {
  Json j;
  j["lambda"] = r.lambda.to_string();
  j["count"] = r.count;
  if (r.formula) j["formula"] = r.formula->get_str();
  Json s = Json::array();
  for (const auto& L : r.solutions) s.push_back(L.to_string());
  j["solutions"] = std::move(s);
  return j;
}

Json to_json(const ThetaCertificate& c) {
  return {{"theta", c.theta.to_string()}, {"P", c.P.to_string()}, {"representation", c.representation.to_string()}};
}

Json to_json(const MultipleRepresentation& m) {
  return {{"lambda", m.lambda.to_string()}, {"principal", m.principal}, {"solution", m.solution.to_string()}};
}

}  // namespace quatuniv
