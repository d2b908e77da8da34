// Command-line front end. Exit codes: 0 certified/found, 1 refuted or
// failed check, 2 inconclusive (budget), 3 bad input.

#include "quatuniv/check.hpp"
#include "quatuniv/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace quatuniv;

namespace {

enum Exit { kOk = 0, kRefuted = 1, kInconclusive = 2, kBadInput = 3 };

struct Options {
  std::string field = "zeta7";
  std::string order = "1,1,1,1";
  int precision = 96;
  std::uint64_t budget = SearchBudget{}.max_points;
  std::string output;
};

struct Context {
  std::shared_ptr<const Field> field;
  std::shared_ptr<const Order> order;
  SearchBudget budget;
};

Context make_context(const Options& opt) {
  Context c;
  c.field = Field::create(load_field_spec(opt.field));
  const auto p = parse_order_params(*c.field, opt.order);
  c.order = Order::create(c.field, p[0], p[1], p[2], p[3]);
  c.budget.max_points = opt.budget;
  return c;
}

void emit(const Options& opt, const Json& doc, const std::string& summary) {
  if (opt.output.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(opt.output);
  if (!out) throw std::runtime_error("cannot write " + opt.output);
  out << doc.dump(2) << "\n";
  std::cout << summary << "\n";
}

int cmd_bound(const Options& opt) {
  const Context c = make_context(opt);
  const Interval b = order_bound(*c.order, opt.precision);
  Json doc;
  doc["order"] = to_json(c.order->params());
  doc["bound"] = to_json(b);
  doc["admissible_norms"] = admissible_prime_norms(c.order->field(), b);
  emit(opt, doc, "bound in [" + std::to_string(b.lower_double()) + ", " + std::to_string(b.upper_double()) + "]");
  return kOk;
}

int cmd_orbits(const Options& opt, const std::string& rho_text, bool exhaustive) {
  const Context c = make_context(opt);
  const ResidueRing R(parse_field_element(*c.field, rho_text));
  const ResidueQuaternions rq(*c.order, R);
  const bool ramified = R.index(c.order->params().T) == 0;
  const OrbitSet os = ramified ? scan_orbits(*c.order, R) : enumerate_orbits(*c.order, R, exhaustive);
  emit(opt, to_json(R, rq, os), std::to_string(os.orbits.size()) + " orbits");
  return kOk;
}

int cmd_suitability(const Options& opt, const std::string& rho_text) {
  const Context c = make_context(opt);
  const auto cert = certify_suitable(*c.order, parse_field_element(*c.field, rho_text), c.budget);
  const Json doc = suitability_document(*c.order, cert);
  emit(opt, doc, doc["certificate"]["verdict"].get<std::string>());
  if (cert.certified()) return kOk;
  return cert.refuted() ? kRefuted : kInconclusive;
}

int cmd_verify_pid(const Options& opt) {
  const Context c = make_context(opt);
  const auto cert = verify_pid(*c.order, c.budget);
  const Json doc = pid_document(*c.order, cert);
  emit(opt, doc, doc["verdict"].get<std::string>());
  for (const auto& s : cert.undischarged) std::cerr << "undischarged: " << s << "\n";
  // A failed obligation only withholds the sufficient criterion; it never refutes.
  return cert.certified() ? kOk : kInconclusive;
}

int cmd_verify_universality(const Options& opt) {
  const Context c = make_context(opt);
  const auto cert = verify_universality(*c.order, c.budget);
  const Json doc = universality_document(*c.order, cert);
  emit(opt, doc, doc["verdict"].get<std::string>());
  for (const auto& s : cert.failures) std::cerr << "undischarged: " << s << "\n";
  return cert.universal() ? kOk : kInconclusive;
}

int cmd_represent(const Options& opt, const std::string& lambda_text) {
  const Context c = make_context(opt);
  const auto rep = represent(*c.order, parse_field_element(*c.field, lambda_text), c.budget);
  emit(opt, to_json(rep), std::to_string(rep.count) + " solutions");
  return rep.count > 0 ? kOk : kRefuted;
}

int cmd_count(const Options& opt, const std::string& lambda_text) {
  const Context c = make_context(opt);
  const FieldElement lambda = parse_field_element(*c.field, lambda_text);
  const auto rep = represent(*c.order, lambda, c.budget);
  Json doc;
  doc["lambda"] = lambda.to_string();
  doc["count"] = rep.count;
  if (rep.formula) {
    doc["formula"] = rep.formula->get_str();
    doc["agree"] = *rep.formula == Integer(static_cast<unsigned long>(rep.count));
  }
  emit(opt, doc, std::to_string(rep.count));
  if (rep.formula && *rep.formula != Integer(static_cast<unsigned long>(rep.count))) return kRefuted;
  return kOk;
}

int cmd_class_two(const Options& opt, const std::vector<std::string>& theta_texts,
                 const std::vector<std::string>& lambda_texts) {
  const auto field = Field::create(load_field_spec(opt.field));
  SearchBudget budget;
  budget.max_points = opt.budget;
  const ClassTwoContext ctx = ClassTwoContext::create(field);
  const Field& K = *field;

  std::vector<FieldElement> thetas;
  for (const auto& t : theta_texts) thetas.push_back(parse_field_element(K, t));
  if (thetas.empty()) {
    const FieldElement phi1 = FieldElement::from_coords(K, {1, 0, 0});
    thetas = {FieldElement::from_integer(K, 2) - phi1, FieldElement::from_integer(K, 2),
              FieldElement::from_integer(K, 3) + phi1, FieldElement::from_integer(K, 3)};
  }

  Json doc;
  doc["order"] = to_json(ctx.order->params());
  doc["S"] = {{"generator", ctx.s_generator.to_string()},
              {"rho7", ctx.rho7.to_string()},
              {"determinant", to_string(ctx.S.determinant())}};
  const PrincipalityResult pr = test_ideal_principal(ctx.S, ctx.rho7, budget);
  doc["S"]["principal"] = pr.generator.has_value();
  doc["S"]["search_exhaustive"] = pr.exhaustive;

  int code = kOk;
  Json certs = Json::array();
  std::vector<ThetaCertificate> found;
  for (const auto& theta : thetas) {
    const auto cert = theta_certificate(ctx, theta, budget);
    if (cert) {
      certs.push_back(to_json(*cert));
      found.push_back(*cert);
    } else {
      certs.push_back({{"theta", theta.to_string()}, {"found", false}});
      code = kRefuted;
    }
  }
  doc["theta_certificates"] = std::move(certs);

  Json multiples = Json::array();
  for (const auto& lt : lambda_texts) {
    const FieldElement lambda = parse_field_element(K, lt);
    for (const auto& cert : found) {
      const auto m = represent_multiple(ctx, cert, lambda, budget);
      if (m) {
        Json e = to_json(*m);
        e["theta"] = cert.theta.to_string();
        multiples.push_back(std::move(e));
      } else {
        multiples.push_back({{"lambda", lambda.to_string()}, {"theta", cert.theta.to_string()}, {"found", false}});
        if (code == kOk) code = kInconclusive;
      }
    }
  }
  doc["multiples"] = std::move(multiples);
  emit(opt, doc, std::to_string(found.size()) + " of " + std::to_string(thetas.size()) + " theta certificates");
  return code;
}

int cmd_check(const Options& opt, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const CheckReport rep = check_certificate(Json::parse(in));
  Json doc;
  doc["kind"] = rep.kind;
  doc["ok"] = rep.ok();
  doc["errors"] = rep.errors;
  doc["notes"] = rep.notes;
  emit(opt, doc, rep.ok() ? "certificate verified" : "certificate rejected");
  return rep.ok() ? kOk : kRefuted;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternion orders over totally real fields: PID and universality certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--field", opt.field, "zeta7 or a JSON field spec file");
  app.add_option("--order", opt.order, "A,B,mu,nu (integers) or four field elements separated by '|'");
  app.add_option("--precision", opt.precision, "bits for interval square roots")->check(CLI::Range(16, 4096));
  app.add_option("--budget", opt.budget, "maximum lattice points per search");
  app.add_option("--output", opt.output, "write the JSON result to this file");

  std::string rho, lambda, cert_path;
  bool exhaustive = false;
  std::vector<std::string> thetas, lambdas;
  std::function<int()> run;

  app.add_subcommand("bound", "suitability bound and admissible prime norms")->callback([&] {
    run = [&] { return cmd_bound(opt); };
  });
  auto* orbits = app.add_subcommand("orbits", "rho-orbits of H/rhoH");
  orbits->add_option("rho", rho, "prime element c1,c2,c3")->required();
  orbits->add_flag("--exhaustive-check", exhaustive, "also scan every residue");
  orbits->callback([&] { run = [&] { return cmd_orbits(opt, rho, exhaustive); }; });
  auto* suit = app.add_subcommand("suitability", "certify that a prime is H-suitable");
  suit->add_option("rho", rho, "prime element")->required();
  suit->callback([&] { run = [&] { return cmd_suitability(opt, rho); }; });
  app.add_subcommand("verify-pid", "PID certificate for the order")->callback([&] {
    run = [&] { return cmd_verify_pid(opt); };
  });
  app.add_subcommand("verify-universality", "universality certificate for the norm form")->callback([&] {
    run = [&] { return cmd_verify_universality(opt); };
  });
  auto* rep = app.add_subcommand("represent", "all representations of lambda");
  rep->add_option("lambda", lambda, "totally positive element")->required();
  rep->callback([&] { run = [&] { return cmd_represent(opt, lambda); }; });
  auto* cnt = app.add_subcommand("count", "representation count and the counting formula");
  cnt->add_option("lambda", lambda, "totally positive element")->required();
  cnt->callback([&] { run = [&] { return cmd_count(opt, lambda); }; });
  auto* c2 = app.add_subcommand("class-two", "theta certificates and multiples for the order (1,1,1,0)");
  c2->add_option("--theta", thetas, "theta values (default: the four known ones)");
  c2->add_option("--lambda", lambdas, "squarefree totally positive multipliers");
  c2->callback([&] { run = [&] { return cmd_class_two(opt, thetas, lambdas); }; });
  auto* chk = app.add_subcommand("check", "re-verify a certificate file");
  chk->add_option("certificate", cert_path, "JSON certificate")->required()->check(CLI::ExistingFile);
  chk->callback([&] { run = [&] { return cmd_check(opt, cert_path); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;
  }
  try {
    return run();
  } catch (const BudgetExhausted& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
}
