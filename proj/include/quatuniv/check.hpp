// Independent re-verification of suitability, PID and universality
// certificates. Uses only field and quaternion arithmetic: orbit coverage is
// established by marking every left multiple D G of the stated generators
// modulo rho, not by the 2x2 matrix model.

#pragma once

#include "quatuniv/serialize.hpp"

namespace quatuniv {

struct CheckReport {
  std::string kind;
  std::vector<std::string> errors;
  std::vector<std::string> notes;
  bool ok() const { return errors.empty(); }
};

CheckReport check_certificate(const Json& doc);

}  // namespace quatuniv
