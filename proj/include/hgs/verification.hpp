#ifndef HGS_VERIFICATION_HPP
#define HGS_VERIFICATION_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace hgs {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

// Runs the full verification suite (decay rates, monotonicity, energy
// dissipation, integral identities, action positivity, diagonal oracle,
// exponent arithmetic, tail sandwich, infrastructure checks) on the built-in
// fixture set. Progress lines go to `progress` when non-null.
std::vector<CriterionResult> run_verification_suite(std::ostream* progress = nullptr);

// Renders one aligned pass/fail line per criterion.
void print_results_table(std::ostream& os, const std::vector<CriterionResult>& results);

}  // namespace hgs

#endif
