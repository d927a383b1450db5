#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace quadsmc {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measured values, always populated
};

/// A named verification check. `tol_scale` multiplies every tolerance
/// (values < 1 tighten); measured errors are reported either way.
struct Check {
  std::string name;
  std::function<CheckResult(double tol_scale)> fn;
};

/// The full property/claim suite, in a fixed order.
const std::vector<Check>& verification_checks();

/// Runs every check, printing one pass/fail line each.
/// Returns the number of failed checks.
int run_verification(double tol_scale, std::ostream& out);

}  // namespace quadsmc
