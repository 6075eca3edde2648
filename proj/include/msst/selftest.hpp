#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace msst {

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfTestOptions {
  // Offsets the stored chi-square reference table; used as a negative
  // control to prove the harness detects a broken numeric kernel.
  double perturb_chisq_table = 0.0;
};

// Embedded analytic checks over every numeric kernel. Returns one entry per
// named check.
std::vector<SelfTestCheck> run_selftest(const SelfTestOptions& options = {});

// Prints a pass/fail table; returns true when every check passed.
bool report_selftest(const std::vector<SelfTestCheck>& checks, std::ostream& os);

}  // namespace msst
