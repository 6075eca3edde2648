#include <doctest.h>

#include <sstream>

#include "msst/selftest.hpp"

TEST_CASE("selftest passes on a healthy build and lists enough checks") {
  const auto checks = msst::run_selftest();
  CHECK(checks.size() >= 12);
  std::stringstream ss;
  CHECK(msst::report_selftest(checks, ss));
  for (const auto& c : checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.passed);
  }
  // one printed line per named check
  std::size_t lines = 0;
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind("[PASS]", 0) == 0 || line.rfind("[FAIL]", 0) == 0) ++lines;
  }
  CHECK(lines == checks.size());
}

TEST_CASE("negative control: a perturbed chi-square table is detected") {
  msst::SelfTestOptions options;
  options.perturb_chisq_table = 1e-6;
  const auto checks = msst::run_selftest(options);
  bool grid_failed = false;
  for (const auto& c : checks) {
    if (c.name == "chi-square reference grid") grid_failed = !c.passed;
  }
  CHECK(grid_failed);
  std::stringstream ss;
  CHECK_FALSE(msst::report_selftest(checks, ss));
}
