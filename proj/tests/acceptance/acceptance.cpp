// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
//   acceptance            all criteria at full scale
//   acceptance 5 --smoke  the 64-antenna plateau variant

#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#include "fgmimo/validation.hpp"

int main(int argc, char** argv) {
  using namespace fgmimo::validation;
  CLI::App app{"acceptance criteria"};
  std::vector<int> ids;
  bool smoke = false;
  int workers = 0;
  app.add_option("criteria", ids, "criterion numbers (default: all)")->check(CLI::Range(1, kCriterionCount));
  app.add_flag("--smoke", smoke, "reduced problem sizes");
  app.add_option("--workers", workers, "OpenMP threads, 0 = default")->check(CLI::NonNegativeNumber);
  CLI11_PARSE(app, argc, argv);
  if (ids.empty()) {
    for (int k = 1; k <= kCriterionCount; ++k) ids.push_back(k);
  }

  int failed = 0;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, smoke ? Scale::smoke : Scale::full, workers);
    std::printf("%s criterion %d (%s): %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}
