// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Usage: illg_acceptance [id ...]

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "illg/validation.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id < 1 || id > illg::kCriterionCount) {
      std::cerr << "unknown criterion '" << argv[i] << "'\n";
      return 2;
    }
    ids.push_back(id);
  }
  if (ids.empty())
    for (int i = 1; i <= illg::kCriterionCount; ++i) ids.push_back(i);

  int failed = 0;
  for (const int id : ids) {
    illg::CriterionResult r;
    try {
      r = illg::run_criterion(id);
    } catch (const std::exception& e) {
      r = {id, "criterion raised an error", false, e.what(), "no error"};
    }
    std::cout << illg::format_result(r) << std::endl;
    failed += r.passed ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
