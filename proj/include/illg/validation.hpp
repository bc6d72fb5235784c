#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "illg/config.hpp"

namespace illg {

// Configurations shipped with the tool; configs/<name>.ini holds the same text.
// Names: case1, case1_muB, case1_overlay, case2, infeasible.
std::vector<std::string> bundled_config_names();
const std::string& bundled_config_text(const std::string& name);
ExperimentConfig bundled_config(const std::string& name);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string measured;
  std::string tolerance;
};

inline constexpr int kCriterionCount = 10;

// Throws std::out_of_range for ids outside 1..kCriterionCount.
CriterionResult run_criterion(int id);

// One line: "criterion <id> <PASS|FAIL>: <title> | measured ... | tolerance ...".
std::string format_result(const CriterionResult& r);

// Runs the listed criteria (all when empty); exit code 0 or kExitValidation.
int cmd_validate(std::ostream& out, const std::vector<int>& ids = {});

}  // namespace illg
