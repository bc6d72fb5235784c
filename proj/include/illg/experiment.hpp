#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "illg/config.hpp"
#include "illg/frames.hpp"
#include "illg/model.hpp"
#include "illg/planner.hpp"

namespace illg {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitGate = 3,
  kExitInfeasible = 4,
  kExitIntegrator = 5,
  kExitValidation = 6,
};

struct ResolvedExperiment {
  ExperimentConfig config;
  MaterialParams material;
  Vec3 h_a;
  std::optional<ScaledParams> scaled;  // empty when the field has no transverse part
  SpinState z0;
  std::optional<SwitchPlan> plan;      // feasible or not, when one could be computed
  int plan_status = kExitOk;           // gate or infeasibility code otherwise
  std::string plan_diagnostic;
  std::optional<double> t_star;
  std::optional<double> t_end;
};

// Derives the physical and scaled parameter sets, the plan and the schedule.
// Throws ConfigError when the parameters cannot be combined.
ResolvedExperiment resolve(const ExperimentConfig& cfg);

// Fully resolved parameter echo, one "key = value" line per entry.
std::vector<std::string> provenance(const ResolvedExperiment& r);

// Each command returns its process exit code. Tables and CSV that have no
// configured path go to out; progress and diagnostics go to log.
int cmd_plan(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log,
              unsigned workers = 0);
int cmd_approx(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace illg
