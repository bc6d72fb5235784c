#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "illg/model.hpp"

namespace illg {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;  // 0: unlimited
  bool renormalize = true;
  double t_end = 1.0;
  double convergence_tol = 1e-6;
  long long max_wall_steps = 50'000'000;
  // After switch-off, accept entry into the W <= D21/3 sublevel cap as a decision.
  bool certify_basin = true;
  // Return as soon as the outcome is decided instead of running to t_end.
  bool stop_on_decision = true;
  bool record = true;
  double norm_abort_tol = 1e-7;

  void validate() const;
  bool operator==(const IntegratorConfig&) const = default;
};

enum class DecidedBy { Convergence, Basin, Budget };

std::string_view to_string(DecidedBy d);

struct TrajectorySample {
  double t = 0.0;
  SpinState z;
  double W = 0.0;  // energy with the field active at t
  bool field_on = false;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  SwitchOutcome outcome = SwitchOutcome::Undecided;
  DecidedBy decided_by = DecidedBy::Budget;
  std::optional<double> decision_time;
  double t_final = 0.0;
  SpinState final_state;
  double final_W = 0.0;
  double max_norm_drift = 0.0;        // | |m| - 1 | over accepted states
  double max_step_norm_defect = 0.0;  // before projection
  double max_orthogonality = 0.0;     // |m.v|
  double max_energy_increase = 0.0;   // between consecutive states on one field segment
  long long accepted_steps = 0;
  long long rejected_steps = 0;
  double mean_pulse_step = 0.0;
};

class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, double t, const SpinState& last)
      : std::runtime_error(what), t_(t), last_(last) {}
  double t() const { return t_; }
  const SpinState& last_state() const { return last_; }

 private:
  double t_;
  SpinState last_;
};

// Dormand-Prince 5(4) with the switch-off instant as an exact step boundary.
// Throws IntegrationFailure on step underflow or norm drift above norm_abort_tol.
Trajectory integrate(const SpinState& z0, const FieldSchedule& schedule, const MaterialParams& p,
                     const IntegratorConfig& cfg);

// Outcome of a state at zero field by distance to the six equilibria.
std::optional<SwitchOutcome> classify_equilibrium(const SpinState& z, double tol);

struct EnergyAuditReport {
  std::size_t points = 0;
  double max_abs_residual = 0.0;
  double dissipation_scale = 0.0;  // max alpha |v|^2 over audited points
  double max_rel_residual = 0.0;
  double max_energy_increase = 0.0;
  double max_gap = 0.0;
  bool too_sparse = false;
};

// Five-point finite-difference dW/dt against -alpha |v|^2 on samples in
// [t_from, t_to]; stencils never straddle the switch-off instant.
EnergyAuditReport energy_audit(const Trajectory& traj, const MaterialParams& p,
                               double t_from = -std::numeric_limits<double>::infinity(),
                               double t_to = std::numeric_limits<double>::infinity());

struct SweepPoint {
  double t_star = 0.0;
  SwitchOutcome outcome = SwitchOutcome::Undecided;
  DecidedBy decided_by = DecidedBy::Budget;
  double final_W = 0.0;
  SpinState final_state;
  std::string error;  // non-empty when the run failed
};

// One integrate call per switch-off instant, spread over worker threads.
// Results are in grid order and independent of the worker count.
std::vector<SweepPoint> sweep(const SpinState& z0, const Vec3& h_a, const MaterialParams& p,
                              const IntegratorConfig& cfg, const std::vector<double>& t_star_grid,
                              unsigned workers = 0);

}  // namespace illg
