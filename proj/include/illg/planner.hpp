#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "illg/frames.hpp"
#include "illg/model.hpp"
#include "illg/mts.hpp"

namespace illg {

enum class SwitchCase { CaseI, CaseII, Infeasible };

std::string_view to_string(SwitchCase c);

inline constexpr double kCaseIIRelTol = 1e-9;

struct SwitchPlan {
  double T_sw = 0.0;   // original time
  double delta_sw = 0.0;
  std::optional<double> delta_sw_star;
  double Xi = 0.0;
  double K_f = 0.0;
  double mu0_tilde = 0.0;
  double tau_sw = 0.0;
  SwitchCase kind = SwitchCase::Infeasible;
  int n = 0;  // CaseII index, 2 mu w n = 1

  bool feasible() const { return kind != SwitchCase::Infeasible; }
  // Guaranteed switch-off interval; throws InfeasiblePlan when there is none.
  std::pair<double, double> window() const;
};

// True when the scaled field is (0, b, 0) with b > 0.
bool field_along_e2(const Vec3& h_hat);

// Throws HypothesisViolation unless the field lies along +e2 and
// ThresholdExceeded when mu > mu0_tilde.
SwitchPlan compute_plan(const ScaledParams& sp, const Vec3& D);

struct AdmissibleField {
  int n = 0;
  double b = 0.0;
  double Xi = 0.0;
};

// Field magnitudes b_n = sqrt(alpha_hat)/(2 mu eta_hat n) with Xi_n < 1.
std::vector<AdmissibleField> admissible_b(double mu, double alpha_hat, double eta_hat,
                                          const Vec3& D, int n_max);

enum class BasinVerdict { InMinusBasin, InPlusBasin, Outside };

std::string_view to_string(BasinVerdict v);

// Sublevel estimate W <= D21/3 at zero field; the cap is chosen by sign(m1).
BasinVerdict basin_membership(const SpinState& z, const MaterialParams& p);

enum class PlannedVerdict { MarginMet, MarginViolated, OutsideWindow };

std::string_view to_string(PlannedVerdict v);

struct PlannedStateReport {
  double t_star = 0.0;
  double tau_star = 0.0;
  Vec3 m;          // first-order state at tau_star
  Vec3 velocity;   // d/dtau
  double kinetic = 0.0;
  double potential = 0.0;
  double W_hat = 0.0;
  double margin = 0.0;  // D21/4
  bool margin_met = false;
  bool inside_window = false;
  PlannedVerdict verdict = PlannedVerdict::MarginViolated;
};

// Predicts the zero-field energy right after switch-off at t_star from the
// first-order closed forms. Throws InfeasiblePlan when no plan exists.
PlannedStateReport planned_state_check(const ScaledParams& sp, const Vec3& D, double t_star);

enum class Gate { Passed, HypothesisViolated, PoleInitialCondition, ThresholdExceeded, Infeasible };

std::string_view to_string(Gate g);

struct ApproximationBundle {
  Gate gate = Gate::Passed;
  std::string diagnostic;
  std::optional<ScaledParams> scaled;
  std::optional<ValidityThresholds> limits;
  std::optional<ApproxSolution> approx;
};

// Scales the problem, checks mu <= mu0 and returns the closed-form bundle.
ApproximationBundle prepare_approximation(const MaterialParams& p, const Vec3& h_a, double epsilon,
                                 const Vec3& m0);

struct SwitchingDecision {
  Gate gate = Gate::Passed;
  std::string diagnostic;
  bool flag = false;  // a switching trajectory exists
  std::optional<ScaledParams> scaled;
  std::optional<SwitchPlan> plan;
  std::optional<double> t_star;
};

// Switching plan from e1; t_star is the centre of the window.
SwitchingDecision plan_switching(const MaterialParams& p, const Vec3& h_a, double epsilon);
SwitchingDecision plan_switching(const ScaledParams& sp);

}  // namespace illg
