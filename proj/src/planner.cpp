#include "illg/planner.hpp"

#include <algorithm>
#include <cmath>

#include "illg/errors.hpp"

namespace illg {

namespace {

constexpr double kAxisTol = 1e-14;

}  // namespace

std::string_view to_string(SwitchCase c) {
  switch (c) {
    case SwitchCase::CaseI: return "case_i";
    case SwitchCase::CaseII: return "case_ii";
    case SwitchCase::Infeasible: return "infeasible";
  }
  return "unknown";
}

std::string_view to_string(BasinVerdict v) {
  switch (v) {
    case BasinVerdict::InMinusBasin: return "in_minus_basin";
    case BasinVerdict::InPlusBasin: return "in_plus_basin";
    case BasinVerdict::Outside: return "outside";
  }
  return "unknown";
}

std::string_view to_string(PlannedVerdict v) {
  switch (v) {
    case PlannedVerdict::MarginMet: return "margin_met";
    case PlannedVerdict::MarginViolated: return "margin_violated";
    case PlannedVerdict::OutsideWindow: return "outside_window";
  }
  return "unknown";
}

std::string_view to_string(Gate g) {
  switch (g) {
    case Gate::Passed: return "passed";
    case Gate::HypothesisViolated: return "hypothesis_violated";
    case Gate::PoleInitialCondition: return "pole_initial_condition";
    case Gate::ThresholdExceeded: return "threshold_exceeded";
    case Gate::Infeasible: return "infeasible";
  }
  return "unknown";
}

std::pair<double, double> SwitchPlan::window() const {
  switch (kind) {
    case SwitchCase::CaseI: return {T_sw - delta_sw, T_sw + delta_sw};
    case SwitchCase::CaseII: return {T_sw - *delta_sw_star, T_sw + *delta_sw_star};
    case SwitchCase::Infeasible: break;
  }
  throw InfeasiblePlan("no safe switching window: neither case applies");
}

bool field_along_e2(const Vec3& h) {
  const double w = norm(h);
  return h[1] > 0.0 && std::abs(h[0]) <= kAxisTol * w && std::abs(h[2]) <= kAxisTol * w;
}

SwitchPlan compute_plan(const ScaledParams& sp, const Vec3& D) {
  if (!field_along_e2(sp.h_hat))
    throw HypothesisViolation("switching plan needs a scaled field of the form (0, b, 0), b > 0");
  const double mu = sp.mu, w = sp.omega_hat, ah = sp.alpha_hat, eh = sp.eta_hat;
  const double d21 = D[1] - D[0], d31 = D[2] - D[0];

  SwitchPlan plan;
  plan.mu0_tilde = thresholds(0.5 * kPi, w, sp.E_hat).mu0_tilde;
  if (mu > plan.mu0_tilde)
    throw ThresholdExceeded("mu exceeds mu0_tilde; no plan", mu, plan.mu0_tilde);

  const double pre = mu * eh / (w * ah);
  plan.T_sw = pre * kPi;
  plan.tau_sw = kPi / (mu * w);
  plan.Xi = d21 * eh / (8.0 * ah * w * w);
  plan.K_f = d31 / (4.0 * d21);
  const double y = std::min(1.0, std::sqrt(mu * mu * w * w + plan.K_f) - mu * w);
  plan.delta_sw = pre * std::asin(y);

  if (plan.Xi >= 1.0) {
    plan.kind = SwitchCase::CaseI;
    return plan;
  }
  const double ratio = 1.0 / (2.0 * mu * w);
  const double n = std::round(ratio);
  if (n >= 1.0 && std::abs(2.0 * mu * w * n - 1.0) <= kCaseIIRelTol) {
    plan.kind = SwitchCase::CaseII;
    plan.n = static_cast<int>(n);
    plan.delta_sw_star =
        std::min(plan.delta_sw, mu * mu * (eh / ah) * std::acos(1.0 - plan.Xi));
    return plan;
  }
  plan.kind = SwitchCase::Infeasible;
  return plan;
}

std::vector<AdmissibleField> admissible_b(double mu, double alpha_hat, double eta_hat,
                                          const Vec3& D, int n_max) {
  std::vector<AdmissibleField> out;
  const double d21 = D[1] - D[0];
  for (int n = 1; n <= n_max; ++n) {
    const double b = std::sqrt(alpha_hat) / (2.0 * mu * eta_hat * n);
    const double w = eta_hat * b / std::sqrt(alpha_hat);
    const double xi = d21 * eta_hat / (8.0 * alpha_hat * w * w);
    if (xi < 1.0) out.push_back({n, b, xi});
  }
  return out;
}

BasinVerdict basin_membership(const SpinState& z, const MaterialParams& p) {
  const double W = energy_W(z, Vec3{}, p);
  if (W > p.d21() / 3.0) return BasinVerdict::Outside;
  if (z.m[0] < 0.0) return BasinVerdict::InMinusBasin;
  if (z.m[0] > 0.0) return BasinVerdict::InPlusBasin;
  return BasinVerdict::Outside;
}

PlannedStateReport planned_state_check(const ScaledParams& sp, const Vec3& D, double t_star) {
  const SwitchPlan plan = compute_plan(sp, D);
  if (!plan.feasible()) throw InfeasiblePlan("planned state check needs a feasible plan");

  ApproxSolution a;
  a.mu = sp.mu;
  a.omega_hat = sp.omega_hat;
  a.E_hat = sp.E_hat;
  a.C = sp.C;
  a.order = ApproxOrder::Leq1Cartesian;

  PlannedStateReport r;
  r.t_star = t_star;
  r.tau_star = TimeMap(sp).to_tau(t_star);
  r.m = m_leq1(r.tau_star, a);
  r.velocity = velocity_leq1(r.tau_star, a);
  r.kinetic = sp.alpha_hat / (2.0 * sp.eta_hat * sp.mu * sp.mu) * dot(r.velocity, r.velocity);
  r.potential = anisotropy_energy(r.m, Vec3{}, D);
  r.W_hat = r.kinetic + r.potential;
  r.margin = (D[1] - D[0]) / 4.0;
  r.margin_met = r.W_hat <= r.margin * (1.0 + 1e-12) && r.m[0] < 0.0;
  r.inside_window = std::abs(t_star - plan.T_sw) <= plan.delta_sw * (1.0 + 1e-12);
  if (!r.inside_window)
    r.verdict = PlannedVerdict::OutsideWindow;
  else
    r.verdict = r.margin_met ? PlannedVerdict::MarginMet : PlannedVerdict::MarginViolated;
  return r;
}

ApproximationBundle prepare_approximation(const MaterialParams& p, const Vec3& h_a, double epsilon,
                                 const Vec3& m0) {
  ApproximationBundle res;
  try {
    res.scaled = build_scaled(p, h_a, epsilon);
  } catch (const HypothesisViolation& e) {
    res.gate = Gate::HypothesisViolated;
    res.diagnostic = e.what();
    return res;
  }
  const ScaledParams& sp = *res.scaled;
  ApproxSolution a;
  try {
    a = make_approximation(sp, m0, ApproxOrder::Leq2Spherical);
  } catch (const ChartError& e) {
    res.gate = Gate::PoleInitialCondition;
    res.diagnostic = e.what();
    return res;
  }
  res.limits = thresholds(a.theta0, sp.omega_hat, sp.E_hat);
  if (sp.mu > res.limits->mu0) {
    res.gate = Gate::ThresholdExceeded;
    res.diagnostic = "mu = " + std::to_string(sp.mu) + " exceeds mu0 = " +
                     std::to_string(res.limits->mu0);
    return res;
  }
  res.approx = a;
  return res;
}

SwitchingDecision plan_switching(const MaterialParams& p, const Vec3& h_a, double epsilon) {
  try {
    return plan_switching(build_scaled(p, h_a, epsilon));
  } catch (const HypothesisViolation& e) {
    SwitchingDecision res;
    res.gate = Gate::HypothesisViolated;
    res.diagnostic = e.what();
    return res;
  }
}

SwitchingDecision plan_switching(const ScaledParams& sp) {
  SwitchingDecision res;
  res.scaled = sp;
  SwitchPlan plan;
  try {
    plan = compute_plan(sp, sp.D);
  } catch (const HypothesisViolation& e) {
    res.gate = Gate::HypothesisViolated;
    res.diagnostic = e.what();
    return res;
  } catch (const ThresholdExceeded& e) {
    res.gate = Gate::ThresholdExceeded;
    res.diagnostic = e.what();
    return res;
  }
  res.plan = plan;
  if (!plan.feasible()) {
    res.gate = Gate::Infeasible;
    res.diagnostic = "Xi < 1 and 1/(2 mu w) is not an integer";
    return res;
  }
  res.flag = true;
  res.t_star = plan.T_sw;
  return res;
}

}  // namespace illg
