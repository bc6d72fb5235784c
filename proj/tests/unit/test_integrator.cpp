#include <catch_amalgamated.hpp>

#include <cmath>

#include "illg/integrator.hpp"
#include "illg/planner.hpp"
#include "support/oracles.hpp"

using namespace illg;
using Catch::Approx;

namespace {

const Vec3 kD = oracle::kThinFilmD;
constexpr double kMuA = 0.03033;

ScaledParams case1() {
  const double ah = 2.3, eh = 4.21;
  const double b = std::sqrt(ah) / (2.0 * kMuA * eh * 6);
  return build_scaled_from_hats(kD, ah, eh, {0, b, 0}, kMuA / std::sqrt(ah));
}

ScaledParams case2() { return build_scaled({kD, 0.01, 0.02}, {0, 5, 0}, 0.1); }

IntegratorConfig tight(double t_end) {
  IntegratorConfig cfg;
  cfg.t_end = t_end;
  return cfg;
}

const SpinState kStart{kE1, {}};

}  // namespace

TEST_CASE("equilibrium start without field is decided at once", "[integrator]") {
  const Trajectory tr = integrate(kStart, {{}, 0.0}, {kD, 0.01, 0.02}, tight(1.0));
  CHECK(tr.outcome == SwitchOutcome::NotSwitched);
  CHECK(tr.decided_by == DecidedBy::Convergence);
  REQUIRE(tr.decision_time);
  CHECK(*tr.decision_time == 0.0);
  CHECK(tr.samples.size() == 1);
}

TEST_CASE("config validation", "[integrator]") {
  IntegratorConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.convergence_tol = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  const SpinState bad{{1, 0.1, 0}, {}};
  CHECK_THROWS_AS(integrate(bad, {}, {kD, 0.01, 0.02}, {}), std::invalid_argument);
}

TEST_CASE("case 1 switches at the planned instant", "[integrator][integration]") {
  const ScaledParams sp = case1();
  const SwitchPlan plan = compute_plan(sp, kD);
  const MaterialParams p = sp.material();
  const Trajectory tr = integrate(kStart, {sp.h_a(), plan.T_sw}, p, tight(100 * plan.T_sw));
  CHECK(tr.outcome == SwitchOutcome::Switched);
  CHECK(tr.max_energy_increase <= 10 * IntegratorConfig{}.abs_tol);

  bool saw_switch_off = false;
  for (std::size_t i = 1; i < tr.samples.size(); ++i) {
    CHECK(tr.samples[i].t > tr.samples[i - 1].t);
    if (tr.samples[i].t == plan.T_sw) {
      saw_switch_off = true;
      CHECK_FALSE(tr.samples[i].field_on);
    }
    if (!tr.samples[i - 1].field_on)
      CHECK(tr.samples[i].W <= tr.samples[i - 1].W + 10 * IntegratorConfig{}.abs_tol);
  }
  CHECK(saw_switch_off);
}

TEST_CASE("case 2 switches and m1 follows the first-order form", "[integrator][integration]") {
  const ScaledParams sp = case2();
  const SwitchPlan plan = compute_plan(sp, kD);
  IntegratorConfig cfg = tight(100 * plan.T_sw);
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  const Trajectory tr = integrate(kStart, {sp.h_a(), plan.T_sw}, sp.material(), cfg);
  CHECK(tr.outcome == SwitchOutcome::Switched);

  const ApproxSolution ap = make_approximation(sp, kE1, ApproxOrder::Leq1Cartesian);
  const TimeMap tm(sp);
  double worst = 0.0;
  for (const auto& s : tr.samples) {
    if (!s.field_on) break;
    worst = std::max(worst, std::abs(s.z.m[0] - m_leq1(tm.to_tau(s.t), ap)[0]));
  }
  CHECK(worst < 0.2);
}

TEST_CASE("no pulse means no switch", "[integrator]") {
  const ScaledParams sp = case1();
  const Trajectory tr = integrate(kStart, {sp.h_a(), 0.0}, sp.material(), tight(1.0));
  CHECK(tr.outcome == SwitchOutcome::NotSwitched);
}

TEST_CASE("norm conservation with and without projection", "[integrator][integration]") {
  const ScaledParams sp = case1();
  const double T = compute_plan(sp, kD).T_sw;
  IntegratorConfig cfg = tight(100 * T);

  const Trajectory on = integrate(kStart, {sp.h_a(), T}, sp.material(), cfg);
  CHECK(on.max_norm_drift < 1e-12);
  CHECK(on.max_orthogonality < 1e-8);

  cfg.renormalize = false;
  cfg.norm_abort_tol = 1e-3;
  const Trajectory off = integrate(kStart, {sp.h_a(), T}, sp.material(), cfg);
  CHECK(off.max_norm_drift < 1e-6);
  CHECK(off.max_orthogonality < 1e-8);
  CHECK(off.outcome == SwitchOutcome::Switched);
}

TEST_CASE("energy balance on a constant-field segment and on relaxation", "[integrator][integration]") {
  const ScaledParams sp = case1();
  const double T = compute_plan(sp, kD).T_sw;
  const MaterialParams p = sp.material();
  IntegratorConfig cfg = tight(3 * T);
  cfg.stop_on_decision = false;
  cfg.max_step = 2 * kPi * p.eta / 20;
  const Trajectory tr = integrate(kStart, {sp.h_a(), T}, p, cfg);

  const EnergyAuditReport pulse = energy_audit(tr, p, 0.0, T);
  CHECK_FALSE(pulse.too_sparse);
  CHECK(pulse.points > 100);
  CHECK(pulse.max_rel_residual < 1e-4);

  const EnergyAuditReport relax = energy_audit(tr, p, T, 3 * T);
  CHECK_FALSE(relax.too_sparse);
  CHECK(relax.max_rel_residual < 1e-4);
  CHECK(relax.max_energy_increase <= 0.0);
}

TEST_CASE("energy is conserved without damping", "[integrator]") {
  const MaterialParams p{kD, 1e-14, 0.02};
  const Vec3 m = Vec3{0.8, 0.5, 0.33} / norm(Vec3{0.8, 0.5, 0.33});
  const SpinState z0{m, oracle::random_tangent(m, 0.5)};
  IntegratorConfig cfg = tight(2.0);
  cfg.certify_basin = false;
  cfg.max_step = 2 * kPi * p.eta / 20;
  const Trajectory tr = integrate(z0, {}, p, cfg);
  const double W0 = tr.samples.front().W;
  double worst = 0.0;
  for (const auto& s : tr.samples) worst = std::max(worst, std::abs(s.W - W0));
  CHECK(worst < 1e-8);
  const EnergyAuditReport rep = energy_audit(tr, p);
  CHECK_FALSE(rep.too_sparse);
  CHECK(rep.max_abs_residual < 1e-6);
}

TEST_CASE("sparse sampling is flagged by the audit", "[integrator]") {
  const MaterialParams p{kD, 0.01, 0.02};
  Trajectory tr;
  for (int k = 0; k < 10; ++k) tr.samples.push_back({0.5 * k, kStart, 0.0, false});
  CHECK(energy_audit(tr, p).too_sparse);
  CHECK(energy_audit(Trajectory{}, p).too_sparse);
}

TEST_CASE("halving tolerances moves the final state less than the decision margin",
          "[integrator][integration]") {
  const ScaledParams sp = case2();
  const double T = compute_plan(sp, kD).T_sw;
  IntegratorConfig a = tight(3 * T);
  a.stop_on_decision = false;
  a.certify_basin = false;
  IntegratorConfig b = a;
  b.rel_tol /= 2;
  b.abs_tol /= 2;
  const Trajectory ra = integrate(kStart, {sp.h_a(), T}, sp.material(), a);
  const Trajectory rb = integrate(kStart, {sp.h_a(), T}, sp.material(), b);
  REQUIRE(ra.t_final == rb.t_final);
  CHECK(norm(ra.final_state.m - rb.final_state.m) < a.convergence_tol);
  CHECK(norm(ra.final_state.v - rb.final_state.v) < a.convergence_tol);
}

TEST_CASE("pulse step size scales with the inertia", "[integrator]") {
  const Vec3 h{0, 5, 0};
  IntegratorConfig cfg = tight(0.5);
  cfg.record = false;
  const Trajectory big = integrate(kStart, {h}, {kD, 0.01, 0.02}, cfg);
  const Trajectory small = integrate(kStart, {h}, {kD, 0.01, 0.002}, cfg);
  const double ratio = big.mean_pulse_step / small.mean_pulse_step;
  CHECK(ratio > 10.0 / 1.5);
  CHECK(ratio < 10.0 * 1.5);
}

TEST_CASE("adaptive solution agrees with fixed-step RK4", "[integrator][oracle]") {
  const ScaledParams sp = case2();
  const double T = compute_plan(sp, kD).T_sw;
  const MaterialParams p = sp.material();
  IntegratorConfig cfg = tight(1.5 * T);
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  cfg.stop_on_decision = false;
  cfg.renormalize = false;
  const Trajectory tr = integrate(kStart, {sp.h_a(), T}, p, cfg);
  const SpinState ref = oracle::rk4(kStart, sp.h_a(), T, p.D, p.alpha, p.eta, 1.5 * T, 400000);
  CHECK(max_abs(tr.final_state.m - ref.m) < 1e-8);
  CHECK(max_abs(tr.final_state.v - ref.v) < 1e-7);
}

TEST_CASE("failure paths", "[integrator]") {
  const MaterialParams p{kD, 0.01, 0.02};

  SECTION("step size underflow keeps the last good state") {
    try {
      integrate(kStart, {{0, 1e300, 0}}, p, tight(1.0));
      FAIL("no failure raised");
    } catch (const IntegrationFailure& e) {
      CHECK(e.t() == 0.0);
      CHECK(e.last_state().m == kE1);
    }
  }

  SECTION("norm drift aborts") {
    IntegratorConfig cfg = tight(1.0);
    cfg.renormalize = false;
    cfg.rel_tol = 1e-3;
    cfg.abs_tol = 1e-3;
    cfg.norm_abort_tol = 1e-9;
    CHECK_THROWS_AS(integrate(kStart, {{0, 5, 0}}, p, cfg), IntegrationFailure);
  }

  SECTION("step budget leaves the outcome undecided") {
    IntegratorConfig cfg = tight(1.0);
    cfg.max_wall_steps = 50;
    const Trajectory tr = integrate(kStart, {{0, 5, 0}}, p, cfg);
    CHECK(tr.outcome == SwitchOutcome::Undecided);
    CHECK(tr.decided_by == DecidedBy::Budget);
  }
}

TEST_CASE("equilibrium classification", "[integrator]") {
  CHECK(classify_equilibrium({-kE1, {}}, 1e-6) == SwitchOutcome::Switched);
  CHECK(classify_equilibrium({kE1, {}}, 1e-6) == SwitchOutcome::NotSwitched);
  CHECK(classify_equilibrium({-kE3, {}}, 1e-6) == SwitchOutcome::Other);
  CHECK_FALSE(classify_equilibrium({kE1, {0, 1e-3, 0}}, 1e-6));
  CHECK_FALSE(classify_equilibrium({kE2 * 0.0 + Vec3{0.6, 0.8, 0}, {}}, 1e-6));
}

TEST_CASE("sweep around the planned window", "[integrator][integration]") {
  const ScaledParams sp = case1();
  const SwitchPlan plan = compute_plan(sp, kD);
  const double d = *plan.delta_sw_star;
  std::vector<double> grid;
  for (int k = -6; k <= 6; ++k) grid.push_back(plan.T_sw + 0.5 * k * d);
  const IntegratorConfig cfg = tight(100 * plan.T_sw);
  const auto pts = sweep(kStart, sp.h_a(), sp.material(), cfg, grid, 3);
  REQUIRE(pts.size() == grid.size());
  int first = -1, last = -1;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    CHECK(pts[i].error.empty());
    CHECK(pts[i].t_star == grid[i]);
    if (pts[i].outcome == SwitchOutcome::Switched) {
      if (first < 0) first = i;
      last = i;
    }
  }
  REQUIRE(first >= 0);
  for (int i = first; i <= last; ++i) CHECK(pts[i].outcome == SwitchOutcome::Switched);
  CHECK(grid[first] <= plan.T_sw - d);
  CHECK(grid[last] >= plan.T_sw + d);

  const auto serial = sweep(kStart, sp.h_a(), sp.material(), cfg, grid, 1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(serial[i].outcome == pts[i].outcome);
    CHECK(serial[i].final_W == pts[i].final_W);
  }

  CHECK(sweep(kStart, sp.h_a(), sp.material(), cfg, {}).empty());
  const auto none = sweep(kStart, sp.h_a(), sp.material(), cfg, {0.0});
  CHECK(none[0].outcome == SwitchOutcome::NotSwitched);
}
