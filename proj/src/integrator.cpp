#include "illg/integrator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <thread>

#include "illg/planner.hpp"

namespace illg {

namespace {

using State = std::array<double, 6>;

State pack(const SpinState& z) {
  return {z.m[0], z.m[1], z.m[2], z.v[0], z.v[1], z.v[2]};
}

SpinState unpack(const State& y) { return {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}}; }

State field(const State& y, const Vec3& h, const MaterialParams& p) {
  const SpinRate r = illg_rhs(unpack(y), h, p);
  return {r.dm[0], r.dm[1], r.dm[2], r.dv[0], r.dv[1], r.dv[2]};
}

// Dormand-Prince 5(4); the field is autonomous on each segment, so no nodes.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

class Stepper {
 public:
  Stepper(const MaterialParams& p, const IntegratorConfig& cfg) : p_(p), cfg_(cfg) {}

  // One trial step from (y, k1); fills y_new, k7 and returns the scaled error norm.
  double attempt(const State& y, const State& k1, double h, const Vec3& hf, State& y_new,
                 State& k7) const {
    State s, k2, k3, k4, k5, k6;
    for (int i = 0; i < 6; ++i) s[i] = y[i] + h * a21 * k1[i];
    k2 = field(s, hf, p_);
    for (int i = 0; i < 6; ++i) s[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = field(s, hf, p_);
    for (int i = 0; i < 6; ++i) s[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = field(s, hf, p_);
    for (int i = 0; i < 6; ++i)
      s[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = field(s, hf, p_);
    for (int i = 0; i < 6; ++i)
      s[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = field(s, hf, p_);
    for (int i = 0; i < 6; ++i)
      y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = field(y_new, hf, p_);

    double acc = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i] + e7 * k7[i]);
      const double sc = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      acc += (err / sc) * (err / sc);
    }
    return std::sqrt(acc / 6.0);
  }

  double initial_step(const State& y, const State& f0, const Vec3& hf, double span) const {
    auto scaled_norm = [&](const State& v) {
      double acc = 0.0;
      for (int i = 0; i < 6; ++i) {
        const double sc = cfg_.abs_tol + cfg_.rel_tol * std::abs(y[i]);
        acc += (v[i] / sc) * (v[i] / sc);
      }
      return std::sqrt(acc / 6.0);
    };
    const double d0 = scaled_norm(y), d1 = scaled_norm(f0);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    State y1;
    for (int i = 0; i < 6; ++i) y1[i] = y[i] + h0 * f0[i];
    const State f1 = field(y1, hf, p_);
    State df;
    for (int i = 0; i < 6; ++i) df[i] = f1[i] - f0[i];
    const double d2 = scaled_norm(df) / h0;
    const double big = std::max(d1, d2);
    const double h1 = big <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / big, 0.2);
    double h = std::min({100.0 * h0, h1, span});
    if (cfg_.max_step > 0.0) h = std::min(h, cfg_.max_step);
    return h;
  }

 private:
  const MaterialParams& p_;
  const IntegratorConfig& cfg_;
};

void project(State& y) {
  Vec3 m{y[0], y[1], y[2]};
  Vec3 v{y[3], y[4], y[5]};
  m = m / norm(m);
  v -= dot(m, v) * m;
  y = pack({m, v});
}

class Run {
 public:
  Run(const FieldSchedule& s, const MaterialParams& p, const IntegratorConfig& cfg)
      : sched_(s), p_(p), cfg_(cfg) {}

  // Returns true when the run should stop.
  bool observe(double t, const State& y, bool field_on, bool new_segment) {
    const SpinState z = unpack(y);
    const Vec3 h = field_on ? sched_.h_a : Vec3{};
    const double W = energy_W(z, h, p_);
    tr_.max_norm_drift = std::max(tr_.max_norm_drift, std::abs(norm(z.m) - 1.0));
    tr_.max_orthogonality = std::max(tr_.max_orthogonality, std::abs(dot(z.m, z.v)));
    if (has_prev_ && !new_segment && prev_on_ == field_on)
      tr_.max_energy_increase = std::max(tr_.max_energy_increase, W - prev_W_);
    has_prev_ = true;
    prev_W_ = W;
    prev_on_ = field_on;
    if (cfg_.record) tr_.samples.push_back({t, z, W, field_on});
    tr_.t_final = t;
    tr_.final_state = z;
    tr_.final_W = W;

    const bool zero_field = !field_on || sched_.h_a == Vec3{};
    if (!zero_field) return false;
    if (!tr_.decision_time) {
      if (auto eq = classify_equilibrium(z, cfg_.convergence_tol)) {
        decide(*eq, DecidedBy::Convergence, t);
      } else if (cfg_.certify_basin) {
        const BasinVerdict b = basin_membership(z, p_);
        if (b == BasinVerdict::InMinusBasin) decide(SwitchOutcome::Switched, DecidedBy::Basin, t);
        if (b == BasinVerdict::InPlusBasin) decide(SwitchOutcome::NotSwitched, DecidedBy::Basin, t);
      }
    } else if (tr_.decided_by == DecidedBy::Basin) {
      // Keep integrating: a later convergence is recorded as the deciding event.
      if (auto eq = classify_equilibrium(z, cfg_.convergence_tol))
        decide(*eq, DecidedBy::Convergence, t);
    }
    return tr_.decision_time.has_value() && cfg_.stop_on_decision;
  }

  Trajectory& result() { return tr_; }

 private:
  void decide(SwitchOutcome o, DecidedBy by, double t) {
    tr_.outcome = o;
    tr_.decided_by = by;
    tr_.decision_time = t;
  }

  const FieldSchedule& sched_;
  const MaterialParams& p_;
  const IntegratorConfig& cfg_;
  Trajectory tr_;
  bool has_prev_ = false;
  bool prev_on_ = false;
  double prev_W_ = 0.0;
};

// Derivative at x0 of the Lagrange basis on five nodes.
std::array<double, 5> fd_weights(const std::array<double, 5>& x, double x0) {
  std::array<double, 5> w{};
  for (std::size_t k = 0; k < 5; ++k) {
    double denom = 1.0;
    for (std::size_t j = 0; j < 5; ++j)
      if (j != k) denom *= x[k] - x[j];
    double num = 0.0;
    for (std::size_t m = 0; m < 5; ++m) {
      if (m == k) continue;
      double prod = 1.0;
      for (std::size_t j = 0; j < 5; ++j)
        if (j != k && j != m) prod *= x0 - x[j];
      num += prod;
    }
    w[k] = num / denom;
  }
  return w;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("integrator tolerances must be positive");
  if (!(convergence_tol > 0.0)) throw std::invalid_argument("convergence_tol must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (max_step < 0.0) throw std::invalid_argument("max_step must be non-negative");
  if (max_wall_steps <= 0) throw std::invalid_argument("max_wall_steps must be positive");
}

std::string_view to_string(DecidedBy d) {
  switch (d) {
    case DecidedBy::Convergence: return "convergence";
    case DecidedBy::Basin: return "basin";
    case DecidedBy::Budget: return "budget";
  }
  return "unknown";
}

std::optional<SwitchOutcome> classify_equilibrium(const SpinState& z, double tol) {
  if (norm(z.v) >= tol) return std::nullopt;
  if (norm(z.m + kE1) < tol) return SwitchOutcome::Switched;
  if (norm(z.m - kE1) < tol) return SwitchOutcome::NotSwitched;
  for (const Vec3& e : {kE2, kE3})
    if (norm(z.m - e) < tol || norm(z.m + e) < tol) return SwitchOutcome::Other;
  return std::nullopt;
}

Trajectory integrate(const SpinState& z0, const FieldSchedule& schedule, const MaterialParams& p,
                     const IntegratorConfig& cfg) {
  p.validate();
  cfg.validate();
  if (!z0.is_valid()) throw std::invalid_argument("initial state violates |m| = 1, m.v = 0");
  if (schedule.t_star < 0.0) throw std::invalid_argument("t_star must be non-negative");

  Run run(schedule, p, cfg);
  Stepper stepper(p, cfg);
  State y = pack(z0);
  double t = 0.0;
  if (run.observe(t, y, schedule.field_on(t), true)) return std::move(run.result());

  std::vector<double> ends;
  if (schedule.t_star > 0.0 && schedule.t_star < cfg.t_end) ends.push_back(schedule.t_star);
  ends.push_back(cfg.t_end);

  long long steps = 0;
  double pulse_step_sum = 0.0;
  long long pulse_steps = 0;
  for (const double end : ends) {
    const bool on = schedule.field_on(t);
    const Vec3 hf = on ? schedule.h_a : Vec3{};
    State k1 = field(y, hf, p);
    double h = stepper.initial_step(y, k1, hf, end - t);
    bool last_rejected = false;
    while (t < end) {
      if (steps >= cfg.max_wall_steps) {
        Trajectory& tr = run.result();
        tr.mean_pulse_step = pulse_steps ? pulse_step_sum / pulse_steps : 0.0;
        return std::move(tr);
      }
      if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
      const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1e-3);
      if (!(h > h_min)) throw IntegrationFailure("step size underflow", t, unpack(y));
      bool lands = false;
      if (t + h >= end - 1e-14 * std::abs(end)) {
        h = end - t;
        lands = true;
      }
      State y_new, k7;
      const double err = stepper.attempt(y, k1, h, hf, y_new, k7);
      ++steps;
      if (!(err <= 1.0)) {
        ++run.result().rejected_steps;
        const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
        h *= fac;
        last_rejected = true;
        continue;
      }

      t = lands ? end : t + h;
      if (on) {
        pulse_step_sum += h;
        ++pulse_steps;
      }
      Trajectory& tr = run.result();
      ++tr.accepted_steps;
      const double defect =
          std::abs(std::sqrt(y_new[0] * y_new[0] + y_new[1] * y_new[1] + y_new[2] * y_new[2]) - 1.0);
      tr.max_step_norm_defect = std::max(tr.max_step_norm_defect, defect);
      y = y_new;
      if (cfg.renormalize) {
        project(y);
        k1 = field(y, hf, p);
      } else {
        k1 = k7;
      }
      const double drift = cfg.renormalize ? defect : std::abs(norm(unpack(y).m) - 1.0);
      if (drift > cfg.norm_abort_tol)
        throw IntegrationFailure("norm drift above abort tolerance", t, unpack(y));

      const bool field_now = schedule.field_on(t);
      if (run.observe(t, y, field_now, false)) {
        tr.mean_pulse_step = pulse_steps ? pulse_step_sum / pulse_steps : 0.0;
        return std::move(tr);
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h *= fac;
      last_rejected = false;
    }
  }
  Trajectory& tr = run.result();
  tr.mean_pulse_step = pulse_steps ? pulse_step_sum / pulse_steps : 0.0;
  return std::move(tr);
}

EnergyAuditReport energy_audit(const Trajectory& traj, const MaterialParams& p, double t_from,
                               double t_to) {
  EnergyAuditReport rep;
  const auto& s = traj.samples;
  const double max_gap = 2.0 * kPi * p.eta / 10.0;
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    bool ok = true;
    std::array<double, 5> x{};
    for (std::size_t k = 0; k < 5; ++k) {
      const auto& q = s[i - 2 + k];
      if (q.t < t_from || q.t > t_to || q.field_on != s[i].field_on) ok = false;
      x[k] = q.t;
    }
    if (!ok) continue;
    const auto w = fd_weights(x, s[i].t);
    double dW = 0.0;
    for (std::size_t k = 0; k < 5; ++k) dW += w[k] * s[i - 2 + k].W;
    const double diss = p.alpha * dot(s[i].z.v, s[i].z.v);
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(dW + diss));
    rep.dissipation_scale = std::max(rep.dissipation_scale, diss);
    for (std::size_t k = 0; k + 1 < 5; ++k) {
      rep.max_gap = std::max(rep.max_gap, x[k + 1] - x[k]);
      rep.max_energy_increase =
          std::max(rep.max_energy_increase, s[i - 1 + k].W - s[i - 2 + k].W);
    }
    ++rep.points;
  }
  rep.too_sparse = rep.points == 0 || rep.max_gap > max_gap;
  rep.max_rel_residual =
      rep.dissipation_scale > 0.0 ? rep.max_abs_residual / rep.dissipation_scale : rep.max_abs_residual;
  return rep;
}

std::vector<SweepPoint> sweep(const SpinState& z0, const Vec3& h_a, const MaterialParams& p,
                              const IntegratorConfig& cfg, const std::vector<double>& grid,
                              unsigned workers) {
  std::vector<SweepPoint> out(grid.size());
  if (grid.empty()) return out;
  IntegratorConfig local = cfg;
  local.record = false;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      SweepPoint& pt = out[i];
      pt.t_star = grid[i];
      try {
        const Trajectory tr = integrate(z0, {h_a, grid[i]}, p, local);
        pt.outcome = tr.outcome;
        pt.decided_by = tr.decided_by;
        pt.final_W = tr.final_W;
        pt.final_state = tr.final_state;
      } catch (const std::exception& e) {
        pt.error = e.what();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, grid.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace illg
