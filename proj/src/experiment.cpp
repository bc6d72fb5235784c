#include "illg/experiment.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "illg/csv.hpp"
#include "illg/errors.hpp"
#include "illg/integrator.hpp"
#include "illg/mts.hpp"

namespace illg {

namespace {

double b_of_n(double alpha_hat, double eta_hat, double epsilon, int n) {
  const double mu = std::sqrt(alpha_hat) * epsilon;
  return std::sqrt(alpha_hat) / (2.0 * mu * eta_hat * n);
}

// Writes to path when given, else to fallback.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw ConfigError("cannot open output file " + path);
    os_ = &file_;
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

std::string cell(double x) { return fmt_double(x); }

const std::string kNan = "nan";

// Closed-form columns for the pulse phase of a run that starts at rest.
class ApproxColumns {
 public:
  explicit ApproxColumns(const ResolvedExperiment& r) {
    if (!r.scaled || !(r.z0.v == Vec3{})) return;
    tm_.emplace(*r.scaled);
    try {
      ApproxSolution a = make_approximation(*r.scaled, r.z0.m, ApproxOrder::Leq2Spherical);
      m_leq2_general(0.0, a);
      leq2_ = a;
    } catch (const std::exception&) {
    }
    try {
      ApproxSolution a = make_approximation(*r.scaled, r.z0.m, ApproxOrder::Leq1Cartesian);
      m_leq1(0.0, a);
      leq1_ = a;
    } catch (const std::exception&) {
    }
  }

  bool any() const { return leq1_ || leq2_; }
  bool has_leq1() const { return leq1_.has_value(); }
  bool has_leq2() const { return leq2_.has_value(); }

  std::vector<std::string> cells(double t, bool field_on) const {
    std::vector<std::string> out(9, kNan);
    if (!field_on || !tm_) return out;
    const double tau = tm_->to_tau(t);
    if (leq1_) {
      const Vec3 m = m_leq1(tau, *leq1_);
      const Vec3 v = velocity_leq1(tau, *leq1_) / tm_->scale();
      for (int i = 0; i < 3; ++i) {
        out[i] = cell(m[i]);
        out[6 + i] = cell(v[i]);
      }
    }
    if (leq2_) {
      try {
        const Vec3 m = m_leq2_general(tau, *leq2_);
        for (int i = 0; i < 3; ++i) out[3 + i] = cell(m[i]);
      } catch (const std::exception&) {
      }
    }
    return out;
  }

 private:
  std::optional<TimeMap> tm_;
  std::optional<ApproxSolution> leq1_, leq2_;
};

IntegratorConfig run_config(const ResolvedExperiment& r, bool record) {
  IntegratorConfig ic = r.config.integrator;
  ic.t_end = *r.t_end;
  ic.record = record;
  return ic;
}

// Fails with the plan's own code when the schedule needed it.
int require_schedule(const ResolvedExperiment& r, bool need_t_star, std::ostream& log) {
  if (need_t_star && !r.t_star) {
    log << "error: t_star = auto needs a plan: " << r.plan_diagnostic << '\n';
    return r.plan_status != kExitOk ? r.plan_status : kExitInfeasible;
  }
  if (!r.t_end) {
    log << "error: t_end = auto needs a plan or a finite t_star: " << r.plan_diagnostic << '\n';
    return r.plan_status != kExitOk ? r.plan_status : kExitConfig;
  }
  return kExitOk;
}

void write_provenance(CsvWriter& w, const char* tag, const ResolvedExperiment& r) {
  w.comment(tag);
  for (const std::string& line : provenance(r)) w.comment(line);
}

}  // namespace

ResolvedExperiment resolve(const ExperimentConfig& cfg) {
  cfg.validate();
  ResolvedExperiment r;
  r.config = cfg;
  const Vec3& D = cfg.D;

  try {
    if (cfg.alpha) {
      r.material = {D, *cfg.alpha, *cfg.eta};
      const double eps = cfg.epsilon.value_or(std::sqrt(*cfg.alpha));
      r.h_a = cfg.h_a ? *cfg.h_a : Vec3{0.0, *cfg.b, 0.0} / eps;
      if (field_sigma(r.h_a) > 0.0) r.scaled = build_scaled(r.material, r.h_a, eps);
    } else {
      const double ah = *cfg.alpha_hat, eh = *cfg.eta_hat, eps = *cfg.epsilon;
      Vec3 h_hat;
      if (cfg.h_a) h_hat = *cfg.h_a * eps;
      if (cfg.b) h_hat = {0.0, *cfg.b, 0.0};
      if (cfg.n) h_hat = {0.0, b_of_n(ah, eh, eps, *cfg.n), 0.0};
      r.h_a = h_hat / eps;
      r.material = {D, eps * eps * ah, eps * eps * eh};
      if (field_sigma(h_hat) > 0.0) r.scaled = build_scaled_from_hats(D, ah, eh, h_hat, eps);
    }
    r.material.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  r.z0 = {cfg.m0, cfg.v0};
  if (!r.z0.is_valid()) throw ConfigError("initial state must satisfy |m| = 1 and m.v = 0");

  if (!r.scaled) {
    r.plan_status = kExitGate;
    r.plan_diagnostic = "the field has no component transverse to e1";
  } else {
    try {
      r.plan = compute_plan(*r.scaled, D);
      if (!r.plan->feasible()) {
        r.plan_status = kExitInfeasible;
        r.plan_diagnostic = "neither the weak-field case nor an exact b_n (Xi = " +
                            fmt_double(r.plan->Xi) + ")";
      }
    } catch (const HypothesisViolation& e) {
      r.plan_status = kExitGate;
      r.plan_diagnostic = e.what();
    } catch (const ThresholdExceeded& e) {
      r.plan_status = kExitGate;
      r.plan_diagnostic = std::string(e.what()) + " (mu = " + fmt_double(e.mu()) +
                          ", threshold = " + fmt_double(e.threshold()) + ")";
    }
  }

  if (cfg.t_star)
    r.t_star = *cfg.t_star;
  else if (r.plan && r.plan->feasible())
    r.t_star = r.plan->T_sw;

  if (cfg.t_end)
    r.t_end = *cfg.t_end;
  else if (r.plan && r.plan->feasible())
    r.t_end = 100.0 * r.plan->T_sw;
  else if (r.t_star && std::isfinite(*r.t_star) && *r.t_star > 0.0)
    r.t_end = 100.0 * *r.t_star;
  return r;
}

std::vector<std::string> provenance(const ResolvedExperiment& r) {
  const ExperimentConfig& c = r.config;
  std::vector<std::string> out;
  auto add = [&](const std::string& k, const std::string& v) { out.push_back(k + " = " + v); };
  if (!c.name.empty()) add("name", c.name);
  add("D", fmt_vec(r.material.D));
  add("alpha", fmt_double(r.material.alpha));
  add("eta", fmt_double(r.material.eta));
  add("h_a", fmt_vec(r.h_a));
  if (r.scaled) {
    const ScaledParams& s = *r.scaled;
    add("epsilon", fmt_double(s.epsilon));
    add("alpha_hat", fmt_double(s.alpha_hat));
    add("eta_hat", fmt_double(s.eta_hat));
    add("mu", fmt_double(s.mu));
    add("h_hat", fmt_vec(s.h_hat));
    add("omega", fmt_double(s.omega));
    add("omega_hat", fmt_double(s.omega_hat));
    add("E_hat_diag", fmt_vec({s.E_hat(0, 0), s.E_hat(1, 1), s.E_hat(2, 2)}));
  }
  add("m0", fmt_vec(r.z0.m));
  add("v0", fmt_vec(r.z0.v));
  if (r.plan) {
    add("plan_case", std::string(to_string(r.plan->kind)));
    add("T_sw", fmt_double(r.plan->T_sw));
  } else {
    add("plan", r.plan_diagnostic);
  }
  add("t_star", r.t_star ? fmt_double(*r.t_star) : "auto");
  add("t_end", r.t_end ? fmt_double(*r.t_end) : "auto");
  const IntegratorConfig& g = c.integrator;
  add("rel_tol", fmt_double(g.rel_tol));
  add("abs_tol", fmt_double(g.abs_tol));
  add("max_step", fmt_double(g.max_step));
  add("renormalize", g.renormalize ? "true" : "false");
  add("convergence_tol", fmt_double(g.convergence_tol));
  add("certify_basin", g.certify_basin ? "true" : "false");
  add("stop_on_decision", g.stop_on_decision ? "true" : "false");
  add("stride", std::to_string(c.stride));
  return out;
}

int cmd_plan(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log) {
  const ResolvedExperiment r = resolve(cfg);
  if (!r.plan) {
    log << "gate failure: " << r.plan_diagnostic << '\n';
    return r.plan_status;
  }
  const SwitchPlan& p = *r.plan;
  const ScaledParams& s = *r.scaled;
  out << "case = " << to_string(p.kind);
  if (p.kind == SwitchCase::CaseII) out << " (n = " << p.n << ")";
  out << '\n'
      << "mu = " << fmt_double(s.mu) << '\n'
      << "mu0_tilde = " << fmt_double(p.mu0_tilde) << '\n'
      << "omega_hat = " << fmt_double(s.omega_hat) << '\n'
      << "Xi = " << fmt_double(p.Xi) << '\n'
      << "K_f = " << fmt_double(p.K_f) << '\n'
      << "T_sw = " << fmt_double(p.T_sw) << '\n'
      << "tau_sw = " << fmt_double(p.tau_sw) << '\n'
      << "delta_sw = " << fmt_double(p.delta_sw) << '\n'
      << "delta_sw_star = " << (p.delta_sw_star ? fmt_double(*p.delta_sw_star) : "none") << '\n';

  if (cfg.b_table) {
    const auto table = admissible_b(s.mu, s.alpha_hat, s.eta_hat, cfg.D, 1'000'000);
    out << "admissible b_n (Xi_n < 1): " << table.size() << " values\n";
    out << "n,b,Xi\n";
    for (const AdmissibleField& f : table)
      out << f.n << ',' << fmt_double(f.b) << ',' << fmt_double(f.Xi) << '\n';
  }

  if (!p.feasible()) {
    log << "infeasible: " << r.plan_diagnostic << '\n';
    return kExitInfeasible;
  }
  const auto [lo, hi] = p.window();
  out << "window = [" << fmt_double(lo) << ", " << fmt_double(hi) << "]\n";
  const PlannedStateReport check = planned_state_check(s, cfg.D, p.T_sw);
  out << "planned_W_hat = " << fmt_double(check.W_hat) << " (margin " << fmt_double(check.margin)
      << ", " << to_string(check.verdict) << ")\n";

  if (!cfg.plan_path.empty()) {
    nlohmann::ordered_json j;
    j["format"] = "illg-plan v1";
    j["case"] = std::string(to_string(p.kind));
    j["n"] = p.n;
    j["mu"] = s.mu;
    j["mu0_tilde"] = p.mu0_tilde;
    j["omega_hat"] = s.omega_hat;
    j["Xi"] = p.Xi;
    j["K_f"] = p.K_f;
    j["T_sw"] = p.T_sw;
    j["tau_sw"] = p.tau_sw;
    j["delta_sw"] = p.delta_sw;
    j["delta_sw_star"] = p.delta_sw_star ? nlohmann::ordered_json(*p.delta_sw_star) : nullptr;
    j["window"] = {lo, hi};
    j["h_a"] = {r.h_a[0], r.h_a[1], r.h_a[2]};
    j["provenance"] = provenance(r);
    Sink sink(cfg.plan_path, out);
    sink.stream() << j.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log) {
  const ResolvedExperiment r = resolve(cfg);
  if (int code = require_schedule(r, true, log)) return code;

  Trajectory tr;
  try {
    tr = integrate(r.z0, {r.h_a, *r.t_star}, r.material, run_config(r, true));
  } catch (const IntegrationFailure& e) {
    log << "integrator failure at t = " << fmt_double(e.t()) << ": " << e.what()
        << "; last state m = (" << fmt_vec(e.last_state().m) << "), v = ("
        << fmt_vec(e.last_state().v) << ")\n";
    return kExitIntegrator;
  }

  const ApproxColumns approx(r);
  if (cfg.with_approx && !approx.any())
    log << "note: no closed form applies to this run; approximation columns are nan\n";

  Sink sink(cfg.trajectory_path, out);
  CsvWriter w(sink.stream());
  write_provenance(w, kTrajectoryCsvTag, r);
  w.header(trajectory_columns(cfg.with_approx));
  for (const std::size_t i : strided_indices(tr.samples.size(), cfg.stride)) {
    const TrajectorySample& s = tr.samples[i];
    std::vector<std::string> row = {cell(s.t),      cell(s.z.m[0]), cell(s.z.m[1]),
                                    cell(s.z.m[2]), cell(s.z.v[0]), cell(s.z.v[1]),
                                    cell(s.z.v[2]), cell(s.W),      s.field_on ? "1" : "0"};
    if (cfg.with_approx)
      for (std::string& c : approx.cells(s.t, s.field_on)) row.push_back(std::move(c));
    w.row(row);
  }

  std::ostream& report = cfg.trajectory_path.empty() ? log : out;
  report << "outcome = " << to_string(tr.outcome) << '\n'
         << "decided_by = " << to_string(tr.decided_by) << '\n'
         << "decision_time = " << (tr.decision_time ? fmt_double(*tr.decision_time) : "none")
         << '\n'
         << "t_final = " << fmt_double(tr.t_final) << '\n'
         << "final_m = " << fmt_vec(tr.final_state.m) << '\n'
         << "final_W = " << fmt_double(tr.final_W) << '\n'
         << "max_norm_drift = " << fmt_double(tr.max_norm_drift) << '\n'
         << "max_energy_increase = " << fmt_double(tr.max_energy_increase) << '\n'
         << "steps = " << tr.accepted_steps << " accepted, " << tr.rejected_steps << " rejected\n";
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log, unsigned workers) {
  const ResolvedExperiment r = resolve(cfg);

  struct Job {
    double b;  // nan for a t_star sweep
    Vec3 h_a;
    std::vector<double> grid;
    double t_end;
  };
  std::vector<Job> jobs;

  if (!cfg.b_grid.empty()) {
    const double eps = r.scaled ? r.scaled->epsilon
                                : cfg.epsilon.value_or(std::sqrt(r.material.alpha));
    for (const double b : cfg.b_grid) {
      const ScaledParams sp = build_scaled(r.material, Vec3{0.0, b, 0.0} / eps, eps);
      double T = 0.0;
      try {
        T = compute_plan(sp, cfg.D).T_sw;
      } catch (const std::exception&) {
        T = kPi * sp.mu * sp.eta_hat / (sp.omega_hat * sp.alpha_hat);
      }
      const double t_star = cfg.t_star.value_or(T);
      jobs.push_back({b, sp.h_a(), {t_star}, cfg.t_end.value_or(100.0 * T)});
    }
  } else {
    std::vector<double> grid = cfg.t_star_grid;
    if (grid.empty() && cfg.grid_points > 0) {
      if (!r.plan || !r.plan->feasible()) {
        log << "error: an automatic grid needs a feasible plan: " << r.plan_diagnostic << '\n';
        return r.plan_status != kExitOk ? r.plan_status : kExitInfeasible;
      }
      const double d = r.plan->delta_sw_star.value_or(r.plan->delta_sw);
      const double lo = r.plan->T_sw - cfg.grid_halfwidth * d;
      const double hi = r.plan->T_sw + cfg.grid_halfwidth * d;
      for (int k = 0; k < cfg.grid_points; ++k)
        grid.push_back(cfg.grid_points == 1 ? r.plan->T_sw
                                            : lo + (hi - lo) * k / (cfg.grid_points - 1));
    }
    if (!grid.empty()) {
      if (int code = require_schedule(r, false, log)) return code;
      jobs.push_back({std::nan(""), r.h_a, grid, *r.t_end});
    }
  }

  Sink sink(cfg.sweep_path, out);
  CsvWriter w(sink.stream());
  write_provenance(w, kSweepCsvTag, r);
  std::vector<std::string> cols = sweep_columns();
  cols.insert(cols.begin(), "b");
  w.header(cols);

  bool failed = false;
  for (const Job& job : jobs) {
    IntegratorConfig ic = cfg.integrator;
    ic.t_end = job.t_end;
    for (const SweepPoint& pt : sweep(r.z0, job.h_a, r.material, ic, job.grid, workers)) {
      failed = failed || !pt.error.empty();
      w.row({std::isnan(job.b) ? kNan : cell(job.b), cell(pt.t_star),
             std::string(to_string(pt.outcome)), std::string(to_string(pt.decided_by)),
             cell(pt.final_W), cell(pt.final_state.m[0]), cell(pt.final_state.m[1]),
             cell(pt.final_state.m[2]), pt.error.empty() ? "" : "\"" + pt.error + "\""});
    }
  }
  if (failed) {
    log << "one or more sweep runs failed; see the error column\n";
    return kExitIntegrator;
  }
  return kExitOk;
}

int cmd_approx(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log) {
  const ResolvedExperiment r = resolve(cfg);
  if (!r.scaled) {
    log << "gate failure: " << r.plan_diagnostic << '\n';
    return kExitGate;
  }
  const ScaledParams& s = *r.scaled;
  ApproxSolution a;
  try {
    a = make_approximation(s, r.z0.m, ApproxOrder::Leq2Spherical);
    m_leq2_general(0.0, a);
  } catch (const ThresholdExceeded& e) {
    log << "gate failure: " << e.what() << " (mu = " << fmt_double(e.mu())
        << ", mu0 = " << fmt_double(e.threshold()) << ")\n";
    return kExitGate;
  } catch (const ChartError& e) {
    log << "gate failure: " << e.what() << '\n';
    return kExitGate;
  }
  if (!(r.z0.v == Vec3{})) log << "note: the closed forms assume a start at rest\n";

  const TimeMap tm(s);
  const double t_end = cfg.t_end.value_or(2.0 * kPi / (s.mu * s.omega_hat) * tm.scale());
  const ApproxColumns cols(r);
  if (!cols.has_leq1()) log << "note: first-order columns need a field along +e2; they are nan\n";

  Sink sink(cfg.trajectory_path, out);
  CsvWriter w(sink.stream());
  write_provenance(w, kTrajectoryCsvTag, r);
  std::vector<std::string> header = {"t", "tau"};
  const auto all = trajectory_columns(true);
  header.insert(header.end(), all.end() - 9, all.end());
  w.header(header);
  for (int k = 0; k < cfg.approx_points; ++k) {
    const double t = t_end * k / (cfg.approx_points - 1);
    std::vector<std::string> row = {cell(t), cell(tm.to_tau(t))};
    for (std::string& c : cols.cells(t, true)) row.push_back(std::move(c));
    w.row(row);
  }
  return kExitOk;
}

}  // namespace illg
