// Command-line driver: plan, simulate, sweep, approx, validate.

#include <CLI11.hpp>
#include <iostream>

#include "illg/config.hpp"
#include "illg/errors.hpp"
#include "illg/experiment.hpp"
#include "illg/integrator.hpp"
#include "illg/validation.hpp"

namespace {

struct Options {
  std::string config;
  std::string bundled;
  std::string out;
  std::string t_star;
  int stride = 0;
  bool with_approx = false;
  bool b_table = false;
  unsigned workers = 0;
  std::vector<int> criteria;
};

illg::ExperimentConfig load(const Options& o) {
  if (o.config.empty() == o.bundled.empty())
    throw illg::ConfigError("give exactly one of --config <path> or --bundled <name>");
  illg::ExperimentConfig cfg =
      o.config.empty() ? illg::bundled_config(o.bundled) : illg::load_config(o.config);
  if (!o.t_star.empty()) {
    if (o.t_star == "auto") {
      cfg.t_star.reset();
    } else {
      try {
        std::size_t used = 0;
        cfg.t_star = std::stod(o.t_star, &used);
        if (used != o.t_star.size()) throw std::invalid_argument(o.t_star);
      } catch (const std::exception&) {
        throw illg::ConfigError("--t-star expects a number or auto, got '" + o.t_star + "'");
      }
    }
  }
  if (o.stride > 0) cfg.stride = o.stride;
  if (o.with_approx) cfg.with_approx = true;
  if (o.b_table) cfg.b_table = true;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "experiment file");
  sub->add_option("--bundled", o.bundled, "bundled experiment name");
  sub->add_option("--t-star", o.t_star, "switch-off instant or auto");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inertial macrospin switching: planning, simulation and validation"};
  app.require_subcommand(1);
  Options o;

  auto* plan = app.add_subcommand("plan", "print the switching plan");
  add_common(plan, o);
  plan->add_option("--out", o.out, "machine-readable plan file (JSON)");
  plan->add_flag("--b-table", o.b_table, "list the admissible b_n");

  auto* sim = app.add_subcommand("simulate", "integrate and write a trajectory CSV");
  add_common(sim, o);
  sim->add_option("--out", o.out, "trajectory CSV (stdout when omitted)");
  sim->add_option("--stride", o.stride, "keep every k-th sample")->check(CLI::PositiveNumber);
  sim->add_flag("--with-approx", o.with_approx, "add closed-form columns");

  auto* swp = app.add_subcommand("sweep", "outcome per switch-off instant or field magnitude");
  add_common(swp, o);
  swp->add_option("--out", o.out, "sweep CSV (stdout when omitted)");
  swp->add_option("--workers", o.workers, "worker threads (0: all cores)");

  auto* apx = app.add_subcommand("approx", "evaluate the closed forms only");
  add_common(apx, o);
  apx->add_option("--out", o.out, "CSV (stdout when omitted)");

  auto* val = app.add_subcommand("validate", "run the acceptance criteria");
  val->add_option("--criterion", o.criteria, "criterion ids (all when omitted)")
      ->check(CLI::Range(1, illg::kCriterionCount));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : illg::kExitConfig;
  }

  try {
    if (val->parsed()) return illg::cmd_validate(std::cout, o.criteria);
    illg::ExperimentConfig cfg = load(o);
    if (plan->parsed()) {
      if (!o.out.empty()) cfg.plan_path = o.out;
      return illg::cmd_plan(cfg, std::cout, std::cerr);
    }
    if (sim->parsed()) {
      if (!o.out.empty()) cfg.trajectory_path = o.out;
      return illg::cmd_simulate(cfg, std::cout, std::cerr);
    }
    if (swp->parsed()) {
      if (!o.out.empty()) cfg.sweep_path = o.out;
      return illg::cmd_sweep(cfg, std::cout, std::cerr, o.workers);
    }
    if (apx->parsed()) {
      if (!o.out.empty()) cfg.trajectory_path = o.out;
      return illg::cmd_approx(cfg, std::cout, std::cerr);
    }
  } catch (const illg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return illg::kExitConfig;
  } catch (const illg::HypothesisViolation& e) {
    std::cerr << "gate failure: " << e.what() << '\n';
    return illg::kExitGate;
  } catch (const illg::ThresholdExceeded& e) {
    std::cerr << "gate failure: " << e.what() << '\n';
    return illg::kExitGate;
  } catch (const illg::ChartError& e) {
    std::cerr << "gate failure: " << e.what() << '\n';
    return illg::kExitGate;
  } catch (const illg::InfeasiblePlan& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return illg::kExitInfeasible;
  } catch (const illg::IntegrationFailure& e) {
    std::cerr << "integrator failure: " << e.what() << '\n';
    return illg::kExitIntegrator;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return illg::kExitConfig;
  }
  return illg::kExitConfig;
}
