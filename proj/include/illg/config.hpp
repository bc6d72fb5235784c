#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "illg/integrator.hpp"
#include "illg/linalg.hpp"

namespace illg {

// line() is 0 for errors that are not tied to one line of the file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0);
  int line() const { return line_; }

 private:
  int line_;
};

// Flat INI file with sections
//   [material]   D, alpha + eta (epsilon optional), or alpha_hat + eta_hat + epsilon
//   [field]      h_a (physical), b (scaled, along e2) or n (b = b_n)
//   [initial]    m, v
//   [schedule]   t_star, t_end (number or auto), t_star_grid, grid_points, grid_halfwidth,
//                b_grid
//   [integrator] tolerances and switches of IntegratorConfig
//   [output]     trajectory, plan, sweep, stride, with_approx, b_table, approx_points
struct ExperimentConfig {
  std::string name;

  Vec3 D{-0.1087, 0.0, 1.0};
  std::optional<double> alpha, eta;
  std::optional<double> alpha_hat, eta_hat;
  std::optional<double> epsilon;

  std::optional<Vec3> h_a;
  std::optional<double> b;
  std::optional<int> n;

  Vec3 m0{1.0, 0.0, 0.0};
  Vec3 v0{};

  std::optional<double> t_star;  // empty: centre of the planned window
  std::optional<double> t_end;   // empty: 100 T_sw
  std::vector<double> t_star_grid;
  int grid_points = 0;  // > 0: auto grid over T_sw +- grid_halfwidth * delta_sw*
  double grid_halfwidth = 3.0;
  std::vector<double> b_grid;  // sweep over scaled field magnitudes along e2

  // t_end and record are set per command; they are not part of the file.
  IntegratorConfig integrator;

  std::string trajectory_path;
  std::string plan_path;
  std::string sweep_path;
  int stride = 1;
  bool with_approx = false;
  bool b_table = false;
  int approx_points = 2001;

  bool operator==(const ExperimentConfig&) const = default;

  // Structural checks (exactly one parameter style, one field source, ...).
  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

// Number formatting shared by every text output: 17 significant digits.
std::string fmt_double(double x);
std::string fmt_vec(const Vec3& v);

}  // namespace illg
