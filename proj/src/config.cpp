#include "illg/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace illg {

ConfigError::ConfigError(const std::string& what, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_vec(const Vec3& v) {
  return fmt_double(v[0]) + ", " + fmt_double(v[1]) + ", " + fmt_double(v[2]);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, int line) {
  const std::string t = trim(s);
  if (t == "inf") return std::numeric_limits<double>::infinity();
  double x = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (t.empty() || ec != std::errc() || ptr != last)
    throw ConfigError("expected a number, got '" + t + "'", line);
  return x;
}

long long to_integer(const std::string& s, int line) {
  const std::string t = trim(s);
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("expected an integer, got '" + t + "'", line);
  return x;
}

bool to_bool(const std::string& s, int line) {
  const std::string t = trim(s);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  throw ConfigError("expected true or false, got '" + t + "'", line);
}

std::vector<double> to_list(const std::string& s, int line) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item, line));
  return out;
}

Vec3 to_vec(const std::string& s, int line) {
  const auto xs = to_list(s, line);
  if (xs.size() != 3) throw ConfigError("expected three comma-separated numbers", line);
  return {xs[0], xs[1], xs[2]};
}

std::optional<double> number_or_auto(const std::string& s, int line) {
  if (trim(s) == "auto") return std::nullopt;
  return to_double(s, line);
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](auto& c, auto& v, int) { c.name = trim(v); }},
      {"material.D", [](auto& c, auto& v, int l) { c.D = to_vec(v, l); }},
      {"material.alpha", [](auto& c, auto& v, int l) { c.alpha = to_double(v, l); }},
      {"material.eta", [](auto& c, auto& v, int l) { c.eta = to_double(v, l); }},
      {"material.alpha_hat", [](auto& c, auto& v, int l) { c.alpha_hat = to_double(v, l); }},
      {"material.eta_hat", [](auto& c, auto& v, int l) { c.eta_hat = to_double(v, l); }},
      {"material.epsilon", [](auto& c, auto& v, int l) { c.epsilon = to_double(v, l); }},
      {"field.h_a", [](auto& c, auto& v, int l) { c.h_a = to_vec(v, l); }},
      {"field.b", [](auto& c, auto& v, int l) { c.b = to_double(v, l); }},
      {"field.n",
       [](auto& c, auto& v, int l) {
         const long long n = to_integer(v, l);
         if (n < 1 || n > 1'000'000) throw ConfigError("n must be a positive integer", l);
         c.n = static_cast<int>(n);
       }},
      {"initial.m", [](auto& c, auto& v, int l) { c.m0 = to_vec(v, l); }},
      {"initial.v", [](auto& c, auto& v, int l) { c.v0 = to_vec(v, l); }},
      {"schedule.t_star", [](auto& c, auto& v, int l) { c.t_star = number_or_auto(v, l); }},
      {"schedule.t_end", [](auto& c, auto& v, int l) { c.t_end = number_or_auto(v, l); }},
      {"schedule.t_star_grid", [](auto& c, auto& v, int l) { c.t_star_grid = to_list(v, l); }},
      {"schedule.grid_points",
       [](auto& c, auto& v, int l) { c.grid_points = static_cast<int>(to_integer(v, l)); }},
      {"schedule.grid_halfwidth",
       [](auto& c, auto& v, int l) { c.grid_halfwidth = to_double(v, l); }},
      {"schedule.b_grid", [](auto& c, auto& v, int l) { c.b_grid = to_list(v, l); }},
      {"integrator.rel_tol", [](auto& c, auto& v, int l) { c.integrator.rel_tol = to_double(v, l); }},
      {"integrator.abs_tol", [](auto& c, auto& v, int l) { c.integrator.abs_tol = to_double(v, l); }},
      {"integrator.max_step",
       [](auto& c, auto& v, int l) { c.integrator.max_step = to_double(v, l); }},
      {"integrator.renormalize",
       [](auto& c, auto& v, int l) { c.integrator.renormalize = to_bool(v, l); }},
      {"integrator.convergence_tol",
       [](auto& c, auto& v, int l) { c.integrator.convergence_tol = to_double(v, l); }},
      {"integrator.max_wall_steps",
       [](auto& c, auto& v, int l) { c.integrator.max_wall_steps = to_integer(v, l); }},
      {"integrator.certify_basin",
       [](auto& c, auto& v, int l) { c.integrator.certify_basin = to_bool(v, l); }},
      {"integrator.stop_on_decision",
       [](auto& c, auto& v, int l) { c.integrator.stop_on_decision = to_bool(v, l); }},
      {"integrator.norm_abort_tol",
       [](auto& c, auto& v, int l) { c.integrator.norm_abort_tol = to_double(v, l); }},
      {"output.trajectory", [](auto& c, auto& v, int) { c.trajectory_path = trim(v); }},
      {"output.plan", [](auto& c, auto& v, int) { c.plan_path = trim(v); }},
      {"output.sweep", [](auto& c, auto& v, int) { c.sweep_path = trim(v); }},
      {"output.stride",
       [](auto& c, auto& v, int l) { c.stride = static_cast<int>(to_integer(v, l)); }},
      {"output.with_approx", [](auto& c, auto& v, int l) { c.with_approx = to_bool(v, l); }},
      {"output.b_table", [](auto& c, auto& v, int l) { c.b_table = to_bool(v, l); }},
      {"output.approx_points",
       [](auto& c, auto& v, int l) { c.approx_points = static_cast<int>(to_integer(v, l)); }},
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  const bool physical = alpha || eta;
  const bool scaled = alpha_hat || eta_hat;
  if (physical == scaled)
    throw ConfigError("give exactly one of (alpha, eta) or (alpha_hat, eta_hat, epsilon)");
  if (physical && !(alpha && eta)) throw ConfigError("alpha and eta must be given together");
  if (scaled && !(alpha_hat && eta_hat && epsilon))
    throw ConfigError("alpha_hat, eta_hat and epsilon must be given together");
  for (auto x : {alpha, eta, alpha_hat, eta_hat, epsilon})
    if (x && !(*x > 0.0)) throw ConfigError("material parameters and epsilon must be positive");
  if (!(D[0] < D[1] && D[1] < D[2])) throw ConfigError("D must satisfy D1 < D2 < D3");

  const int sources = int(h_a.has_value()) + int(b.has_value()) + int(n.has_value());
  if (sources != 1) throw ConfigError("give exactly one of h_a, b or n in [field]");
  if (n && !scaled) throw ConfigError("n selects b_n and needs alpha_hat, eta_hat, epsilon");
  if (b && !(*b > 0.0)) throw ConfigError("b must be positive");

  if (t_star && *t_star < 0.0) throw ConfigError("t_star must be non-negative");
  if (t_end && !(*t_end > 0.0)) throw ConfigError("t_end must be positive");
  for (double t : t_star_grid)
    if (t < 0.0) throw ConfigError("t_star_grid entries must be non-negative");
  if (grid_points < 0) throw ConfigError("grid_points must be non-negative");
  if (!(grid_halfwidth > 0.0)) throw ConfigError("grid_halfwidth must be positive");
  if (stride < 1) throw ConfigError("stride must be at least 1");
  if (approx_points < 2) throw ConfigError("approx_points must be at least 2");
  for (double x : b_grid)
    if (!(x > 0.0)) throw ConfigError("b_grid entries must be positive");
  try {
    integrator.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  const std::set<std::string> sections = {"material", "field",      "initial",
                                          "schedule", "integrator", "output"};
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      if (!sections.count(section)) throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = setters().find(full);
    if (it == setters().end()) throw ConfigError("unknown key '" + full + "'", line);
    if (!seen.insert(full).second) throw ConfigError("duplicate key '" + full + "'", line);
    it->second(cfg, s.substr(eq + 1), line);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what(), e.line());
  }
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream o;
  auto list = [&](const char* key, const std::vector<double>& xs) {
    if (xs.empty()) return;
    o << key << " = ";
    for (std::size_t i = 0; i < xs.size(); ++i) o << (i ? ", " : "") << fmt_double(xs[i]);
    o << '\n';
  };
  auto opt = [&](const char* key, const std::optional<double>& x) {
    if (x) o << key << " = " << fmt_double(*x) << '\n';
  };
  auto flag = [](bool b) { return b ? "true" : "false"; };
  if (!c.name.empty()) o << "name = " << c.name << '\n';

  o << "[material]\nD = " << fmt_vec(c.D) << '\n';
  opt("alpha", c.alpha);
  opt("eta", c.eta);
  opt("alpha_hat", c.alpha_hat);
  opt("eta_hat", c.eta_hat);
  opt("epsilon", c.epsilon);

  o << "\n[field]\n";
  if (c.h_a) o << "h_a = " << fmt_vec(*c.h_a) << '\n';
  opt("b", c.b);
  if (c.n) o << "n = " << *c.n << '\n';

  o << "\n[initial]\nm = " << fmt_vec(c.m0) << "\nv = " << fmt_vec(c.v0) << '\n';

  o << "\n[schedule]\n";
  o << "t_star = " << (c.t_star ? fmt_double(*c.t_star) : "auto") << '\n';
  o << "t_end = " << (c.t_end ? fmt_double(*c.t_end) : "auto") << '\n';
  list("t_star_grid", c.t_star_grid);
  o << "grid_points = " << c.grid_points << '\n';
  o << "grid_halfwidth = " << fmt_double(c.grid_halfwidth) << '\n';
  list("b_grid", c.b_grid);

  const IntegratorConfig& g = c.integrator;
  o << "\n[integrator]\n"
    << "rel_tol = " << fmt_double(g.rel_tol) << '\n'
    << "abs_tol = " << fmt_double(g.abs_tol) << '\n'
    << "max_step = " << fmt_double(g.max_step) << '\n'
    << "renormalize = " << flag(g.renormalize) << '\n'
    << "convergence_tol = " << fmt_double(g.convergence_tol) << '\n'
    << "max_wall_steps = " << g.max_wall_steps << '\n'
    << "certify_basin = " << flag(g.certify_basin) << '\n'
    << "stop_on_decision = " << flag(g.stop_on_decision) << '\n'
    << "norm_abort_tol = " << fmt_double(g.norm_abort_tol) << '\n';

  o << "\n[output]\n";
  if (!c.trajectory_path.empty()) o << "trajectory = " << c.trajectory_path << '\n';
  if (!c.plan_path.empty()) o << "plan = " << c.plan_path << '\n';
  if (!c.sweep_path.empty()) o << "sweep = " << c.sweep_path << '\n';
  o << "stride = " << c.stride << '\n'
    << "with_approx = " << flag(c.with_approx) << '\n'
    << "b_table = " << flag(c.b_table) << '\n'
    << "approx_points = " << c.approx_points << '\n';
  return o.str();
}

}  // namespace illg
