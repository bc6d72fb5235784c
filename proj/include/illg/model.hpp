#pragma once

#include <array>
#include <limits>
#include <string_view>

#include "illg/linalg.hpp"

namespace illg {

inline constexpr double kStateTol = 1e-9;

struct MaterialParams {
  Vec3 D;  // demagnetizing diagonal, D1 < D2 < D3
  double alpha = 0.0;
  double eta = 0.0;

  // Throws std::invalid_argument on ordering or positivity violations.
  void validate() const;

  double d21() const { return D[1] - D[0]; }
  double d31() const { return D[2] - D[0]; }
};

struct SpinState {
  Vec3 m;
  Vec3 v;

  bool is_valid(double tol = kStateTol) const;
};

struct SpinRate {
  Vec3 dm;
  Vec3 dv;
};

// Constant field h_a before t_star, exactly zero from t_star on.
struct FieldSchedule {
  Vec3 h_a;
  double t_star = std::numeric_limits<double>::infinity();

  bool field_on(double t) const { return t < t_star; }
  Vec3 field_at(double t) const { return field_on(t) ? h_a : Vec3{}; }
};

enum class SwitchOutcome { Switched, NotSwitched, Undecided, Other };

std::string_view to_string(SwitchOutcome o);

Vec3 effective_field(const Vec3& m, const Vec3& h_a, const Vec3& D);

// Throws std::invalid_argument when eta == 0.
SpinRate illg_rhs(const SpinState& z, const Vec3& h_a, const MaterialParams& p);

// h(m) = (sum_j D_j m_j^2 - D_1)/2 - h_a.m
double anisotropy_energy(const Vec3& m, const Vec3& h_a, const Vec3& D);

double energy_W(const SpinState& z, const Vec3& h_a, const MaterialParams& p);

// (+-e_j, 0) for j = 1, 2, 3; stationary whenever the field vanishes.
std::array<SpinState, 6> equilibria();

}  // namespace illg
