#include "illg/model.hpp"

#include <cmath>
#include <stdexcept>

namespace illg {

void MaterialParams::validate() const {
  if (!(D[0] < D[1] && D[1] < D[2]))
    throw std::invalid_argument("demagnetizing factors must satisfy D1 < D2 < D3");
  if (!(alpha > 0.0)) throw std::invalid_argument("damping alpha must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("inertia eta must be positive");
}

bool SpinState::is_valid(double tol) const {
  return std::abs(norm(m) - 1.0) <= tol && std::abs(dot(m, v)) <= tol;
}

std::string_view to_string(SwitchOutcome o) {
  switch (o) {
    case SwitchOutcome::Switched: return "switched";
    case SwitchOutcome::NotSwitched: return "not_switched";
    case SwitchOutcome::Undecided: return "undecided";
    case SwitchOutcome::Other: return "other";
  }
  return "unknown";
}

Vec3 effective_field(const Vec3& m, const Vec3& h_a, const Vec3& D) {
  return {h_a[0] - D[0] * m[0], h_a[1] - D[1] * m[1], h_a[2] - D[2] * m[2]};
}

SpinRate illg_rhs(const SpinState& z, const Vec3& h_a, const MaterialParams& p) {
  if (p.eta == 0.0)
    throw std::invalid_argument("eta = 0 is the non-inertial limit; not supported");
  const Vec3& m = z.m;
  const Vec3& v = z.v;
  const Vec3 h = effective_field(m, h_a, p.D);
  const Vec3 torque = cross(m, v) + cross(m, cross(m, h)) + p.alpha * v;
  return {v, -dot(v, v) * m - torque / p.eta};
}

double anisotropy_energy(const Vec3& m, const Vec3& h_a, const Vec3& D) {
  const double q = D[0] * m[0] * m[0] + D[1] * m[1] * m[1] + D[2] * m[2] * m[2];
  return 0.5 * (q - D[0]) - dot(h_a, m);
}

double energy_W(const SpinState& z, const Vec3& h_a, const MaterialParams& p) {
  return 0.5 * p.eta * dot(z.v, z.v) + anisotropy_energy(z.m, h_a, p.D);
}

std::array<SpinState, 6> equilibria() {
  return {SpinState{kE1, {}}, SpinState{-kE1, {}}, SpinState{kE2, {}},
          SpinState{-kE2, {}}, SpinState{kE3, {}}, SpinState{-kE3, {}}};
}

}  // namespace illg
