#pragma once

#include <array>
#include <functional>

#include "illg/frames.hpp"
#include "illg/linalg.hpp"

namespace illg {

enum class ApproxOrder { Leq2Spherical, Leq2Cartesian, Leq1Cartesian };

// Closed-form two-time-scale approximation of a trajectory starting at rest.
// Angles are those of x = C^T m.
struct ApproxSolution {
  double mu = 0.0;
  double omega_hat = 0.0;
  Mat3 E_hat;
  Mat3 C = Mat3::identity();
  double theta0 = 0.5 * kPi;
  double phi0 = 0.0;
  ApproxOrder order = ApproxOrder::Leq2Spherical;
};

// Throws ChartError when C^T m0 sits on a pole.
ApproxSolution make_approximation(const ScaledParams& sp, const Vec3& m0,
                                  ApproxOrder order = ApproxOrder::Leq2Spherical);

struct ValidityThresholds {
  double mu0 = 0.0;
  double mu0_tilde = 0.0;
  double d_tilde = 0.0;
};

// Throws ChartError when theta0 is 0 or pi.
ValidityThresholds thresholds(double theta0, double omega_hat, const Mat3& E_hat);

// Throws ThresholdExceeded when mu > mu0.
SphericalPoint angles_leq2(double tau, const ApproxSolution& a);
// C applied to the spherical point of angles_leq2; any field direction.
Vec3 m_leq2_general(double tau, const ApproxSolution& a);

// Closed forms for a field along +e2 (E_hat diagonal, C the e2/e3 permutation).
// Throw HypothesisViolation otherwise, ThresholdExceeded when mu > mu0_tilde.
Vec3 m_leq2(double tau, const ApproxSolution& a);
Vec3 m_leq1(double tau, const ApproxSolution& a);
Vec3 velocity_leq1(double tau, const ApproxSolution& a);  // d/dtau

// pi/(mu w): the instant at which phi has advanced by pi.
double switch_tau(const ApproxSolution& a);
// Value of m_leq2 at switch_tau, written through cos/sin of the fast phase only.
Vec3 m_leq2_at_switch(const ApproxSolution& a);

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;

// q = (xi, xi', chi, chi'): xi'' + chi' = f1, chi'' - xi' = f2.
Mat4 linear_generator();
Mat4 linear_propagator(double tau);  // exp(A tau)
Vec4 linear_mts_oracle(const std::function<double(double)>& f1,
                       const std::function<double(double)>& f2, const Vec4& q0,
                       double tau);

}  // namespace illg
