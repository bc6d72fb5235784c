#include "illg/mts.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "illg/errors.hpp"

namespace illg {

namespace {

constexpr double kOffDiagTol = 1e-12;

void require_simplified(const ApproxSolution& a) {
  const Mat3& e = a.E_hat;
  const double scale = std::max(1.0, max_abs(e));
  if (std::abs(e(0, 1)) > kOffDiagTol * scale || std::abs(e(0, 2)) > kOffDiagTol * scale ||
      std::abs(e(1, 2)) > kOffDiagTol * scale)
    throw HypothesisViolation("closed forms need a diagonal E_hat (field along +e2)");
  const Mat3 perm = Mat3::rows(kE1, kE3, -kE2);
  if (max_abs(a.C - perm) > kOffDiagTol)
    throw HypothesisViolation("closed forms need the field along +e2");
}

void require_below(double mu, double threshold, const char* name) {
  if (mu > threshold)
    throw ThresholdExceeded("mu = " + std::to_string(mu) + " exceeds " + name + " = " +
                                std::to_string(threshold),
                            mu, threshold);
}

void check_leq2_gate(const ApproxSolution& a) {
  require_simplified(a);
  const ValidityThresholds t = thresholds(a.theta0, a.omega_hat, a.E_hat);
  require_below(a.mu, t.mu0_tilde, "mu0_tilde");
}

// Polar offset theta - pi/2 in the simplified case.
double polar_offset(double tau, const ApproxSolution& a) {
  const double s = std::sin(a.mu * a.omega_hat * tau);
  const double drift = (a.E_hat(0, 0) - a.E_hat(1, 1)) / (2.0 * a.omega_hat) * s * s;
  return a.mu * (drift - a.omega_hat * (1.0 - std::cos(tau)));
}

Mat4 mat4_mul(const Mat4& a, const Mat4& b) {
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

Vec4 mat4_apply(const Mat4& a, const Vec4& x) {
  Vec4 out{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) out[i] += a[i][k] * x[k];
  return out;
}

}  // namespace

ApproxSolution make_approximation(const ScaledParams& sp, const Vec3& m0, ApproxOrder order) {
  const SphericalPoint s0 = to_spherical(transpose(sp.C) * m0);
  ApproxSolution a;
  a.mu = sp.mu;
  a.omega_hat = sp.omega_hat;
  a.E_hat = sp.E_hat;
  a.C = sp.C;
  a.theta0 = s0.theta;
  a.phi0 = s0.phi;
  a.order = order;
  return a;
}

ValidityThresholds thresholds(double theta0, double w, const Mat3& e) {
  const double d = std::min(theta0, kPi - theta0);
  if (!(d > 0.0)) throw ChartError("initial polar angle on a pole: no validity threshold");
  const double a11 = std::abs(e(0, 0)), a22 = std::abs(e(1, 1));
  const double a12 = std::abs(e(0, 1)), a13 = std::abs(e(0, 2)), a23 = std::abs(e(1, 2));
  const double denom = 2.0 * w + a12 * (1.0 + 1.0 / (2.0 * w)) + 2.0 * a13 + 3.0 * a23 +
                       (a11 + a22) / (2.0 * w);
  ValidityThresholds t;
  t.d_tilde = d;
  t.mu0 = d / denom;
  t.mu0_tilde = 2.0 * kPi * w / (4.0 * w * w + a11 + a22);
  return t;
}

SphericalPoint angles_leq2(double tau, const ApproxSolution& a) {
  const ValidityThresholds t = thresholds(a.theta0, a.omega_hat, a.E_hat);
  require_below(a.mu, t.mu0, "mu0");

  const double mu = a.mu, w = a.omega_hat;
  const Mat3& e = a.E_hat;
  const double e11 = e(0, 0), e12 = e(0, 1), e13 = e(0, 2), e22 = e(1, 1), e23 = e(1, 2);
  const double s = mu * w * tau;
  const double ss = std::sin(s), cs = std::cos(s);
  const double st = std::sin(tau), ct = std::cos(tau);

  const double phi = a.phi0 + s + mu * (-(e13 * ss - e23 * cs + e23) / w - w * st) +
                     mu * mu * (e12 * (1.0 - ct) - e13 * st);
  const double theta =
      a.theta0 +
      mu * (-w * (1.0 - ct) + ((e11 - e22) * ss * ss - e12 * std::sin(2.0 * s)) / (2.0 * w)) +
      mu * mu * ((e23 - e13) * (1.0 - ct) - e12 * st - e23 * ss * ct);
  return {theta, phi};
}

Vec3 m_leq2_general(double tau, const ApproxSolution& a) {
  return a.C * from_spherical(angles_leq2(tau, a));
}

Vec3 m_leq2(double tau, const ApproxSolution& a) {
  check_leq2_gate(a);
  const double A = polar_offset(tau, a);
  const double B = a.mu * a.omega_hat * (std::sin(tau) - tau);
  const double cA = std::cos(A);
  return {cA * std::cos(B), -std::sin(A), cA * std::sin(B)};
}

Vec3 m_leq1(double tau, const ApproxSolution& a) {
  check_leq2_gate(a);
  const double k = a.mu * a.omega_hat;
  const double s = k * tau;
  const double st = std::sin(tau);
  return {std::cos(s) + k * std::sin(s) * st, -polar_offset(tau, a),
          -std::sin(s) + k * std::cos(s) * st};
}

Vec3 velocity_leq1(double tau, const ApproxSolution& a) {
  check_leq2_gate(a);
  const double k = a.mu * a.omega_hat;
  const double s = k * tau;
  const double c1 = std::cos(tau) - 1.0;
  return {k * std::sin(s) * c1, k * std::sin(tau), k * std::cos(s) * c1};
}

double switch_tau(const ApproxSolution& a) { return kPi / (a.mu * a.omega_hat); }

Vec3 m_leq2_at_switch(const ApproxSolution& a) {
  check_leq2_gate(a);
  const double k = a.mu * a.omega_hat;
  const double T = switch_tau(a);
  const double p = k * (std::cos(T) - 1.0);
  const double q = k * std::sin(T);
  return {-std::cos(p) * std::cos(q), -std::sin(p), -std::cos(p) * std::sin(q)};
}

Mat4 linear_generator() {
  Mat4 A{};
  A[0][1] = 1.0;
  A[1][3] = -1.0;
  A[2][3] = 1.0;
  A[3][1] = 1.0;
  return A;
}

// A^3 = -A, so exp(A tau) = I + sin(tau) A + (1 - cos(tau)) A^2.
Mat4 linear_propagator(double tau) {
  const Mat4 A = linear_generator();
  const Mat4 A2 = mat4_mul(A, A);
  const double s = std::sin(tau), c = 1.0 - std::cos(tau);
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = (i == j ? 1.0 : 0.0) + s * A[i][j] + c * A2[i][j];
  return out;
}

Vec4 linear_mts_oracle(const std::function<double(double)>& f1,
                       const std::function<double(double)>& f2, const Vec4& q0,
                       double tau) {
  using boost::math::quadrature::gauss_kronrod;
  Vec4 q = mat4_apply(linear_propagator(tau), q0);
  if (tau == 0.0) return q;
  for (int i = 0; i < 4; ++i) {
    auto integrand = [&](double s) {
      const Mat4 K = linear_propagator(tau - s);
      return K[i][1] * f1(s) + K[i][3] * f2(s);
    };
    q[i] += gauss_kronrod<double, 31>::integrate(integrand, 0.0, tau, 15, 1e-14);
  }
  return q;
}

}  // namespace illg
