#include "illg/frames.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "illg/errors.hpp"

namespace illg {

namespace {

double require_sigma(const Vec3& h) {
  const double s = field_sigma(h);
  if (!(s > 0.0))
    throw HypothesisViolation("field has no component transverse to e1 (sigma = 0)");
  return s;
}

using CMat3 = std::array<std::array<std::complex<double>, 3>, 3>;

CMat3 cmul(const CMat3& a, const CMat3& b) {
  CMat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

CMat3 adjoint(const CMat3& a) {
  CMat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = std::conj(a[j][i]);
  return out;
}

CMat3 lift(const Mat3& a) {
  CMat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = a(i, j);
  return out;
}

double max_dev(const CMat3& a, const CMat3& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

}  // namespace

MaterialParams ScaledParams::material() const {
  const double e2 = epsilon * epsilon;
  return {D, e2 * alpha_hat, e2 * eta_hat};
}

double field_sigma(const Vec3& h) { return std::hypot(h[1], h[2]); }
double field_omega(const Vec3& h) { return norm(h); }

ScaledParams build_scaled(const MaterialParams& p, const Vec3& h_a, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double e2 = epsilon * epsilon;
  return build_scaled_from_hats(p.D, p.alpha / e2, p.eta / e2, epsilon * h_a, epsilon);
}

ScaledParams build_scaled_from_hats(const Vec3& D, double alpha_hat, double eta_hat,
                                    const Vec3& h_hat, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(alpha_hat > 0.0) || !(eta_hat > 0.0))
    throw std::invalid_argument("alpha_hat and eta_hat must be positive");
  ScaledParams sp;
  sp.epsilon = epsilon;
  sp.alpha_hat = alpha_hat;
  sp.eta_hat = eta_hat;
  sp.mu = std::sqrt(alpha_hat) * epsilon;
  sp.h_hat = h_hat;
  sp.sigma = require_sigma(h_hat);
  sp.omega = field_omega(h_hat);
  sp.omega_hat = eta_hat * sp.omega / std::sqrt(alpha_hat);
  sp.D = D;
  sp.C = build_C(h_hat);
  sp.E = build_E_explicit(h_hat, D);
  sp.E_hat = (eta_hat / alpha_hat) * sp.E;
  return sp;
}

Mat3 gamma_matrix(const Vec3& h) {
  return Mat3::rows({0.0, -h[2], h[1]}, {h[2], 0.0, -h[0]}, {-h[1], h[0], 0.0});
}

Mat3 lambda_matrix(double w) {
  return Mat3::rows({0.0, -w, 0.0}, {w, 0.0, 0.0}, {0.0, 0.0, 0.0});
}

Mat3 build_C(const Vec3& h) {
  const double s = require_sigma(h);
  const double w = field_omega(h);
  const Mat3 c = Mat3::rows({s, 0.0, h[0]},
                            {-h[0] * h[1] / s, w * h[2] / s, h[1]},
                            {-h[0] * h[2] / s, -w * h[1] / s, h[2]});
  return (1.0 / w) * c;
}

Mat3 build_E_explicit(const Vec3& h, const Vec3& D) {
  const double s = require_sigma(h);
  const double w = field_omega(h);
  const double s2 = s * s;
  const double w2 = w * w;
  const double h1 = h[0], h2 = h[1], h3 = h[2];
  const double q23 = D[1] * h2 * h2 + D[2] * h3 * h3;

  Mat3 e;
  e(0, 0) = D[0] * s2 / w2 + h1 * h1 * q23 / (s2 * w2);
  e(0, 1) = h1 * h2 * h3 * (D[2] - D[1]) / (s2 * w);
  e(0, 2) = h1 * (D[0] * s2 - q23) / (s * w2);
  e(1, 1) = (D[1] * h3 * h3 + D[2] * h2 * h2) / s2;
  e(1, 2) = -h2 * h3 * (D[2] - D[1]) / (s * w);
  e(2, 2) = (D[0] * h1 * h1 + q23) / w2;
  e(1, 0) = e(0, 1);
  e(2, 0) = e(0, 2);
  e(2, 1) = e(1, 2);
  return e;
}

double FactorizationReport::max() const {
  return std::max({unitarity, diagonalization, product});
}

FactorizationReport factorization_oracles(const Vec3& h) {
  using cd = std::complex<double>;
  const double s = require_sigma(h);
  const double w = field_omega(h);
  const double r2 = std::sqrt(2.0);
  const cd i{0.0, 1.0};
  const double h1 = h[0], h2 = h[1], h3 = h[2];

  CMat3 M{};
  M[0] = {cd(s), cd(s), cd(r2 * h1)};
  M[1] = {(i * w * h3 - h1 * h2) / s, -(i * w * h3 + h1 * h2) / s, cd(r2 * h2)};
  M[2] = {-(i * w * h2 + h1 * h3) / s, (i * w * h2 - h1 * h3) / s, cd(r2 * h3)};
  for (auto& row : M)
    for (auto& x : row) x /= r2 * w;

  CMat3 U{};
  U[0] = {cd(1.0), -i, cd(0.0)};
  U[1] = {cd(1.0), i, cd(0.0)};
  U[2] = {cd(0.0), cd(0.0), cd(r2)};
  for (auto& row : U)
    for (auto& x : row) x /= r2;

  const CMat3 Mh = adjoint(M);
  CMat3 target{};
  target[0][0] = -i * w;
  target[1][1] = i * w;

  FactorizationReport rep;
  rep.unitarity = max_dev(cmul(Mh, M), lift(Mat3::identity()));
  rep.diagonalization = max_dev(cmul(cmul(Mh, lift(gamma_matrix(h))), M), target);
  rep.product = max_dev(cmul(M, U), lift(build_C(h)));
  return rep;
}

SphericalPoint to_spherical(const Vec3& x) {
  const double r = norm(x);
  if (!(r > 0.0)) throw ChartError("zero vector has no spherical angles");
  if (std::abs(x[2] / r) >= 1.0 - kPoleMargin)
    throw ChartError("point lies on a pole of the spherical chart");
  return {std::atan2(std::hypot(x[0], x[1]), x[2]), std::atan2(x[1], x[0])};
}

Vec3 from_spherical(const SphericalPoint& s) {
  const double st = std::sin(s.theta);
  return {st * std::cos(s.phi), st * std::sin(s.phi), std::cos(s.theta)};
}

double unwrap_phase(double prev, double raw) {
  const double twopi = 2.0 * kPi;
  return raw + twopi * std::round((prev - raw) / twopi);
}

ChiXi to_chi_xi(const SphericalPoint& s, double tau, double mu, double omega_hat) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  return {(s.theta - 0.5 * kPi) / mu, (s.phi - mu * omega_hat * tau) / mu};
}

SphericalPoint from_chi_xi(const ChiXi& c, double tau, double mu, double omega_hat) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  return {0.5 * kPi + mu * c.chi, mu * omega_hat * tau + mu * c.xi};
}

TimeMap::TimeMap(double epsilon, double alpha_hat, double eta_hat, double mu) {
  if (!(epsilon > 0.0 && alpha_hat > 0.0 && eta_hat > 0.0 && mu > 0.0))
    throw std::invalid_argument("time map scales must be positive");
  scale_ = eta_hat * epsilon * epsilon;
  scale_mu_ = mu * mu * eta_hat / alpha_hat;
}

}  // namespace illg
