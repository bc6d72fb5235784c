#pragma once

#include "illg/linalg.hpp"
#include "illg/model.hpp"

namespace illg {

// Rescaled description of a field/material pair. Hatted quantities satisfy
// h_a = h_hat/epsilon, alpha = epsilon^2 alpha_hat, eta = epsilon^2 eta_hat,
// mu = sqrt(alpha_hat) epsilon.
struct ScaledParams {
  double epsilon = 0.0;
  double mu = 0.0;
  double alpha_hat = 0.0;
  double eta_hat = 0.0;
  Vec3 h_hat;
  double sigma = 0.0;
  double omega = 0.0;
  double omega_hat = 0.0;
  Mat3 C;      // rotation into the field-adapted frame, m = C x
  Mat3 E;      // C^T D C
  Mat3 E_hat;  // (eta_hat/alpha_hat) E
  Vec3 D;

  MaterialParams material() const;
  Vec3 h_a() const { return h_hat / epsilon; }
};

// Throws HypothesisViolation when the field has no component transverse to e1.
ScaledParams build_scaled(const MaterialParams& p, const Vec3& h_a, double epsilon);
ScaledParams build_scaled_from_hats(const Vec3& D, double alpha_hat, double eta_hat,
                                    const Vec3& h_hat, double epsilon);

double field_sigma(const Vec3& h_hat);
double field_omega(const Vec3& h_hat);

// Gamma x = h_hat x x.
Mat3 gamma_matrix(const Vec3& h_hat);
// [[0,-w,0],[w,0,0],[0,0,0]]
Mat3 lambda_matrix(double omega);

Mat3 build_C(const Vec3& h_hat);
Mat3 build_E_explicit(const Vec3& h_hat, const Vec3& D);

// Deviations of the complex unitary construction behind C.
struct FactorizationReport {
  double unitarity = 0.0;        // |M* M - I|
  double diagonalization = 0.0;  // |M* Gamma M - diag(-iw, iw, 0)|
  double product = 0.0;          // |M U - C|
  double max() const;
};

FactorizationReport factorization_oracles(const Vec3& h_hat);

inline constexpr double kPoleMargin = 1e-12;

struct SphericalPoint {
  double theta = 0.0;
  double phi = 0.0;
};

// Throws ChartError within kPoleMargin of a pole. phi is in (-pi, pi].
SphericalPoint to_spherical(const Vec3& x);
Vec3 from_spherical(const SphericalPoint& s);

// Picks the 2*pi branch of raw closest to prev, keeping phi cumulative.
double unwrap_phase(double prev, double raw);

struct ChiXi {
  double chi = 0.0;
  double xi = 0.0;
};

// phi = mu w tau + mu xi, theta = pi/2 + mu chi.
ChiXi to_chi_xi(const SphericalPoint& s, double tau, double mu, double omega_hat);
SphericalPoint from_chi_xi(const ChiXi& c, double tau, double mu, double omega_hat);

// t = eta_hat eps^2 tau = mu^2 (eta_hat/alpha_hat) tau.
class TimeMap {
 public:
  TimeMap(double epsilon, double alpha_hat, double eta_hat, double mu);
  explicit TimeMap(const ScaledParams& sp)
      : TimeMap(sp.epsilon, sp.alpha_hat, sp.eta_hat, sp.mu) {}

  double to_t(double tau) const { return scale_ * tau; }
  double to_tau(double t) const { return t / scale_; }
  double scale() const { return scale_; }
  // Same map written through mu; agrees with scale() for consistent inputs.
  double scale_via_mu() const { return scale_mu_; }

 private:
  double scale_;
  double scale_mu_;
};

}  // namespace illg
