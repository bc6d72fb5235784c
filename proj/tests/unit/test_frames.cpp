#include <catch_amalgamated.hpp>

#include "illg/errors.hpp"
#include "illg/frames.hpp"
#include "support/oracles.hpp"

using namespace illg;
using Catch::Approx;

namespace {

// D = diag(d) written as a general matrix so the product route shares nothing
// with the closed form.
Mat3 conjugate(const Mat3& C, const Vec3& d) {
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += C(k, i) * d[k] * C(k, j);
      out(i, j) = s;
    }
  return out;
}

}  // namespace

TEST_CASE("scaling from physical parameters, case 2", "[frames]") {
  const MaterialParams p{oracle::kThinFilmD, 0.01, 0.02};
  const ScaledParams sp = build_scaled(p, {0, 5, 0}, 0.1);
  CHECK(sp.alpha_hat == Approx(1.0));
  CHECK(sp.eta_hat == Approx(2.0));
  CHECK(sp.mu == Approx(0.1));
  CHECK(sp.omega == Approx(0.5));
  CHECK(sp.omega_hat == Approx(1.0));
  const MaterialParams back = sp.material();
  CHECK(back.alpha == Approx(0.01));
  CHECK(back.eta == Approx(0.02));
  CHECK(sp.h_a()[1] == Approx(5.0));
}

TEST_CASE("case 1 hats: omega_hat and E_hat", "[frames]") {
  for (double b : {0.5, 0.9906, 1.7}) {
    const ScaledParams sp = build_scaled_from_hats(oracle::kThinFilmD, 2.3, 4.21, {0, b, 0}, 0.02);
    CHECK(sp.sigma == Approx(b));
    CHECK(sp.omega == Approx(b));
    CHECK(sp.omega_hat / b == Approx(2.7760).epsilon(1e-4));
    CHECK(sp.E_hat(0, 0) == Approx(-0.1990).epsilon(1e-3));
    CHECK(sp.E_hat(1, 1) == Approx(1.8304).epsilon(1e-3));
    CHECK(sp.E_hat(2, 2) == 0.0);
  }
}

TEST_CASE("degenerate field along e1 is rejected", "[frames]") {
  CHECK_THROWS_AS(build_C({1, 0, 0}), HypothesisViolation);
  CHECK_THROWS_AS(build_E_explicit({2, 0, 0}, oracle::kThinFilmD), HypothesisViolation);
  CHECK_THROWS_AS(factorization_oracles({1, 0, 0}), HypothesisViolation);
  const MaterialParams p{oracle::kThinFilmD, 0.01, 0.02};
  CHECK_THROWS_AS(build_scaled(p, {3, 0, 0}, 0.1), HypothesisViolation);
  CHECK_THROWS_AS(build_scaled(p, {0, 1, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("C for a field along e2 is the e2/e3 permutation", "[frames]") {
  const Mat3 C = build_C({0, 0.7, 0});
  const Mat3 expect = Mat3::rows({1, 0, 0}, {0, 0, 1}, {0, -1, 0});
  CHECK(max_abs(C - expect) < 1e-15);
  CHECK(max_abs(build_C({0, 0, 1}) - Mat3::identity()) < 1e-15);
}

TEST_CASE("C is a rotation conjugating Gamma to Lambda", "[frames][property]") {
  for (int k = 0; k < 100; ++k) {
    const Vec3 h = oracle::random_admissible_field();
    const Mat3 C = build_C(h);
    CHECK(max_abs(transpose(C) * C - Mat3::identity()) < 1e-12);
    CHECK(det(C) == Approx(1.0).margin(1e-12));
    const Mat3 L = transpose(C) * gamma_matrix(h) * C;
    CHECK(max_abs(L - lambda_matrix(norm(h))) < 1e-12);
  }
}

TEST_CASE("Gamma acts as the cross product with the field", "[frames]") {
  const Vec3 h{0.3, -1.2, 2.0};
  const Vec3 x = oracle::random_unit();
  CHECK(max_abs(gamma_matrix(h) * x - cross(h, x)) < 1e-15);
}

TEST_CASE("explicit E matches the conjugated diagonal", "[frames][property]") {
  CHECK(max_abs(build_E_explicit({0, 2, 0}, oracle::kThinFilmD) -
                Mat3::diag({-0.1087, 1.0, 0.0})) < 1e-15);
  CHECK(max_abs(build_E_explicit({0, 0, 1}, oracle::kThinFilmD) -
                Mat3::diag(oracle::kThinFilmD)) < 1e-15);
  for (int k = 0; k < 100; ++k) {
    const Vec3 h = oracle::random_admissible_field();
    const Vec3 d{oracle::uniform(-1, 0), oracle::uniform(0, 0.5), oracle::uniform(0.5, 1.5)};
    CHECK(max_abs(build_E_explicit(h, d) - conjugate(build_C(h), d)) < 1e-12);
  }
}

TEST_CASE("off-diagonal E vanishes for a field along e2", "[frames]") {
  const ScaledParams sp = build_scaled_from_hats(oracle::kThinFilmD, 2.3, 4.21, {0, 1.3, 0}, 0.02);
  CHECK(sp.E_hat(0, 1) == 0.0);
  CHECK(sp.E_hat(0, 2) == 0.0);
  CHECK(sp.E_hat(1, 2) == 0.0);
}

TEST_CASE("complex factorization of C", "[frames][property]") {
  CHECK(factorization_oracles({0, 1, 0}).max() < 1e-12);
  for (int k = 0; k < 50; ++k) {
    const double c = oracle::uniform(0.1, 10.0);
    CHECK(factorization_oracles(Vec3{1, 1, 1} * (c / std::sqrt(3.0))).max() < 1e-12);
    CHECK(factorization_oracles(oracle::random_admissible_field()).max() < 1e-12);
  }
}

TEST_CASE("spherical chart", "[frames]") {
  const SphericalPoint a = to_spherical(kE1);
  CHECK(a.theta == Approx(kPi / 2));
  CHECK(a.phi == 0.0);
  CHECK_THROWS_AS(to_spherical(kE3), ChartError);
  CHECK_THROWS_AS(to_spherical(-kE3), ChartError);

  SECTION("initial state of the field-adapted frame") {
    for (int k = 0; k < 50; ++k) {
      Vec3 h = oracle::random_admissible_field();
      h[1] = std::abs(h[1]) + 0.05;
      const double w = norm(h), s = field_sigma(h);
      const Vec3 xplus = Vec3{s, 0, -h[0]} / w;
      const SphericalPoint sp = to_spherical(xplus);
      CHECK(sp.theta == Approx(kPi / 2 + std::asin(h[0] / w)).margin(1e-13));
      CHECK(sp.phi == Approx(0.0).margin(1e-15));
    }
  }

  SECTION("round trip off the poles") {
    for (int k = 0; k < 1000; ++k) {
      const Vec3 x = oracle::random_unit();
      if (std::abs(x[2]) > 1 - 1e-6) continue;
      CHECK(max_abs(from_spherical(to_spherical(x)) - x) < 1e-12);
    }
  }
}

TEST_CASE("phase unwrapping keeps phi cumulative", "[frames]") {
  CHECK(unwrap_phase(3.1, -3.1) == Approx(-3.1 + 2 * kPi));
  CHECK(unwrap_phase(-9.0, 3.0) == Approx(3.0 - 4 * kPi));
  CHECK(unwrap_phase(0.0, 0.5) == 0.5);
}

TEST_CASE("chi/xi chart", "[frames]") {
  const double mu = 0.03, w = 2.7;
  const ChiXi z = to_chi_xi({kPi / 2, mu * w * 4.0}, 4.0, mu, w);
  CHECK(z.chi == Approx(0.0).margin(1e-14));
  CHECK(z.xi == Approx(0.0).margin(1e-12));
  const ChiXi z0 = to_chi_xi({kPi / 2, 0.0}, 0.0, mu, w);
  CHECK(z0.chi == 0.0);
  CHECK(z0.xi == 0.0);
  for (int k = 0; k < 500; ++k) {
    const SphericalPoint s{oracle::uniform(0.1, 3.0), oracle::uniform(-20, 20)};
    const double tau = oracle::uniform(0, 200), m = oracle::uniform(0.01, 0.5);
    const SphericalPoint back = from_chi_xi(to_chi_xi(s, tau, m, w), tau, m, w);
    CHECK(back.theta == Approx(s.theta).margin(1e-12));
    CHECK(back.phi == Approx(s.phi).margin(1e-12));
  }
  CHECK_THROWS_AS(to_chi_xi(SphericalPoint{}, 0.0, 0.0, w), std::invalid_argument);
}

TEST_CASE("time maps between t and tau", "[frames]") {
  SECTION("case 2 switching instant") {
    const TimeMap tm(0.1, 1.0, 2.0, 0.1);
    CHECK(tm.to_t(10 * kPi) == Approx(0.6283).epsilon(1e-4));
    CHECK(tm.to_t(0.0) == 0.0);
  }
  SECTION("case 1 switching instant") {
    const double mu = 0.03033, ah = 2.3, eh = 4.21, w = 2.7499;
    const TimeMap tm(mu / std::sqrt(ah), ah, eh, mu);
    CHECK(tm.to_t(kPi / (mu * w)) == Approx(0.0635).epsilon(5e-3));
  }
  SECTION("both forms agree and invert") {
    for (int k = 0; k < 200; ++k) {
      const double ah = oracle::uniform(0.1, 5), eh = oracle::uniform(0.1, 5);
      const double eps = oracle::uniform(1e-3, 0.5);
      const TimeMap tm(eps, ah, eh, std::sqrt(ah) * eps);
      CHECK(tm.scale() == Approx(tm.scale_via_mu()).epsilon(1e-14));
      const double t = oracle::uniform(0, 100);
      CHECK(tm.to_t(tm.to_tau(t)) == Approx(t).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(TimeMap(0.0, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("scaling gauge leaves physical quantities unchanged", "[frames][property]") {
  const MaterialParams p{oracle::kThinFilmD, 0.01, 0.02};
  const Vec3 ha{0.2, 5, -1};
  const ScaledParams a = build_scaled(p, ha, 0.1);
  const ScaledParams b = build_scaled(p, ha, 0.05);
  CHECK(a.mu == Approx(b.mu));
  CHECK(TimeMap(a).to_t(kPi / (a.mu * a.omega_hat)) ==
        Approx(TimeMap(b).to_t(kPi / (b.mu * b.omega_hat))).epsilon(1e-12));
  CHECK(max_abs(a.C - b.C) < 1e-14);
}
