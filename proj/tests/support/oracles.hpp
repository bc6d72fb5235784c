#pragma once

// Independent reference computations used only by the tests.

#include <array>
#include <cmath>
#include <random>

#include "illg/linalg.hpp"
#include "illg/model.hpp"

namespace oracle {

using illg::Vec3;

inline constexpr Vec3 kThinFilmD{-0.1087, 0.0, 1.0};

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240917ULL);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Vec3 random_unit() {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 x{n(rng()), n(rng()), n(rng())};
  return x / illg::norm(x);
}

inline Vec3 random_tangent(const Vec3& m, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Vec3 v{n(rng()), n(rng()), n(rng())};
  return v - illg::dot(m, v) * m;
}

// Field with sigma bounded away from zero, components of either sign.
inline Vec3 random_admissible_field(double lo = 0.1, double hi = 3.0) {
  for (;;) {
    Vec3 h{uniform(-hi, hi), uniform(-hi, hi), uniform(-hi, hi)};
    if (std::hypot(h[1], h[2]) > lo) return h;
  }
}

// Right-hand side written through the expanded double cross product
// m x (m x h) = (m.h) m - h.
inline std::array<double, 6> rhs(const std::array<double, 6>& y, const Vec3& ha, const Vec3& D,
                                 double alpha, double eta) {
  const Vec3 m{y[0], y[1], y[2]}, v{y[3], y[4], y[5]};
  const Vec3 h{ha[0] - D[0] * m[0], ha[1] - D[1] * m[1], ha[2] - D[2] * m[2]};
  const Vec3 mxv{m[1] * v[2] - m[2] * v[1], m[2] * v[0] - m[0] * v[2], m[0] * v[1] - m[1] * v[0]};
  const double mh = m[0] * h[0] + m[1] * h[1] + m[2] * h[2];
  const double vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  std::array<double, 6> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = v[i];
    out[3 + i] = -vv * m[i] - (mxv[i] + mh * m[i] - h[i] + alpha * v[i]) / eta;
  }
  return out;
}

// Classical fixed-step RK4 with the field switched off at t_star.
inline illg::SpinState rk4(const illg::SpinState& z0, const Vec3& ha, double t_star,
                           const Vec3& D, double alpha, double eta, double t_end, long steps) {
  std::array<double, 6> y{z0.m[0], z0.m[1], z0.m[2], z0.v[0], z0.v[1], z0.v[2]};
  auto advance = [&](double t0, double t1, const Vec3& h, long n) {
    const double dt = (t1 - t0) / static_cast<double>(n);
    for (long s = 0; s < n; ++s) {
      auto k1 = rhs(y, h, D, alpha, eta);
      std::array<double, 6> tmp{};
      for (int i = 0; i < 6; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
      auto k2 = rhs(tmp, h, D, alpha, eta);
      for (int i = 0; i < 6; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
      auto k3 = rhs(tmp, h, D, alpha, eta);
      for (int i = 0; i < 6; ++i) tmp[i] = y[i] + dt * k3[i];
      auto k4 = rhs(tmp, h, D, alpha, eta);
      for (int i = 0; i < 6; ++i) y[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
  };
  if (t_star >= t_end) {
    advance(0.0, t_end, ha, steps);
  } else {
    const long n1 = std::max(1L, static_cast<long>(steps * t_star / t_end));
    advance(0.0, t_star, ha, n1);
    advance(t_star, t_end, Vec3{}, std::max(1L, steps - n1));
  }
  return {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}};
}

using Mat4 = std::array<std::array<double, 4>, 4>;

inline Mat4 mul4(const Mat4& a, const Mat4& b) {
  Mat4 c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// exp(A t) by scaling and squaring of a truncated Taylor series.
inline Mat4 expm(const Mat4& A, double t) {
  int squarings = 0;
  double scale = t;
  while (std::abs(scale) > 0.05) {
    scale *= 0.5;
    ++squarings;
  }
  Mat4 term{}, sum{};
  for (int i = 0; i < 4; ++i) term[i][i] = sum[i][i] = 1.0;
  for (int k = 1; k <= 20; ++k) {
    Mat4 next = mul4(term, A);
    for (auto& row : next)
      for (auto& x : row) x *= scale / k;
    term = next;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) sum[i][j] += term[i][j];
  }
  for (int s = 0; s < squarings; ++s) sum = mul4(sum, sum);
  return sum;
}

}  // namespace oracle
