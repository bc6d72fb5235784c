#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace illg {

struct Vec3 {
  std::array<double, 3> c{};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : c{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
  friend constexpr Vec3 operator*(double s, const Vec3& a) {
    return {s * a[0], s * a[1], s * a[2]};
  }
  friend constexpr Vec3 operator*(const Vec3& a, double s) { return s * a; }
  friend constexpr Vec3 operator/(const Vec3& a, double s) {
    return {a[0] / s, a[1] / s, a[2] / s};
  }
  constexpr Vec3& operator+=(const Vec3& b) {
    c[0] += b[0];
    c[1] += b[1];
    c[2] += b[2];
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& b) {
    c[0] -= b[0];
    c[1] -= b[1];
    c[2] -= b[2];
    return *this;
  }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

inline constexpr Vec3 kE1{1.0, 0.0, 0.0};
inline constexpr Vec3 kE2{0.0, 1.0, 0.0};
inline constexpr Vec3 kE3{0.0, 0.0, 1.0};

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const Vec3& a) {
  return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

// Row-major 3x3.
struct Mat3 {
  std::array<Vec3, 3> r{};

  constexpr double& operator()(std::size_t i, std::size_t j) { return r[i][j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return r[i][j]; }

  static constexpr Mat3 identity() {
    Mat3 m;
    m.r = {kE1, kE2, kE3};
    return m;
  }
  static constexpr Mat3 diag(const Vec3& d) {
    Mat3 m;
    m(0, 0) = d[0];
    m(1, 1) = d[1];
    m(2, 2) = d[2];
    return m;
  }
  static constexpr Mat3 rows(const Vec3& a, const Vec3& b, const Vec3& c) {
    Mat3 m;
    m.r = {a, b, c};
    return m;
  }

  constexpr Vec3 col(std::size_t j) const { return {r[0][j], r[1][j], r[2][j]}; }

  friend constexpr Vec3 operator*(const Mat3& a, const Vec3& x) {
    return {dot(a.r[0], x), dot(a.r[1], x), dot(a.r[2], x)};
  }
  friend constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 out;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
        out(i, j) = s;
      }
    return out;
  }
  friend constexpr Mat3 operator-(const Mat3& a, const Mat3& b) {
    return rows(a.r[0] - b.r[0], a.r[1] - b.r[1], a.r[2] - b.r[2]);
  }
  friend constexpr Mat3 operator*(double s, const Mat3& a) {
    return rows(s * a.r[0], s * a.r[1], s * a.r[2]);
  }
};

constexpr Mat3 transpose(const Mat3& a) {
  return Mat3::rows(a.col(0), a.col(1), a.col(2));
}

constexpr double det(const Mat3& a) { return dot(a.r[0], cross(a.r[1], a.r[2])); }

inline double max_abs(const Mat3& a) {
  return std::max({max_abs(a.r[0]), max_abs(a.r[1]), max_abs(a.r[2])});
}

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace illg
