#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

namespace ellcfd {

/// Cartesian 3-vector used for points, velocities and area vectors.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  constexpr Vec3& operator/=(double s) {
    x /= s;
    y /= s;
    z /= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(Vec3 a, double s) { return a /= s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double mag(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double mag_sqr(const Vec3& a) { return dot(a, a); }

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << '(' << v.x << ' ' << v.y << ' ' << v.z << ')';
}

/// Gradient of a vector field: row i holds d(u)/dx_i.
struct Tensor3 {
  std::array<Vec3, 3> row{};

  constexpr Tensor3& operator+=(const Tensor3& o) {
    for (int i = 0; i < 3; ++i) row[i] += o.row[i];
    return *this;
  }
  constexpr Tensor3& operator-=(const Tensor3& o) {
    for (int i = 0; i < 3; ++i) row[i] -= o.row[i];
    return *this;
  }
  constexpr Tensor3& operator*=(double s) {
    for (auto& r : row) r *= s;
    return *this;
  }
  constexpr Tensor3& operator/=(double s) {
    for (auto& r : row) r /= s;
    return *this;
  }
  friend constexpr bool operator==(const Tensor3&, const Tensor3&) = default;
};

constexpr Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
constexpr Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
constexpr Tensor3 operator*(Tensor3 a, double s) { return a *= s; }
constexpr Tensor3 operator*(double s, Tensor3 a) { return a *= s; }
constexpr Tensor3 operator/(Tensor3 a, double s) { return a /= s; }

/// Outer product a (x) b, used for surface integrals of vector quantities.
constexpr Tensor3 outer(const Vec3& a, const Vec3& b) { return {{a.x * b, a.y * b, a.z * b}}; }
constexpr Vec3 outer(const Vec3& a, double b) { return a * b; }

constexpr Vec3 dot(const Vec3& k, const Tensor3& g) { return k.x * g.row[0] + k.y * g.row[1] + k.z * g.row[2]; }

/// Rank traits mapping a field value type to its gradient type.
template <class T>
struct GradientOf;
template <>
struct GradientOf<double> {
  using type = Vec3;
};
template <>
struct GradientOf<Vec3> {
  using type = Tensor3;
};
template <class T>
using gradient_t = typename GradientOf<T>::type;

/// k . grad(phi) for a scalar phi.
constexpr double directional(const Vec3& k, const Vec3& grad) { return dot(k, grad); }
/// k . grad(u) for a vector u.
constexpr Vec3 directional(const Vec3& k, const Tensor3& grad) { return dot(k, grad); }

inline double abs_max(double v) { return std::abs(v); }
inline double abs_max(const Vec3& v) { return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)}); }

constexpr double zero_like(double) { return 0.0; }
constexpr Vec3 zero_like(const Vec3&) { return {}; }

}  // namespace ellcfd
