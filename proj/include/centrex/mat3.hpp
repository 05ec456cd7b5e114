#pragma once

// Small fixed-size 3-vector / 3x3 matrix utilities.
//
// Mat3 is stored row-major: m(i, j) is row i, column j, and the flat array
// holds rows back to back. Everything is a plain value type.

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace centrex {

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  constexpr Vec3() = default;
  constexpr Vec3(double x, double y, double z) : v{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return v[i]; }
  constexpr double operator[](std::size_t i) const { return v[i]; }

  constexpr Vec3& operator+=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    for (std::size_t i = 0; i < 3; ++i) v[i] -= o.v[i];
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    for (auto& x : v) x *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }

constexpr double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline bool is_finite(const Vec3& a) {
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

struct Mat3 {
  std::array<double, 9> a{};

  constexpr Mat3() = default;
  constexpr explicit Mat3(const std::array<double, 9>& rows) : a(rows) {}

  constexpr double& operator()(std::size_t i, std::size_t j) {
    return a[3 * i + j];
  }
  constexpr double operator()(std::size_t i, std::size_t j) const {
    return a[3 * i + j];
  }

  static constexpr Mat3 identity() {
    return Mat3({1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0});
  }
  static constexpr Mat3 diagonal(double d0, double d1, double d2) {
    return Mat3({d0, 0.0, 0.0, 0.0, d1, 0.0, 0.0, 0.0, d2});
  }
  static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1,
                                     const Vec3& c2) {
    return Mat3({c0[0], c1[0], c2[0], c0[1], c1[1], c2[1], c0[2], c1[2],
                 c2[2]});
  }

  constexpr Vec3 column(std::size_t j) const {
    return {a[j], a[3 + j], a[6 + j]};
  }
  constexpr Vec3 row(std::size_t i) const {
    return {a[3 * i], a[3 * i + 1], a[3 * i + 2]};
  }

  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

constexpr Vec3 operator*(const Mat3& m, const Vec3& x) {
  return {m(0, 0) * x[0] + m(0, 1) * x[1] + m(0, 2) * x[2],
          m(1, 0) * x[0] + m(1, 1) * x[1] + m(1, 2) * x[2],
          m(2, 0) * x[0] + m(2, 1) * x[1] + m(2, 2) * x[2]};
}

constexpr Mat3 operator*(const Mat3& l, const Mat3& r) {
  Mat3 out;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      out(i, j) = l(i, 0) * r(0, j) + l(i, 1) * r(1, j) + l(i, 2) * r(2, j);
  return out;
}

constexpr Mat3 operator+(Mat3 l, const Mat3& r) {
  for (std::size_t i = 0; i < 9; ++i) l.a[i] += r.a[i];
  return l;
}
constexpr Mat3 operator-(Mat3 l, const Mat3& r) {
  for (std::size_t i = 0; i < 9; ++i) l.a[i] -= r.a[i];
  return l;
}
constexpr Mat3 operator*(double s, Mat3 m) {
  for (auto& x : m.a) x *= s;
  return m;
}

constexpr Mat3 transpose(const Mat3& m) {
  return Mat3({m(0, 0), m(1, 0), m(2, 0), m(0, 1), m(1, 1), m(2, 1), m(0, 2),
               m(1, 2), m(2, 2)});
}

constexpr double det(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// Inverse by adjugate. Throws std::domain_error on a singular matrix.
Mat3 inverse(const Mat3& m);

// Largest absolute entry.
double max_abs(const Mat3& m);

bool is_finite(const Mat3& m);

// Eigenvalues (ascending) and orthonormal eigenvectors (as columns) of a
// symmetric matrix, by cyclic Jacobi rotations.
struct SymmetricEigen {
  Vec3 values;
  Mat3 vectors;
};
SymmetricEigen symmetric_eigen(const Mat3& s);

// Singular values in ascending order.
Vec3 singular_values(const Mat3& m);

// Spectral (operator 2-) norm.
double op_norm(const Mat3& m);

// Thin QR of a 3x3 matrix by modified Gram-Schmidt with one
// re-orthogonalisation pass. R's diagonal is non-negative.
struct QR {
  Mat3 q;
  Vec3 r_diag;
};
QR qr_decompose(const Mat3& m);

std::ostream& operator<<(std::ostream& os, const Vec3& v);
std::ostream& operator<<(std::ostream& os, const Mat3& m);

}  // namespace centrex
