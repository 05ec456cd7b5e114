#include "centrex/mat3.hpp"

#include <algorithm>
#include <stdexcept>

namespace centrex {

Mat3 inverse(const Mat3& m) {
  const double d = det(m);
  if (d == 0.0 || !std::isfinite(d)) {
    throw std::domain_error("inverse: singular 3x3 matrix");
  }
  Mat3 adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return (1.0 / d) * adj;
}

double max_abs(const Mat3& m) {
  double out = 0.0;
  for (double x : m.a) out = std::max(out, std::abs(x));
  return out;
}

bool is_finite(const Mat3& m) {
  return std::all_of(m.a.begin(), m.a.end(),
                     [](double x) { return std::isfinite(x); });
}

SymmetricEigen symmetric_eigen(const Mat3& s) {
  Mat3 a = s;
  Mat3 v = Mat3::identity();
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double diag = a(0, 0) * a(0, 0) + a(1, 1) * a(1, 1) + a(2, 2) * a(2, 2);
    if (off <= 1e-32 * diag || off == 0.0) break;
    for (std::size_t p = 0; p < 2; ++p) {
      for (std::size_t q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        // a <- J^T a J with J the (p,q) rotation
        for (std::size_t k = 0; k < 3; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < 3; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  std::array<std::size_t, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  for (std::size_t c = 0; c < 3; ++c) {
    out.values[c] = a(idx[c], idx[c]);
    for (std::size_t r = 0; r < 3; ++r) out.vectors(r, c) = v(r, idx[c]);
  }
  return out;
}

Vec3 singular_values(const Mat3& m) {
  const auto eig = symmetric_eigen(transpose(m) * m);
  return {std::sqrt(std::max(0.0, eig.values[0])),
          std::sqrt(std::max(0.0, eig.values[1])),
          std::sqrt(std::max(0.0, eig.values[2]))};
}

double op_norm(const Mat3& m) { return singular_values(m)[2]; }

QR qr_decompose(const Mat3& m) {
  std::array<Vec3, 3> q{m.column(0), m.column(1), m.column(2)};
  Vec3 r;
  for (std::size_t j = 0; j < 3; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        q[j] -= dot(q[i], q[j]) * q[i];
      }
    }
    r[j] = norm(q[j]);
    q[j] *= 1.0 / r[j];
  }
  return {Mat3::from_columns(q[0], q[1], q[2]), r};
}

std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << '(' << v[0] << ", " << v[1] << ", " << v[2] << ')';
}

std::ostream& operator<<(std::ostream& os, const Mat3& m) {
  return os << '[' << m.row(0) << ", " << m.row(1) << ", " << m.row(2) << ']';
}

}  // namespace centrex
