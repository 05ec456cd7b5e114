#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "centrex/mat3.hpp"
#include "centrex/rng.hpp"

using namespace centrex;

namespace {

Mat3 random_matrix(RandomStream& rng) {
  Mat3 m;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = rng.uniform(-2.0, 2.0);
  }
  return m;
}

}  // namespace

TEST_CASE("inverse of random matrices") {
  RandomStream rng(7, 0);
  for (int n = 0; n < 200; ++n) {
    const Mat3 m = random_matrix(rng);
    if (std::abs(det(m)) < 1e-3) continue;
    CHECK(max_abs(m * inverse(m) - Mat3::identity()) < 1e-12 * op_norm(m) *
                                                           op_norm(inverse(m)));
  }
}

TEST_CASE("inverse rejects singular matrices") {
  const Mat3 m = Mat3::from_columns({1, 2, 3}, {2, 4, 6}, {0, 0, 1});
  CHECK_THROWS_AS(inverse(m), std::domain_error);
}

TEST_CASE("singular values match the symmetric eigenvalues of M^T M") {
  RandomStream rng(8, 0);
  for (int n = 0; n < 100; ++n) {
    const Mat3 m = random_matrix(rng);
    const Vec3 sv = singular_values(m);
    const auto eig = symmetric_eigen(transpose(m) * m);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(sv[i] == doctest::Approx(std::sqrt(std::max(eig.values[i], 0.0)))
                         .epsilon(1e-10));
    }
    CHECK(sv[0] * sv[1] * sv[2] == doctest::Approx(std::abs(det(m))).epsilon(1e-10));
    CHECK(op_norm(m) == sv[2]);
  }
}

TEST_CASE("symmetric eigenvectors diagonalise") {
  const Mat3 s({4, 1, 0.5, 1, 3, -1, 0.5, -1, 2});
  const auto e = symmetric_eigen(s);
  CHECK(e.values[0] <= e.values[1]);
  CHECK(e.values[1] <= e.values[2]);
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec3 v = e.vectors.column(i);
    CHECK(norm(s * v - e.values[i] * v) < 1e-12);
  }
}

TEST_CASE("QR gives an orthonormal factor and positive diagonal") {
  RandomStream rng(9, 0);
  for (int n = 0; n < 100; ++n) {
    const Mat3 m = random_matrix(rng);
    const QR f = qr_decompose(m);
    CHECK(max_abs(transpose(f.q) * f.q - Mat3::identity()) < 1e-14);
    for (std::size_t i = 0; i < 3; ++i) CHECK(f.r_diag[i] > 0.0);
    CHECK(f.r_diag[0] * f.r_diag[1] * f.r_diag[2] ==
          doctest::Approx(std::abs(det(m))).epsilon(1e-10));
  }
}

TEST_CASE("cross product and determinant agree") {
  const Vec3 a{1, 2, 3};
  const Vec3 b{-1, 0.5, 2};
  const Vec3 c{0.3, -0.7, 1.1};
  CHECK(dot(cross(a, b), c) == doctest::Approx(det(Mat3::from_columns(a, b, c))));
}
