#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "centrex/rng.hpp"
#include "centrex/spectral.hpp"
#include "oracles.hpp"

using namespace centrex;

TEST_CASE("characteristic polynomial values") {
  CHECK(char_poly_eval(5, 1.0) == -1.0);
  CHECK(char_poly_eval(5, 0.5) == 0.125);
  CHECK(char_poly_eval(7, 0.0) == -1.0);
  for (int k = 1; k < 50; ++k) {
    CHECK(char_poly_eval(k, static_cast<double>(k)) == -1.0);
    CHECK(char_poly_eval(k, 0.5) == doctest::Approx(k / 4.0 - 9.0 / 8.0));
  }
}

TEST_CASE("family matrix and its inverse") {
  const Mat3 a5 = family_matrix(5);
  CHECK(a5 == Mat3({0, 0, 1, 0, 1, -1, -1, -1, 5}));
  CHECK(inverse_matrix(5) == Mat3({4, -1, -1, 1, 1, 0, 1, 0, 0}));
  CHECK(inverse_matrix(1) == Mat3({0, -1, -1, 1, 1, 0, 1, 0, 0}));
  for (int k = 1; k <= 300; ++k) {
    CHECK(family_matrix(k) * inverse_matrix(k) == Mat3::identity());
    CHECK(inverse_matrix(k).row(2) == Vec3{1, 0, 0});
    CHECK(det(family_matrix(k)) == 1.0);
  }
}

TEST_CASE("spectrum against the bisection oracle") {
  for (int k : {5, 6, 10, 37, 100, 200, 1000}) {
    const SpectralData s = solve_spectrum(k);
    const oracle::Roots r = oracle::roots(k);
    CHECK(s.lambda_u == doctest::Approx(static_cast<double>(r.u)).epsilon(1e-14));
    CHECK(s.lambda_c == doctest::Approx(static_cast<double>(r.c)).epsilon(1e-14));
    CHECK(s.lambda_s == doctest::Approx(static_cast<double>(r.s)).epsilon(1e-13));
  }
  // 30-digit reference values
  const SpectralData s5 = solve_spectrum(5);
  CHECK(s5.lambda_u == doctest::Approx(5.0489173395223053).epsilon(1e-15));
  CHECK(s5.lambda_c == doctest::Approx(0.64310413210779056).epsilon(1e-15));
  CHECK(s5.lambda_s == doctest::Approx(0.30797852836990413).epsilon(1e-14));
  CHECK(solve_spectrum(100).lambda_c > 0.98);
}

TEST_CASE("spectral invariants for k in 5..200") {
  for (int k = 5; k <= 200; ++k) {
    const SpectralData s = solve_spectrum(k);
    CHECK(s.lambda_s > 0.0);
    CHECK(s.lambda_s < s.lambda_c);
    CHECK(s.lambda_c < 1.0);
    CHECK(s.lambda_u > k);
    CHECK(s.lambda_u < k + 1);
    CHECK(s.lambda_c > 0.5);
    CHECK(std::abs(s.lambda_s * s.lambda_c * s.lambda_u - 1.0) < 1e-10);
    CHECK(std::abs(s.lambda_s + s.lambda_c + s.lambda_u - (k + 1)) < 1e-9);
    for (double l : {s.lambda_s, s.lambda_c, s.lambda_u}) {
      CHECK(std::abs(char_poly_eval(k, l)) < 1e-9);
    }
    const Mat3 a = family_matrix(k);
    const Vec3 e[3] = {s.e_s, s.e_c, s.e_u};
    const double l[3] = {s.lambda_s, s.lambda_c, s.lambda_u};
    for (int i = 0; i < 3; ++i) {
      CHECK(norm(e[i]) == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(norm(a * e[i] - l[i] * e[i]) < 1e-9 * l[i] + 1e-12);
    }
    CHECK(s.theta > 1.0);
    CHECK(s.theta == std::min(s.lambda_c / s.lambda_s, s.lambda_u / s.lambda_c));
    CHECK(max_abs(s.P * s.P_inv - Mat3::identity()) < 1e-12);
  }
}

TEST_CASE("solve_spectrum rejects k < 5") {
  CHECK_THROWS_AS(solve_spectrum(4), std::invalid_argument);
  CHECK_THROWS_AS(solve_spectrum(-3), std::invalid_argument);
}

TEST_CASE("eigenvector formula") {
  const double lc = solve_spectrum(5).lambda_c;
  const Vec3 v = eigenvector(lc);
  CHECK(v[1] / v[0] == doctest::Approx(1.801).epsilon(1e-3));
  CHECK(v[2] / v[0] == doctest::Approx(0.643).epsilon(1e-3));
  CHECK(v[0] == doctest::Approx(0.463213097243).epsilon(1e-11));
  const Vec3 small = eigenvector(1e-9);
  CHECK(norm(small - Vec3{1, 0, 0}) < 1e-8);
  const Vec3 big = eigenvector(solve_spectrum(10000).lambda_u);
  CHECK(std::abs(std::abs(big[2]) - 1.0) < 1e-3);
  CHECK_THROWS_AS(eigenvector(1.0), std::domain_error);
}

TEST_CASE("central direction converges to the y axis") {
  double prev = 10.0;
  const double expected[] = {0.58324273346, 0.188037353804, 0.0297693468724,
                             0.00716052238675};
  int i = 0;
  for (int k : {5, 10, 50, 200}) {
    const Vec3 e = solve_spectrum(k).e_c;
    const double angle = std::acos(std::min(1.0, std::abs(e[1])));
    CHECK(angle == doctest::Approx(expected[i++]).epsilon(1e-8));
    CHECK(angle < prev);
    prev = angle;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("theta is nondecreasing in k") {
  double prev = 0.0;
  for (int k = 5; k <= 400; ++k) {
    const double t = solve_spectrum(k).theta;
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("cone constants at k = 5") {
  const ConeConstants c = cone_constants(solve_spectrum(5));
  CHECK(c.theta == doctest::Approx(2.0881460000204194).epsilon(1e-13));
  CHECK(c.beta == doctest::Approx(0.20209894264683088).epsilon(1e-13));
  CHECK(c.mu1 == doctest::Approx(0.41855653916303205).epsilon(1e-13));
  CHECK(c.lambda2 == doctest::Approx(0.47320312947736428).epsilon(1e-13));
  CHECK(c.mu2 == doctest::Approx(1.3590445456649363).epsilon(1e-13));
  CHECK(c.lambda3 == doctest::Approx(2.389163485534483).epsilon(1e-13));
  CHECK(std::isnan(c.gamma));
  CHECK(std::isnan(c.epsilon));
}

TEST_CASE("cone constant chain holds for k in 5..400") {
  for (int k = 5; k <= 400; k += 3) {
    const SpectralData s = solve_spectrum(k);
    const ConeConstants c = cone_constants(s);
    const double b = 1.0 + c.beta;
    CHECK(1.0 < b * b);
    CHECK(b * b < s.theta);
    CHECK(b * s.lambda_s < c.mu1);
    CHECK(c.mu1 < c.lambda2);
    CHECK(c.lambda2 < s.lambda_c / b);
    CHECK(b * s.lambda_c < c.mu2);
    CHECK(c.mu2 < c.lambda3);
    CHECK(c.lambda3 < s.lambda_u / b);
    CHECK(c.mu1 < 1.0);
    CHECK(1.0 < c.lambda3);
    CHECK(c.lambda1 == s.lambda_s);
    CHECK(c.mu3 == s.lambda_u);
  }
}

TEST_CASE("an oversized beta breaks the constant chain") {
  const SpectralData s = solve_spectrum(5);
  const ConeConstants c = cone_constants(s, std::sqrt(1.2 * s.theta) - 1.0);
  CHECK(c.mu1 > c.lambda2);
  CHECK_THROWS_AS(cone_constants(s, -0.1), std::domain_error);
}

TEST_CASE("adapted chart round trip") {
  const SpectralData s = solve_spectrum(5);
  const AdaptedChart chart(TorusPoint::from_coords({1.0 / 3, 0.5, 11.0 / 12}),
                           0.06, s);
  CHECK(norm(adapted_forward(chart, chart.center())) == 0.0);
  CHECK(norm(adapted_backward(chart, {0, 0, 0}).coords() -
             chart.center().coords()) == 0.0);
  RandomStream rng(3, 0);
  int tested = 0;
  while (tested < 1000) {
    const Vec3 x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (norm(x) >= 1.0) continue;
    ++tested;
    const TorusPoint w = adapted_backward(chart, x);
    CHECK(chart.contains(w));
    const Vec3 y = adapted_forward(chart, w);
    CHECK(norm(y - x) < 1e-12);
    // |forward(w)| = adapted distance / r
    CHECK(norm(y) == doctest::Approx(
                         s.adapted_norm(torus_delta(chart.center(), w)) / 0.06)
                         .epsilon(1e-12));
    const TorusPoint back = adapted_backward(chart, y);
    CHECK(torus_distance(back, w) < 1e-12);
  }
}

TEST_CASE("adapted chart rejects points outside and bad radii") {
  const SpectralData s = solve_spectrum(5);
  const TorusPoint p = TorusPoint::from_coords({0.5, 0.5, 0.5});
  const AdaptedChart chart(p, 0.05, s);
  const TorusPoint far = TorusPoint::from_coords({0.0, 0.0, 0.0});
  CHECK_FALSE(chart.contains(far));
  CHECK_THROWS_AS(adapted_forward(chart, far), std::domain_error);
  CHECK_THROWS(AdaptedChart(p, 0.0, s));
  CHECK_THROWS(AdaptedChart(p, 0.45, s));
}

TEST_CASE("adapted ball volume") {
  const SpectralData s5 = solve_spectrum(5);
  const TorusPoint p = TorusPoint::from_coords({0.5, 0.5, 0.5});
  const double ball = 4.0 / 3.0 * std::numbers::pi * 0.05 * 0.05 * 0.05;
  // |det P_5| = 7/13
  CHECK(adapted_ball_volume(AdaptedChart(p, 0.05, s5)) ==
        doctest::Approx(ball * 7.0 / 13.0).epsilon(1e-13));
  double prev = 0.0;
  for (int k : {5, 10, 50, 200, 1000}) {
    const double ratio =
        adapted_ball_volume(AdaptedChart(p, 0.05, solve_spectrum(k))) / ball;
    CHECK(ratio > prev);
    CHECK(ratio <= 1.0);
    prev = ratio;
  }
  CHECK(prev > 0.999);
}

TEST_CASE("torus point lift and reduction") {
  const TorusPoint p = TorusPoint::from_lift({-0.25, 3.5, 7.0});
  CHECK(p.coords() == Vec3{0.75, 0.5, 0.0});
  CHECK(p.lift() == Vec3{-0.25, 3.5, 7.0});
  CHECK(TorusPoint::from_lift({-1e-18, 0, 0}).coords()[0] == 0.0);
  CHECK(wrap_centered(0.75) == -0.25);
}
