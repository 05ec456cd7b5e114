#include "doctest.h"

#include <cmath>
#include <set>

#include "centrex/rng.hpp"
#include "centrex/sampling.hpp"

using namespace centrex;

// Known-answer vectors of the Random123 distribution (kat_vectors).
TEST_CASE("philox4x32-10 known answers") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                      {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                      {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42, 3);
  RandomStream b(42, 3);
  RandomStream c(42, 4);
  RandomStream d(43, 3);
  int same_c = 0;
  int same_d = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    same_c += x == c.uniform();
    same_d += x == d.uniform();
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
}

TEST_CASE("uniform draws lie in [0, 1) with the right moments") {
  RandomStream s(1, 0);
  const int n = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sq / n - 1.0 / 3.0) < 0.005);
}

TEST_CASE("radical inverse") {
  CHECK(radical_inverse(1, 2) == 0.5);
  CHECK(radical_inverse(3, 2) == 0.75);
  CHECK(radical_inverse(1, 3) == doctest::Approx(1.0 / 3.0));
  CHECK(radical_inverse(5, 3) == doctest::Approx(7.0 / 9.0));
}

TEST_CASE("halton ball points are inside, distinct and fill the ball") {
  const auto pts = halton_ball(5000, true);
  REQUIRE(pts.size() == 5000);
  CHECK(pts[0] == Vec3{0, 0, 0});
  std::set<std::array<double, 3>> seen;
  double inner = 0;
  for (const Vec3& p : pts) {
    CHECK(norm(p) <= 1.0);
    seen.insert({p[0], p[1], p[2]});
    inner += norm(p) < 0.5;
  }
  CHECK(seen.size() == pts.size());
  // volume fraction of the half-radius ball is 1/8
  CHECK(inner / pts.size() == doctest::Approx(0.125).epsilon(0.05));
}
