#pragma once

#include <cmath>

#include "centrex/mat3.hpp"

namespace centrex {

// x - floor(x), mapped into [0, 1) exactly (a tiny negative x would
// otherwise round up to 1.0).
inline double wrap_unit(double x) {
  double y = x - std::floor(x);
  return y >= 1.0 ? 0.0 : y;
}

// Signed representative of x modulo 1 in [-1/2, 1/2).
inline double wrap_centered(double x) {
  double y = x - std::floor(x + 0.5);
  return y >= 0.5 ? y - 1.0 : y;
}

// A point of T^3 = R^3 / Z^3 together with one lift in R^3.
// Invariant: coords == lift mod 1, component-wise, coords in [0, 1).
class TorusPoint {
 public:
  TorusPoint() = default;

  static TorusPoint from_lift(const Vec3& lift) {
    TorusPoint p;
    p.lift_ = lift;
    p.coords_ = {wrap_unit(lift[0]), wrap_unit(lift[1]), wrap_unit(lift[2])};
    return p;
  }
  // The lift is taken to be the reduced coordinates themselves.
  static TorusPoint from_coords(const Vec3& x) {
    return from_lift({wrap_unit(x[0]), wrap_unit(x[1]), wrap_unit(x[2])});
  }

  const Vec3& coords() const { return coords_; }
  const Vec3& lift() const { return lift_; }

  // Same torus point with the lift re-anchored in the unit cube.
  TorusPoint reanchored() const { return from_lift(coords_); }

 private:
  Vec3 coords_;
  Vec3 lift_;
};

// Shortest displacement from a to b on the torus (each component in
// [-1/2, 1/2)).
inline Vec3 torus_delta(const TorusPoint& a, const TorusPoint& b) {
  const Vec3 d = b.coords() - a.coords();
  return {wrap_centered(d[0]), wrap_centered(d[1]), wrap_centered(d[2])};
}

inline double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  return norm(torus_delta(a, b));
}

}  // namespace centrex
