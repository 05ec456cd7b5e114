#pragma once

// The unit-ball bump h and its localisation h_{k,r} = phi^-1 o h o phi.
//
// h is a twist: it fixes x1 and rotates (x2, x3) by the angle
// theta(|x|) = a (1 - (|x| / (1 - delta))^2)^2, zero for |x| >= 1 - delta.
// Each slice x1 = const is mapped to itself by an area-preserving twist, so
// det Dh = 1, |h(x)| = |x|, and Dh keeps span(e2, e3) invariant:
//
//   Dh e3 = h^u e3 + h^c e2.

#include <cstddef>
#include <cstdint>

#include "centrex/mat3.hpp"
#include "centrex/parallel.hpp"
#include "centrex/spectral.hpp"

namespace centrex {

class BumpMap {
 public:
  // Throws std::invalid_argument unless 0 <= a < pi/2 and 0 < delta < 1.
  BumpMap(double amplitude, double margin);

  double amplitude() const { return amplitude_; }
  double margin() const { return margin_; }
  // Radius 1 - delta beyond which h is the identity.
  double support_radius() const { return 1.0 - margin_; }

 private:
  double amplitude_;
  double margin_;
};

double profile(double rho, double a, double delta);

// Rejects |x| > 1 with std::domain_error.
Vec3 apply_bump(const BumpMap& h, const Vec3& x);
Vec3 apply_bump_inverse(const BumpMap& h, const Vec3& x);
Mat3 jac_bump(const BumpMap& h, const Vec3& x);

struct HComponents {
  double h_u;
  double h_c;
};
HComponents h_components(const BumpMap& h, const Vec3& x);

// sup over a Halton sample of the ball (center first) of
// |h(x) - x| + |Dh(x) - I|_op.
double c1_distance(const BumpMap& h, std::size_t n_samples,
                   Exec exec = Exec::parallel);

struct QuadratureSpec {
  enum class Method { midpoint, monte_carlo };
  Method method = Method::midpoint;
  // midpoint: cells per axis on [-1,1]^3 (the error estimate also runs n/2)
  int grid = 200;
  // monte_carlo
  std::size_t samples = 1 << 20;
  std::uint64_t seed = 1;
};

// I(h) as an average over the unit ball: the integral of log h^u against
// Lebesgue measure divided by vol(B_1). `integral` keeps the unnormalised
// value. For the midpoint rule `standard_error` is |I_n - I_{n/2}|; for
// Monte Carlo it is the sample standard error.
struct IntegralEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  double integral = 0.0;
  std::size_t points = 0;
  double min_h_u = 0.0;
};

// Throws NonPositiveHu if any node has h^u <= 0.
IntegralEstimate I_of_h(const BumpMap& h, const QuadratureSpec& spec = {},
                        Exec exec = Exec::parallel);

class LocalizedBump {
 public:
  LocalizedBump(BumpMap bump, AdaptedChart chart)
      : bump_(bump), chart_(std::move(chart)) {}

  const BumpMap& bump() const { return bump_; }
  const AdaptedChart& chart() const { return chart_; }

 private:
  BumpMap bump_;
  AdaptedChart chart_;
};

// Identity off the adapted ball; the image keeps the input's lift winding.
TorusPoint apply_localized(const LocalizedBump& lb, const TorusPoint& w);
TorusPoint apply_localized_inverse(const LocalizedBump& lb,
                                   const TorusPoint& w);
// P Dh(phi(w)) P^-1 inside the ball, I outside.
Mat3 jac_localized(const LocalizedBump& lb, const TorusPoint& w);

// C^1 distance of h_{k,r} to the identity in the adapted metric, sampled on
// the adapted ball: sup |P^-1 (h_{k,r}(w) - w)| + |P^-1 (Dh_{k,r} - I) P|_op.
double localized_c1_distance(const LocalizedBump& lb, std::size_t n_samples,
                             Exec exec = Exec::parallel);

}  // namespace centrex
