#include "centrex/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "centrex/errors.hpp"
#include "centrex/rng.hpp"
#include "centrex/sampling.hpp"

namespace centrex {
namespace {

struct Twist {
  double theta;  // rotation angle at this radius
  double slope;  // theta'(rho) / rho, finite at rho = 0
};

Twist twist_at(const BumpMap& h, double rho2) {
  const double R = h.support_radius();
  const double u = rho2 / (R * R);
  if (u >= 1.0) return {0.0, 0.0};
  const double a = h.amplitude();
  return {a * (1.0 - u) * (1.0 - u), -4.0 * a * (1.0 - u) / (R * R)};
}

void require_in_ball(const Vec3& x, const char* who) {
  if (dot(x, x) > 1.0) {
    throw std::domain_error(std::string(who) + ": point outside the unit ball");
  }
}

Vec3 rotate(const Vec3& x, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {x[0], c * x[1] - s * x[2], s * x[1] + c * x[2]};
}

struct SlabSum {
  double sum = 0.0;
  double min_h_u = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
};

// Midpoint-rule sum of log h^u over cells of slab i (first axis) whose
// centers lie in the closed ball.
SlabSum midpoint_slab(const BumpMap& h, int n, int i) {
  SlabSum out;
  const double step = 2.0 / n;
  const double x1 = -1.0 + (i + 0.5) * step;
  for (int j = 0; j < n; ++j) {
    const double x2 = -1.0 + (j + 0.5) * step;
    for (int l = 0; l < n; ++l) {
      const double x3 = -1.0 + (l + 0.5) * step;
      const Vec3 x{x1, x2, x3};
      if (dot(x, x) > 1.0) continue;
      const double hu = h_components(h, x).h_u;
      out.min_h_u = std::min(out.min_h_u, hu);
      ++out.count;
      if (hu <= 0.0) continue;
      out.sum += std::log(hu);
    }
  }
  return out;
}

SlabSum midpoint_total(const BumpMap& h, int n, Exec exec) {
  const auto slabs = map_indexed<SlabSum>(
      exec, static_cast<std::size_t>(n),
      [&](std::size_t i) { return midpoint_slab(h, n, static_cast<int>(i)); });
  SlabSum total;
  for (const auto& s : slabs) {
    total.sum += s.sum;
    total.count += s.count;
    total.min_h_u = std::min(total.min_h_u, s.min_h_u);
  }
  const double cell = std::pow(2.0 / n, 3);
  total.sum *= cell;
  return total;
}

constexpr double kBallVolume = 4.0 / 3.0 * std::numbers::pi;

}  // namespace

BumpMap::BumpMap(double amplitude, double margin)
    : amplitude_(amplitude), margin_(margin) {
  if (!(amplitude >= 0.0) || !(amplitude < std::numbers::pi / 2.0)) {
    throw std::invalid_argument("BumpMap: amplitude must lie in [0, pi/2)");
  }
  if (!(margin > 0.0 && margin < 1.0)) {
    throw std::invalid_argument("BumpMap: margin must lie in (0, 1)");
  }
}

double profile(double rho, double a, double delta) {
  const double R = 1.0 - delta;
  if (rho >= R) return 0.0;
  const double u = (rho / R) * (rho / R);
  return a * (1.0 - u) * (1.0 - u);
}

Vec3 apply_bump(const BumpMap& h, const Vec3& x) {
  require_in_ball(x, "apply_bump");
  const Twist t = twist_at(h, dot(x, x));
  if (t.theta == 0.0) return x;
  return rotate(x, t.theta);
}

Vec3 apply_bump_inverse(const BumpMap& h, const Vec3& x) {
  require_in_ball(x, "apply_bump_inverse");
  const Twist t = twist_at(h, dot(x, x));
  if (t.theta == 0.0) return x;
  return rotate(x, -t.theta);
}

Mat3 jac_bump(const BumpMap& h, const Vec3& x) {
  require_in_ball(x, "jac_bump");
  const Twist t = twist_at(h, dot(x, x));
  if (t.theta == 0.0 && t.slope == 0.0) return Mat3::identity();
  const double c = std::cos(t.theta);
  const double s = std::sin(t.theta);
  // d/dx_j of the rotated pair picks up theta'(rho) x_j / rho times the
  // derivative of the rotation with respect to the angle.
  const double d2 = -s * x[1] - c * x[2];
  const double d3 = c * x[1] - s * x[2];
  Mat3 J;
  J(0, 0) = 1.0;
  for (std::size_t j = 0; j < 3; ++j) {
    J(1, j) = t.slope * x[j] * d2;
    J(2, j) = t.slope * x[j] * d3;
  }
  J(1, 1) += c;
  J(1, 2) -= s;
  J(2, 1) += s;
  J(2, 2) += c;
  return J;
}

HComponents h_components(const BumpMap& h, const Vec3& x) {
  const Mat3 J = jac_bump(h, x);
  return {J(2, 2), J(1, 2)};
}

double c1_distance(const BumpMap& h, std::size_t n_samples, Exec exec) {
  if (n_samples < 1) {
    throw std::invalid_argument("c1_distance: need at least one sample");
  }
  if (h.amplitude() == 0.0) return 0.0;
  const auto pts = halton_ball(n_samples, true);
  const auto vals = map_indexed<double>(exec, pts.size(), [&](std::size_t i) {
    const Vec3& x = pts[i];
    return norm(apply_bump(h, x) - x) + op_norm(jac_bump(h, x) - Mat3::identity());
  });
  return *std::max_element(vals.begin(), vals.end());
}

IntegralEstimate I_of_h(const BumpMap& h, const QuadratureSpec& spec,
                        Exec exec) {
  IntegralEstimate est;
  if (spec.method == QuadratureSpec::Method::midpoint) {
    if (spec.grid < 2) {
      throw std::invalid_argument("I_of_h: grid must be at least 2");
    }
    const SlabSum fine = midpoint_total(h, spec.grid, exec);
    const SlabSum coarse = midpoint_total(h, spec.grid / 2, exec);
    est.min_h_u = std::min(fine.min_h_u, coarse.min_h_u);
    if (!(est.min_h_u > 0.0)) {
      throw NonPositiveHu("I_of_h: h^u <= 0 at some quadrature node (min " +
                          std::to_string(est.min_h_u) + ")");
    }
    est.integral = fine.sum;
    est.value = fine.sum / kBallVolume;
    est.standard_error = std::abs(fine.sum - coarse.sum) / kBallVolume;
    est.points = fine.count;
    return est;
  }

  if (spec.samples < 2) {
    throw std::invalid_argument("I_of_h: need at least two Monte Carlo samples");
  }
  // Chunks draw from their own stream so the result does not depend on the
  // partition into threads.
  constexpr std::size_t kChunk = 4096;
  const std::size_t n_chunks = (spec.samples + kChunk - 1) / kChunk;
  struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    double min_h_u = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
  };
  const auto chunks = map_indexed<Moments>(exec, n_chunks, [&](std::size_t c) {
    Moments m;
    RandomStream rng(spec.seed, c);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(spec.samples, begin + kChunk);
    for (std::size_t i = begin; i < end; ++i) {
      Vec3 x;
      do {
        x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
             rng.uniform(-1.0, 1.0)};
      } while (dot(x, x) > 1.0);
      const double hu = h_components(h, x).h_u;
      m.min_h_u = std::min(m.min_h_u, hu);
      ++m.count;
      if (hu <= 0.0) continue;
      const double v = std::log(hu);
      m.sum += v;
      m.sum_sq += v * v;
    }
    return m;
  });
  Moments total;
  for (const auto& m : chunks) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
    total.count += m.count;
    total.min_h_u = std::min(total.min_h_u, m.min_h_u);
  }
  est.min_h_u = total.min_h_u;
  if (!(est.min_h_u > 0.0)) {
    throw NonPositiveHu("I_of_h: h^u <= 0 at some Monte Carlo sample");
  }
  const double n = static_cast<double>(total.count);
  const double mean = total.sum / n;
  const double var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
  est.value = mean;
  est.integral = mean * kBallVolume;
  est.standard_error = std::sqrt(var / n);
  est.points = total.count;
  return est;
}

TorusPoint apply_localized(const LocalizedBump& lb, const TorusPoint& w) {
  const AdaptedChart& chart = lb.chart();
  const Vec3 offset = chart.adapted_offset(w);
  if (!(norm(offset) < chart.radius())) return w;
  const Vec3 y = offset / chart.radius();
  const Vec3 moved = apply_bump(lb.bump(), y) - y;
  return TorusPoint::from_lift(w.lift() +
                               chart.radius() * (chart.spectral().P * moved));
}

TorusPoint apply_localized_inverse(const LocalizedBump& lb,
                                   const TorusPoint& w) {
  const AdaptedChart& chart = lb.chart();
  const Vec3 offset = chart.adapted_offset(w);
  if (!(norm(offset) < chart.radius())) return w;
  const Vec3 y = offset / chart.radius();
  const Vec3 moved = apply_bump_inverse(lb.bump(), y) - y;
  return TorusPoint::from_lift(w.lift() +
                               chart.radius() * (chart.spectral().P * moved));
}

Mat3 jac_localized(const LocalizedBump& lb, const TorusPoint& w) {
  const AdaptedChart& chart = lb.chart();
  const Vec3 offset = chart.adapted_offset(w);
  if (!(norm(offset) < chart.radius())) return Mat3::identity();
  const SpectralData& s = chart.spectral();
  return s.P * jac_bump(lb.bump(), offset / chart.radius()) * s.P_inv;
}

double localized_c1_distance(const LocalizedBump& lb, std::size_t n_samples,
                             Exec exec) {
  if (n_samples < 1) {
    throw std::invalid_argument("localized_c1_distance: need samples");
  }
  const AdaptedChart& chart = lb.chart();
  const SpectralData& s = chart.spectral();
  const auto pts = halton_ball(n_samples, true);
  const auto vals = map_indexed<double>(exec, pts.size(), [&](std::size_t i) {
    // shrink slightly so the sample stays inside the open ball
    const TorusPoint w = adapted_backward(chart, (1.0 - 1e-12) * pts[i]);
    const Vec3 dw = torus_delta(w, apply_localized(lb, w));
    const Mat3 dj = s.P_inv * (jac_localized(lb, w) - Mat3::identity()) * s.P;
    return norm(s.P_inv * dw) + op_norm(dj);
  });
  return *std::max_element(vals.begin(), vals.end());
}

}  // namespace centrex
