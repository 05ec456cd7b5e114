#include "centrex/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace centrex {
namespace {

double char_poly_derivative(int k, double x) {
  return (3.0 * x - 2.0 * (k + 1.0)) * x + k;
}

// Bisection to width 1e-13 on a bracket with p(lo) < 0 < p(hi) or the
// reverse, then one Newton step, then the best of the neighbouring doubles.
double bracketed_root(int k, double lo, double hi) {
  double plo = char_poly_eval(k, lo);
  const double phi = char_poly_eval(k, hi);
  if (!(plo * phi < 0.0)) {
    throw std::logic_error("bracketed_root: no sign change on bracket");
  }
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double pm = char_poly_eval(k, mid);
    if (pm == 0.0) return mid;
    if ((pm < 0.0) == (plo < 0.0)) {
      lo = mid;
      plo = pm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  const double dp = char_poly_derivative(k, x);
  if (dp != 0.0) x -= char_poly_eval(k, x) / dp;
  return x;
}

// Among x and its two floating-point neighbours, the one with the smallest
// residual. A one-ulp miss at lu ~ k costs ~k^2 ulp in the residual.
double snap_to_best(int k, double x) {
  double best = x;
  double best_res = std::abs(char_poly_eval(k, x));
  for (double cand : {std::nextafter(x, 0.0), std::nextafter(x, 2.0 * x + 1.0)}) {
    const double res = std::abs(char_poly_eval(k, cand));
    if (res < best_res) {
      best = cand;
      best_res = res;
    }
  }
  return best;
}

double log_point(double lo, double hi, double fraction) {
  return lo * std::pow(hi / lo, fraction);
}

}  // namespace

Mat3 family_matrix(int k) {
  return Mat3({0.0, 0.0, 1.0, 0.0, 1.0, -1.0, -1.0, -1.0, static_cast<double>(k)});
}

Mat3 inverse_matrix(int k) {
  return Mat3({k - 1.0, -1.0, -1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0});
}

double char_poly_eval(int k, double x) {
  return ((x - (k + 1.0)) * x + k) * x - 1.0;
}

Vec3 eigenvector(double lambda) {
  if (lambda == 1.0) {
    throw std::domain_error("eigenvector: pole of (1, l/(1-l), l) at l = 1");
  }
  if (!std::isfinite(lambda)) {
    throw std::domain_error("eigenvector: non-finite eigenvalue");
  }
  return normalized(Vec3{1.0, lambda / (1.0 - lambda), lambda});
}

double theta_of(double lambda_s, double lambda_c, double lambda_u) {
  return std::min(lambda_c / lambda_s, lambda_u / lambda_c);
}

SpectralData solve_spectrum(int k) {
  if (k < 5) {
    throw std::invalid_argument("solve_spectrum: k must be >= 5, got " +
                                std::to_string(k));
  }
  SpectralData s;
  s.k = k;
  s.lambda_u = snap_to_best(k, bracketed_root(k, k, k + 1.0));
  s.lambda_c = snap_to_best(k, bracketed_root(k, 0.5, 1.0));
  double ls = 1.0 / (s.lambda_c * s.lambda_u);
  const double dp = char_poly_derivative(k, ls);
  if (dp != 0.0) ls -= char_poly_eval(k, ls) / dp;
  s.lambda_s = snap_to_best(k, ls);

  s.e_s = eigenvector(s.lambda_s);
  s.e_c = eigenvector(s.lambda_c);
  s.e_u = eigenvector(s.lambda_u);
  s.P = Mat3::from_columns(s.e_s, s.e_c, s.e_u);
  s.P_inv = inverse(s.P);
  s.theta = theta_of(s.lambda_s, s.lambda_c, s.lambda_u);
  return s;
}

ConeConstants cone_constants(const SpectralData& spectral, double beta) {
  if (!(beta > 0.0)) {
    throw std::domain_error("cone_constants: beta must be positive");
  }
  const double b1 = 1.0 + beta;
  ConeConstants c;
  c.theta = spectral.theta;
  c.beta = beta;
  const double lo1 = b1 * spectral.lambda_s;
  const double hi1 = spectral.lambda_c / b1;
  const double lo2 = b1 * spectral.lambda_c;
  const double hi2 = spectral.lambda_u / b1;
  c.mu1 = log_point(lo1, hi1, 1.0 / 3.0);
  c.lambda2 = log_point(lo1, hi1, 2.0 / 3.0);
  c.mu2 = log_point(lo2, hi2, 1.0 / 3.0);
  c.lambda3 = log_point(lo2, hi2, 2.0 / 3.0);
  c.lambda1 = spectral.lambda_s;
  c.mu3 = spectral.lambda_u;
  if (!(c.mu1 < 1.0) || !(c.lambda3 > 1.0)) {
    throw std::domain_error("cone_constants: mu1 < 1 < lambda3 violated");
  }
  return c;
}

ConeConstants cone_constants(const SpectralData& spectral) {
  if (!(spectral.theta > 1.0)) {
    throw std::domain_error("cone_constants: Theta must exceed 1");
  }
  return cone_constants(spectral, std::pow(spectral.theta, 0.25) - 1.0);
}

AdaptedChart::AdaptedChart(TorusPoint center, double radius,
                           SpectralData spectral)
    : center_(center), radius_(radius), spectral_(std::move(spectral)) {
  if (!(radius > 0.0 && radius < 1.0)) {
    throw std::invalid_argument("AdaptedChart: radius must lie in (0, 1)");
  }
  if (!(radius * op_norm(spectral_.P) < 0.5)) {
    throw std::invalid_argument(
        "AdaptedChart: adapted ball does not embed in the torus "
        "(need r |P| < 1/2)");
  }
}

Vec3 AdaptedChart::adapted_offset(const TorusPoint& w) const {
  return spectral_.P_inv * torus_delta(center_, w);
}

bool AdaptedChart::contains(const TorusPoint& w) const {
  return norm(adapted_offset(w)) < radius_;
}

double AdaptedChart::half_extent(int axis) const {
  return radius_ * norm(spectral_.P.row(static_cast<std::size_t>(axis)));
}

Vec3 adapted_forward(const AdaptedChart& chart, const TorusPoint& w) {
  const Vec3 x = chart.adapted_offset(w) / chart.radius();
  if (norm(x) > 1.0) {
    throw std::domain_error("adapted_forward: point outside the adapted ball");
  }
  return x;
}

TorusPoint adapted_backward(const AdaptedChart& chart, const Vec3& x) {
  const Vec3 d = chart.radius() * (chart.spectral().P * x);
  return TorusPoint::from_lift(chart.center().lift() + d);
}

double adapted_ball_volume(const AdaptedChart& chart) {
  const double r = chart.radius();
  return std::abs(det(chart.spectral().P)) * (4.0 / 3.0) * std::numbers::pi *
         r * r * r;
}

}  // namespace centrex
