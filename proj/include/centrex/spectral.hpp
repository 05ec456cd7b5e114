#pragma once

// The integer family A_k, its spectrum, and adapted charts.
//
//        [  0   0   1 ]
//  A_k = [  0   1  -1 ]      p_k(x) = x^3 - (k+1) x^2 + k x - 1
//        [ -1  -1   k ]
//
// For k >= 5 the roots are real with 0 < ls < lc < 1 < lu, lu in (k, k+1)
// and lc in (1/2, 1); the eigenvector for a root l is parallel to
// (1, l / (1 - l), l).

#include "centrex/cone_constants.hpp"
#include "centrex/mat3.hpp"
#include "centrex/torus.hpp"

namespace centrex {

Mat3 family_matrix(int k);

// Closed-form inverse [[k-1,-1,-1],[1,1,0],[1,0,0]] (det A_k = 1).
Mat3 inverse_matrix(int k);

// p_k(x) by Horner's rule.
double char_poly_eval(int k, double x);

// Unit eigenvector direction of A_k for eigenvalue `lambda`.
// Throws std::domain_error at the pole lambda == 1.
Vec3 eigenvector(double lambda);

struct SpectralData {
  int k = 0;
  double lambda_s = 0.0;
  double lambda_c = 0.0;
  double lambda_u = 0.0;
  Vec3 e_s, e_c, e_u;
  Mat3 P;      // columns (e_s, e_c, e_u)
  Mat3 P_inv;  // adapted coordinates of a tangent vector
  double theta = 0.0;

  // Adapted norm: Euclidean norm of the adapted coordinates.
  double adapted_norm(const Vec3& v) const { return norm(P_inv * v); }
};

// Throws std::invalid_argument for k < 5.
SpectralData solve_spectrum(int k);

// min(lambda_c / lambda_s, lambda_u / lambda_c)
double theta_of(double lambda_s, double lambda_c, double lambda_u);

// beta = Theta^(1/4) - 1; mu1, lambda2 at the 1/3 and 2/3 log-points of
// ((1+beta) ls, lc / (1+beta)); mu2, lambda3 likewise on
// ((1+beta) lc, lu / (1+beta)). Throws std::domain_error unless
// mu1 < 1 < lambda3 (or Theta <= 1).
ConeConstants cone_constants(const SpectralData& spectral);

// Same rule for an explicit beta (used to probe invalid choices).
ConeConstants cone_constants(const SpectralData& spectral, double beta);

// Adapted ball B^k_r(p): the set {w : |P_inv (w - p)| < r}. Charts are
// required to embed in the torus: r * |P|_op < 1/2, so every point of the
// ball has a unique nearest-lattice displacement from p.
class AdaptedChart {
 public:
  AdaptedChart(TorusPoint center, double radius, SpectralData spectral);

  const TorusPoint& center() const { return center_; }
  double radius() const { return radius_; }
  const SpectralData& spectral() const { return spectral_; }

  // Adapted displacement P_inv (w - p), nearest lattice representative.
  Vec3 adapted_offset(const TorusPoint& w) const;
  bool contains(const TorusPoint& w) const;

  // Euclidean half-extent of the ball along coordinate axis i.
  double half_extent(int axis) const;

 private:
  TorusPoint center_;
  double radius_;
  SpectralData spectral_;
};

// (1/r) P_inv (w - p); throws std::domain_error outside the closed ball.
Vec3 adapted_forward(const AdaptedChart& chart, const TorusPoint& w);
// p + r P x, with the lift continuing the center's lift.
TorusPoint adapted_backward(const AdaptedChart& chart, const Vec3& x);

// |det P| (4/3) pi r^3.
double adapted_ball_volume(const AdaptedChart& chart);

}  // namespace centrex
