#pragma once

// Cone families around the (constant) invariant splitting and a sampling
// certifier for absolute partial hyperbolicity.
//
// All cone computations happen in adapted coordinates a = P^-1 v, where the
// splitting E^s + E^c + E^u is the canonical basis and the adapted norm is
// the Euclidean norm. The linear map becomes diag(ls, lc, lu) and the
// derivative of h_{k,r} becomes Dh.
//
// Size of an admissible perturbation. Let |Dg - I| <= e, v in C(E, gamma
// beta) and s = sqrt(1 + gamma^2 beta^2), so |v| <= s |v_E|. Then
//
//   |(Dg v)_F| <= gamma beta |v_E| + e s |v_E|
//   |(Dg v)_E| >= |v_E| - e s |v_E|
//
// and Dg v stays in C(E, beta) as soon as e <= b := beta (1 - gamma) /
// ((1 + beta) s). The backward families use Dg^-1 with |Dg^-1 - I| <=
// e / (1 - e), which needs e <= b / (1 + b). The expansion bookkeeping with
// l = 1 - e <= |Dg v| / |v| <= L = 1 + e needs l / L > gamma, L mu1 < 1 and
// l lambda3 > 1, i.e. e < (1 - gamma) / (1 + gamma), e < 1/mu1 - 1 and
// e < 1 - 1/lambda3. epsilon_bound is the minimum of those four numbers.

#include <cstddef>
#include <string>
#include <vector>

#include "centrex/cone_constants.hpp"
#include "centrex/diffeo.hpp"
#include "centrex/parallel.hpp"
#include "centrex/spectral.hpp"

namespace centrex {

enum class ConeFamily { s, u, cs, cu };

std::string to_string(ConeFamily family);

// |a_F| <= beta |a_E| for a in adapted coordinates. The closed cone is
// tested with a relative slack of 1e-12 so boundary directions built by
// normalisation stay inside. Throws std::invalid_argument on a == 0.
bool in_cone_adapted(const Vec3& a, ConeFamily family, double beta);

// Same test for a Euclidean tangent vector, decomposed along the splitting.
bool in_cone(const Vec3& v, const SpectralData& splitting, ConeFamily family,
             double beta);

// |a_F| / |a_E| in adapted coordinates (infinity when a_E == 0).
double cone_ratio(const Vec3& a, ConeFamily family);

// n unit vectors (adapted coordinates) on the cone boundary |a_F| = beta
// |a_E|, followed by the core basis directions. One-dimensional cores
// sweep the circle of F-directions; two-dimensional cores sweep a half
// circle of core directions with both signs of the F component.
// Throws std::invalid_argument for n < 4.
std::vector<Vec3> cone_boundary_directions(ConeFamily family, double beta,
                                           std::size_t n);

// max(mu2 / lambda3, mu1 / lambda2); throws std::domain_error if >= 1.
double gamma_of(const ConeConstants& constants);

// Minimum of the four sufficient conditions in the header comment.
// Throws std::domain_error if gamma >= 1.
double epsilon_bound(const ConeConstants& constants);

// Copy of `constants` with gamma and epsilon filled in.
ConeConstants complete_constants(const ConeConstants& constants);

struct ConeGrid {
  std::size_t points = 1000;
  std::size_t directions = 64;
};

struct ConeMargins {
  double invariance_s;
  double invariance_cs;
  double invariance_u;
  double invariance_cu;
  double expansion_s;
  double expansion_cs;
  double expansion_u;
  double expansion_cu;

  static constexpr std::size_t count = 8;
  static const std::array<const char*, count>& names();
  std::array<double, count> as_array() const;
  double min() const;

  friend bool operator==(const ConeMargins&, const ConeMargins&) = default;
};

struct ConeCertificate {
  bool pass = false;
  ConeMargins margins{};
  // min of lambda3 l - 1, 1/(L mu1) - 1, l lambda2/(L mu1) - 1 and
  // l lambda3/(L mu2) - 1 over the sampled points
  double chain_margin = 0.0;
  ConeGrid grid;
  ConeConstants constants;
  // Perturbed certificates only: the sampled C^1 distance of the bump and
  // whether it is below epsilon (the sufficient precondition).
  double c1_distance = 0.0;
  bool precondition_met = true;
  // Location of the smallest margin: its name, the adapted ball point
  // (unit-ball coordinates) and the direction (adapted coordinates).
  std::string worst_margin;
  Vec3 worst_point;
  Vec3 worst_direction;
};

// Checks the linear map diag(ls, lc, lu) on cone boundary directions:
// forward invariance of the u / cu cones of aperture gamma*beta inside
// aperture gamma*beta (margin 1 - ratio / (gamma beta)), backward
// invariance of the s / cs cones of aperture beta (margin 1 - ratio / beta),
// and the four stretch bounds lambda3 l, lambda2 l, (L mu2)^-1, (L mu1)^-1
// together with lambda3 l > 1, l lambda2 > L mu1, l lambda3 > L mu2 and
// L mu1 < 1 (here l = L = 1). `constants` must be complete.
ConeCertificate check_linear_cones(const SpectralData& spectral,
                                   const ConeConstants& constants,
                                   std::size_t n_dirs);

// The same checks for diag(ls, lc, lu) * Dh(y) at Halton points y of the
// unit ball (the adapted picture of D f_{k,r} on the perturbation ball),
// with l and L the extreme singular values of Dh(y). Outside the ball the
// linear certificate applies verbatim, so the result is the point-wise
// minimum together with it. For the unperturbed map this equals
// check_linear_cones. `c1_samples` sizes the C^1 distance estimate.
ConeCertificate certify_perturbed(const PerturbedDiffeo& f,
                                  const ConeConstants& constants,
                                  const ConeGrid& grid = {},
                                  std::size_t c1_samples = 100000,
                                  Exec exec = Exec::parallel);

}  // namespace centrex
