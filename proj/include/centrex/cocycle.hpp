#pragma once

// Orbits of f_{k,r}, Lyapunov spectra, the sigma functionals, return times
// and the lower bound on the change of the central exponent.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "centrex/diffeo.hpp"
#include "centrex/parallel.hpp"
#include "centrex/spectral.hpp"

namespace centrex {

using Exponents = std::array<double, 3>;

// Orbit step with the lift re-anchored in the unit cube.
TorusPoint advance(const PerturbedDiffeo& f, const TorusPoint& w);

// QR (Benettin) estimate along the orbit of w0: `warmup` steps to align a
// random orthonormal frame (drawn from stream `seed`), then T steps whose
// log R-diagonals are averaged. Returned in descending order.
Exponents benettin_spectrum(const PerturbedDiffeo& f, const TorusPoint& w0,
                            std::size_t T, std::size_t warmup,
                            std::uint64_t seed);

struct LyapunovEstimate {
  Exponents exponents{};  // across-seed means, descending
  Exponents std_error{};
  Exponents ci_lo{};
  Exponents ci_hi{};
  std::size_t n_seeds = 0;
  std::size_t n_iters = 0;
  std::size_t warmup = 0;
  std::uint64_t master_seed = 0;
  std::vector<Exponents> per_seed;
};

// Two-sided 95% Student-t half width for the mean of n samples with
// standard error se.
double ci95_half_width(double se, std::size_t n);

// Seed i starts at a uniform point of stream (master_seed, i) and runs
// benettin_spectrum with the same stream. Requires n_seeds >= 2.
LyapunovEstimate lyapunov_mc(const PerturbedDiffeo& f, std::size_t n_seeds,
                             std::size_t T, std::uint64_t master_seed,
                             std::size_t warmup = 200,
                             Exec exec = Exec::parallel);

enum class Bundle { c, u };

struct SigmaOptions {
  std::size_t warmup = 200;
  // direct-jacobian cross-check
  std::size_t pullback_depth = 50;
  std::size_t cloud_points = 1 << 15;
};

struct MethodEstimate {
  std::string method;  // "spectrum-average" or "direct-jacobian"
  double value = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t samples = 0;
};

struct SigmaEstimate {
  Bundle bundle = Bundle::c;
  MethodEstimate primary;      // spectrum-average
  MethodEstimate cross_check;  // direct-jacobian
  // |primary - cross_check| > 3 sqrt(se_A^2 + se_B^2) (plus 1e-12 relative)
  bool disagreement = false;

  double value() const { return primary.value; }
  double std_error() const { return primary.std_error; }
};

struct SigmaPair {
  SigmaEstimate c;
  SigmaEstimate u;
  LyapunovEstimate lyapunov;
};

// Primary: mean over seeds of the matching Benettin exponent. Cross-check:
// average of log J^tau over a uniform cloud, with E^c obtained by pulling a
// cu-plane vector back along `pullback_depth` forward iterates and E^u by
// pushing one forward from `pullback_depth` backward iterates. Both run in
// adapted coordinates restricted to the invariant cu-plane.
SigmaPair estimate_sigmas(const PerturbedDiffeo& f, std::size_t n_seeds,
                          std::size_t T, std::uint64_t master_seed,
                          const SigmaOptions& options = {},
                          Exec exec = Exec::parallel);

SigmaEstimate sigma_estimate(const PerturbedDiffeo& f, Bundle bundle,
                             std::size_t n_seeds, std::size_t T,
                             std::uint64_t master_seed,
                             const SigmaOptions& options = {},
                             Exec exec = Exec::parallel);

// Unit central direction at w in adapted cu-plane coordinates (c, u),
// from `depth` forward iterates.
std::array<double, 2> central_direction(const PerturbedDiffeo& f,
                                        const TorusPoint& w, std::size_t depth);
// Unit unstable direction at w, from `depth` backward iterates.
std::array<double, 2> unstable_direction(const PerturbedDiffeo& f,
                                         const TorusPoint& w, std::size_t depth);

struct ReturnTime {
  bool found = false;
  int n = 0;  // least n with a detected hit; meaningless unless found
  int n_max = 0;
  std::size_t samples = 0;
  std::string caveat;
};

// Least n <= n_max such that a sampled point of the adapted ball is mapped
// back into the ball by A_k^n (the linear map). A miss can only make the
// reported n larger than the true return time.
ReturnTime return_time(const SpectralData& spectral, const AdaptedChart& chart,
                       int n_max, std::size_t n_samples,
                       Exec exec = Exec::parallel);

// F = P((0,2/3) x (0,1) x (5/6,1)). The third row of A_k^-1 is (1, 0, 0), so
// the third coordinate of A_k^-1(x, y, z) is x in (0, 2/3), which misses
// (5/6, 1): A_k^-1(F) and F are disjoint, hence f_k(F) and F too. Checked in
// exact integer / rational arithmetic.
bool check_F_disjoint(int k);

bool point_in_F(const TorusPoint& w);
// Whether the whole adapted ball lies in F (axis-aligned extents).
bool ball_inside_F(const AdaptedChart& chart);

struct CGrid {
  std::size_t points = 1000;
  std::size_t depth = 50;
};

struct CEstimate {
  double value = 0.0;
  double max_ratio = 0.0;       // max |h^c| / h^u over the ball
  double max_projection = 0.0;  // max |Proj_u(e_c)| along the new E^c
  std::size_t points = 0;
};

// C = max |h^c / h^u| * max |Proj_u(e_c)|, both over Halton points of the
// ball. Proj_u(e_c) projects e_c on e_u parallel to the perturbed central
// direction. Zero for the unperturbed map. Throws NonPositiveHu.
CEstimate estimate_C(const PerturbedDiffeo& f, const CGrid& grid = {},
                     Exec exec = Exec::parallel);

// vol(B^k_r(p)) * (-I(h) - C alpha^n_r), alpha = lc / lu. `I_h` is the
// ball average of log h^u (see I_of_h). Throws std::invalid_argument for
// n_r < 1.
double corollary_lower_bound(const SpectralData& spectral,
                             const AdaptedChart& chart, double I_h, int n_r,
                             double C);

}  // namespace centrex
