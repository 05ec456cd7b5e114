#pragma once

// Experiment driver: sweeps over k, the search for a perturbation with a
// positive central exponent and the bisection for its vanishing radius.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "centrex/cocycle.hpp"
#include "centrex/conefield.hpp"
#include "centrex/perturbation.hpp"

namespace centrex {

struct SearchSpace {
  std::vector<int> ks{50, 100, 200, 400};
  std::vector<double> amplitudes{1.2};
  std::vector<double> radii{0.3, 0.4};

  friend bool operator==(const SearchSpace&, const SearchSpace&) = default;
};

struct R0Options {
  // stop once the midpoint CI contains 0 and its half width is below this
  double ci_floor = 2.5e-4;
  int max_bisections = 30;
  // seed count may be doubled this many times when the CI is too wide
  int max_refinements = 2;
  bool monotonicity_diagnostic = true;

  friend bool operator==(const R0Options&, const R0Options&) = default;
};

struct ExperimentConfig {
  int k_min = 5;
  int k_max = 20;
  int k_step = 1;

  double amplitude = 0.3;
  double margin = 0.1;
  Vec3 center{1.0 / 3.0, 0.5, 11.0 / 12.0};
  double radius = 0.06;

  std::size_t n_seeds = 64;
  std::size_t iters = 20000;
  std::size_t warmup = 200;
  std::uint64_t master_seed = 1;

  int quadrature_grid = 200;
  std::size_t cone_points = 1000;
  std::size_t cone_directions = 64;
  std::size_t c1_samples = 100000;
  std::size_t c_points = 1000;
  std::size_t pullback_depth = 50;
  int return_n_max = 20;
  std::size_t return_samples = 20000;

  SearchSpace search;
  R0Options r0;

  // 0 keeps the OpenMP default
  int threads = 0;
  std::string out_dir = "out";
  std::string stem = "sweep";

  std::vector<int> k_values() const;
  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// CENTREX_OUT_DIR, when set and non-empty, replaces out_dir.
void apply_environment(ExperimentConfig& config);

struct SweepRow {
  int k = 0;
  double lambda_s = 0.0;
  double lambda_c = 0.0;
  double lambda_u = 0.0;
  double theta = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double epsilon = 0.0;
  double c1_distance = 0.0;
  double I_h = 0.0;
  int n_r = 0;
  double C = 0.0;
  double lower_bound = 0.0;
  double sigma_c = 0.0;
  double sigma_c_ci_lo = 0.0;
  double sigma_c_ci_hi = 0.0;
  double sigma_u = 0.0;
  std::string verdict;  // "pass" or "fail"
  std::string status;   // "ok", or the error that ended the row early

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

using SweepTable = std::vector<SweepRow>;

// Chart of the configured center and radius over A_k.
AdaptedChart make_chart(const ExperimentConfig& config, double radius,
                        const SpectralData& spectral);
PerturbedDiffeo make_diffeo(const ExperimentConfig& config, int k,
                            double amplitude, double radius);

// One row. Errors after the spectrum leave the remaining fields NaN and are
// recorded in `status`.
SweepRow sweep_row(const ExperimentConfig& config, int k,
                   Exec exec = Exec::parallel);
SweepTable sweep_k(const ExperimentConfig& config, Exec exec = Exec::parallel);

struct SearchStep {
  int k = 0;
  double amplitude = 0.0;
  double radius = 0.0;
  double sigma_c = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::string note;
};

struct PositiveWitness {
  int k = 0;
  double amplitude = 0.0;
  double radius = 0.0;
  double log_lambda_c = 0.0;
  LyapunovEstimate lyapunov;
  ConeCertificate certificate;
  std::vector<SearchStep> trace;
};

// Scans search.ks ascending, then amplitudes, then radii, and returns the
// first triple whose middle-exponent 95% CI lies above 0. Throws NotFound
// carrying the trace.
PositiveWitness find_positive_example(const ExperimentConfig& config,
                                      Exec exec = Exec::parallel);

struct RadiusEstimate {
  double radius = 0.0;
  double sigma_c = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t n_seeds = 0;
};

struct R0Result {
  double r0 = 0.0;
  RadiusEstimate at_r0;
  RadiusEstimate lower;  // CI below 0
  RadiusEstimate upper;  // CI above 0
  bool converged = false;
  int bisections = 0;
  std::vector<RadiusEstimate> trace;
  std::vector<RadiusEstimate> diagnostic;
  bool monotone_within_noise = true;
};

// sigma_c as a function of r with common random numbers (the same master
// seed at every radius). r == 0 is the unperturbed map.
RadiusEstimate sigma_c_at(const ExperimentConfig& config, int k,
                          double amplitude, double radius,
                          std::size_t n_seeds, Exec exec = Exec::parallel);

// Bisection on (0, r_hi). Throws BracketInvalid unless the CI at 0 lies
// below 0 and the CI at r_hi above 0.
R0Result find_r0(int k, double amplitude, double r_hi,
                 const ExperimentConfig& config, Exec exec = Exec::parallel);

}  // namespace centrex
