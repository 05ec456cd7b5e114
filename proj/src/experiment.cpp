#include "centrex/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "centrex/errors.hpp"

namespace centrex {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const char* field, const char* rule) {
  if (!ok) {
    throw std::invalid_argument(std::string("config: ") + field + " " + rule);
  }
}

RadiusEstimate middle_exponent(const LyapunovEstimate& est, double radius) {
  RadiusEstimate out;
  out.radius = radius;
  out.sigma_c = est.exponents[1];
  out.std_error = est.std_error[1];
  out.ci_lo = est.ci_lo[1];
  out.ci_hi = est.ci_hi[1];
  out.n_seeds = est.n_seeds;
  return out;
}

bool contains_zero(const RadiusEstimate& e) {
  return e.ci_lo <= 0.0 && e.ci_hi >= 0.0;
}

std::string describe(const RadiusEstimate& e) {
  std::ostringstream os;
  os << "sigma_c(" << e.radius << ") = " << e.sigma_c << " CI [" << e.ci_lo
     << ", " << e.ci_hi << "]";
  return os.str();
}

}  // namespace

std::vector<int> ExperimentConfig::k_values() const {
  std::vector<int> ks;
  for (int k = k_min; k <= k_max; k += k_step) ks.push_back(k);
  return ks;
}

void ExperimentConfig::validate() const {
  require(k_min >= 5, "k_min", "must be >= 5");
  require(k_max >= k_min, "k_max", "must be >= k_min");
  require(k_step >= 1, "k_step", "must be >= 1");
  require(amplitude >= 0.0 && amplitude < std::acos(-1.0) / 2.0, "amplitude",
          "must lie in [0, pi/2)");
  require(margin > 0.0 && margin < 1.0, "margin", "must lie in (0, 1)");
  for (std::size_t i = 0; i < 3; ++i) {
    require(std::isfinite(center[i]), "center", "must be finite");
  }
  require(radius > 0.0 && radius < 1.0, "radius", "must lie in (0, 1)");
  require(n_seeds >= 2, "n_seeds", "must be >= 2");
  require(iters >= 1, "iters", "must be >= 1");
  require(quadrature_grid >= 2 && quadrature_grid % 2 == 0, "quadrature_grid",
          "must be even and >= 2");
  require(cone_points >= 1, "cone_points", "must be >= 1");
  require(cone_directions >= 4, "cone_directions", "must be >= 4");
  require(c1_samples >= 1, "c1_samples", "must be >= 1");
  require(c_points >= 1, "c_points", "must be >= 1");
  require(pullback_depth >= 1, "pullback_depth", "must be >= 1");
  require(return_n_max >= 1, "return_n_max", "must be >= 1");
  require(return_samples >= 1, "return_samples", "must be >= 1");
  require(!search.ks.empty() && !search.amplitudes.empty() &&
              !search.radii.empty(),
          "search", "needs non-empty ks, amplitudes and radii");
  for (int k : search.ks) require(k >= 5, "search.ks", "entries must be >= 5");
  for (double a : search.amplitudes) {
    require(a >= 0.0 && a < std::acos(-1.0) / 2.0, "search.amplitudes",
            "entries must lie in [0, pi/2)");
  }
  for (double r : search.radii) {
    require(r > 0.0 && r < 1.0, "search.radii", "entries must lie in (0, 1)");
  }
  require(r0.ci_floor > 0.0, "r0.ci_floor", "must be > 0");
  require(r0.max_bisections >= 1, "r0.max_bisections", "must be >= 1");
  require(r0.max_refinements >= 0, "r0.max_refinements", "must be >= 0");
  require(threads >= 0, "threads", "must be >= 0");
  require(!stem.empty(), "stem", "must not be empty");
}

void apply_environment(ExperimentConfig& config) {
  const char* dir = std::getenv("CENTREX_OUT_DIR");
  if (dir != nullptr && *dir != '\0') config.out_dir = dir;
}

AdaptedChart make_chart(const ExperimentConfig& config, double radius,
                        const SpectralData& spectral) {
  return AdaptedChart(TorusPoint::from_coords(config.center), radius,
                      spectral);
}

PerturbedDiffeo make_diffeo(const ExperimentConfig& config, int k,
                            double amplitude, double radius) {
  SpectralData s = solve_spectrum(k);
  if (radius == 0.0) return PerturbedDiffeo::unperturbed(std::move(s));
  AdaptedChart chart = make_chart(config, radius, s);
  return PerturbedDiffeo::perturbed(
      LocalizedBump(BumpMap(amplitude, config.margin), std::move(chart)));
}

SweepRow sweep_row(const ExperimentConfig& config, int k, Exec exec) {
  SweepRow row;
  row.k = k;
  for (double* x :
       {&row.lambda_s, &row.lambda_c, &row.lambda_u, &row.theta, &row.beta,
        &row.gamma, &row.epsilon, &row.c1_distance, &row.I_h, &row.C,
        &row.lower_bound, &row.sigma_c, &row.sigma_c_ci_lo, &row.sigma_c_ci_hi,
        &row.sigma_u}) {
    *x = kNaN;
  }
  row.n_r = -1;
  row.verdict = "fail";
  row.status = "ok";
  try {
    const SpectralData s = solve_spectrum(k);
    row.lambda_s = s.lambda_s;
    row.lambda_c = s.lambda_c;
    row.lambda_u = s.lambda_u;
    row.theta = s.theta;

    const ConeConstants cc = complete_constants(cone_constants(s));
    row.beta = cc.beta;
    row.gamma = cc.gamma;
    row.epsilon = cc.epsilon;

    const BumpMap bump(config.amplitude, config.margin);
    row.c1_distance = c1_distance(bump, config.c1_samples, exec);
    QuadratureSpec quad;
    quad.grid = config.quadrature_grid;
    row.I_h = I_of_h(bump, quad, exec).value;

    const AdaptedChart chart = make_chart(config, config.radius, s);
    const ReturnTime rt = return_time(s, chart, config.return_n_max,
                                      config.return_samples, exec);
    row.n_r = rt.n;

    const PerturbedDiffeo f =
        PerturbedDiffeo::perturbed(LocalizedBump(bump, chart));
    CGrid cgrid;
    cgrid.points = config.c_points;
    cgrid.depth = config.pullback_depth;
    row.C = estimate_C(f, cgrid, exec).value;
    row.lower_bound = corollary_lower_bound(s, chart, row.I_h, row.n_r, row.C);

    const ConeCertificate cert = certify_perturbed(
        f, cc, {config.cone_points, config.cone_directions},
        config.c1_samples, exec);
    row.verdict = cert.pass ? "pass" : "fail";

    SigmaOptions opts;
    opts.warmup = config.warmup;
    opts.pullback_depth = config.pullback_depth;
    const SigmaPair sp = estimate_sigmas(f, config.n_seeds, config.iters,
                                         config.master_seed, opts, exec);
    row.sigma_c = sp.c.value();
    row.sigma_c_ci_lo = sp.c.primary.ci_lo;
    row.sigma_c_ci_hi = sp.c.primary.ci_hi;
    row.sigma_u = sp.u.value();
    if (!rt.found) row.status = "n_r > n_max";
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

SweepTable sweep_k(const ExperimentConfig& config, Exec exec) {
  config.validate();
  SweepTable table;
  for (int k : config.k_values()) table.push_back(sweep_row(config, k, exec));
  return table;
}

PositiveWitness find_positive_example(const ExperimentConfig& config,
                                      Exec exec) {
  config.validate();
  std::vector<SearchStep> trace;
  for (int k : config.search.ks) {
    const SpectralData s = solve_spectrum(k);
    const double log_c = std::log(s.lambda_c);
    for (double a : config.search.amplitudes) {
      for (double r : config.search.radii) {
        SearchStep step{k, a, r, kNaN, kNaN, kNaN, ""};
        try {
          const PerturbedDiffeo f = make_diffeo(config, k, a, r);
          const LyapunovEstimate est =
              lyapunov_mc(f, config.n_seeds, config.iters, config.master_seed,
                          config.warmup, exec);
          step.sigma_c = est.exponents[1];
          step.ci_lo = est.ci_lo[1];
          step.ci_hi = est.ci_hi[1];
          const bool positive = est.ci_lo[1] > 0.0 && log_c < 0.0;
          step.note = positive ? "witness" : "CI not above 0";
          trace.push_back(step);
          if (positive) {
            PositiveWitness w;
            w.k = k;
            w.amplitude = a;
            w.radius = r;
            w.log_lambda_c = log_c;
            w.lyapunov = est;
            w.certificate = certify_perturbed(
                f, complete_constants(cone_constants(s)),
                {config.cone_points, config.cone_directions},
                config.c1_samples, exec);
            w.trace = std::move(trace);
            return w;
          }
        } catch (const std::invalid_argument& e) {
          step.note = std::string("skipped: ") + e.what();
          trace.push_back(step);
        }
      }
    }
  }
  std::ostringstream os;
  os << "no (k, a, r) with a central exponent CI above 0 among "
     << trace.size() << " candidates:";
  for (const SearchStep& st : trace) {
    os << "\n  k=" << st.k << " a=" << st.amplitude << " r=" << st.radius
       << " sigma_c=" << st.sigma_c << " [" << st.ci_lo << ", " << st.ci_hi
       << "] " << st.note;
  }
  throw NotFound(os.str());
}

RadiusEstimate sigma_c_at(const ExperimentConfig& config, int k,
                          double amplitude, double radius,
                          std::size_t n_seeds, Exec exec) {
  const PerturbedDiffeo f = make_diffeo(config, k, amplitude, radius);
  return middle_exponent(lyapunov_mc(f, n_seeds, config.iters,
                                     config.master_seed, config.warmup, exec),
                         radius);
}

R0Result find_r0(int k, double amplitude, double r_hi,
                 const ExperimentConfig& config, Exec exec) {
  config.validate();
  if (!(r_hi > 0.0 && r_hi < 1.0)) {
    throw std::invalid_argument("find_r0: r_hi must lie in (0, 1)");
  }
  R0Result out;
  RadiusEstimate lo = sigma_c_at(config, k, amplitude, 0.0, config.n_seeds,
                                 exec);
  RadiusEstimate hi = sigma_c_at(config, k, amplitude, r_hi, config.n_seeds,
                                 exec);
  out.trace = {lo, hi};
  if (!(lo.ci_hi < 0.0)) {
    throw BracketInvalid("find_r0: " + describe(lo) + " is not below 0");
  }
  if (!(hi.ci_lo > 0.0)) {
    throw BracketInvalid("find_r0: " + describe(hi) + " is not above 0");
  }

  std::size_t seeds = config.n_seeds;
  int refinements = 0;
  RadiusEstimate mid;
  for (out.bisections = 0; out.bisections < config.r0.max_bisections;) {
    const double m = 0.5 * (lo.radius + hi.radius);
    mid = sigma_c_at(config, k, amplitude, m, seeds, exec);
    out.trace.push_back(mid);
    if (contains_zero(mid)) {
      if (0.5 * (mid.ci_hi - mid.ci_lo) <= config.r0.ci_floor) {
        out.converged = true;
        break;
      }
      if (refinements < config.r0.max_refinements) {
        ++refinements;
        seeds *= 2;
        continue;
      }
      break;
    }
    ++out.bisections;
    (mid.ci_lo > 0.0 ? hi : lo) = mid;
  }
  out.r0 = mid.radius;
  out.at_r0 = mid;
  out.lower = lo;
  out.upper = hi;

  if (config.r0.monotonicity_diagnostic) {
    for (int i = 1; i <= 5; ++i) {
      const double r = r_hi * i / 6.0;
      out.diagnostic.push_back(
          sigma_c_at(config, k, amplitude, r, config.n_seeds, exec));
    }
    for (std::size_t i = 1; i < out.diagnostic.size(); ++i) {
      const RadiusEstimate& a = out.diagnostic[i - 1];
      const RadiusEstimate& b = out.diagnostic[i];
      const double tol = 3.0 * std::hypot(a.std_error, b.std_error);
      if (b.sigma_c < a.sigma_c - tol) out.monotone_within_noise = false;
    }
  }
  return out;
}

}  // namespace centrex
