// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and runtime budgets are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "centrex/cocycle.hpp"
#include "centrex/conefield.hpp"
#include "centrex/errors.hpp"
#include "centrex/experiment.hpp"
#include "centrex/io.hpp"
#include "centrex/parallel.hpp"
#include "centrex/perturbation.hpp"
#include "centrex/rng.hpp"

using namespace centrex;

namespace {

constexpr double kProductTol = 1e-10;
constexpr double kPolyTol = 1e-9;
constexpr double kAngleTol = 0.05;
constexpr double kDetTol = 1e-9;
constexpr double kJacobianTol = 1e-5;
constexpr double kFdStep = 1e-6;
constexpr double kBenettinTol = 1e-3;
constexpr double kSumTol = 1e-6;
constexpr double kSigmaSE = 3.0;
constexpr double kR0SE = 2.0;

const Vec3 kCenter{1.0 / 3.0, 0.5, 11.0 / 12.0};

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Vec3 random_in_ball(RandomStream& rng) {
  for (;;) {
    const Vec3 x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (norm(x) < 1.0) return x;
  }
}

AdaptedChart chart_for(int k, double r) {
  return AdaptedChart(TorusPoint::from_coords(kCenter), r, solve_spectrum(k));
}

PerturbedDiffeo bumped(int k, double a, double r) {
  return PerturbedDiffeo::perturbed(
      LocalizedBump(BumpMap(a, 0.1), chart_for(k, r)));
}

Outcome spectral_suite() {
  double worst_product = 0.0;
  double worst_poly = 0.0;
  bool ok = true;
  for (int k = 5; k <= 200; ++k) {
    const SpectralData s = solve_spectrum(k);
    ok = ok && s.lambda_u > k && s.lambda_u < k + 1;
    ok = ok && s.lambda_c > 0.5 && s.lambda_c < 1.0;
    ok = ok && s.lambda_s > 0.0 && s.lambda_s < s.lambda_c;
    worst_product = std::max(
        worst_product, std::abs(s.lambda_s * s.lambda_c * s.lambda_u - 1.0));
    for (double l : {s.lambda_s, s.lambda_c, s.lambda_u}) {
      worst_poly = std::max(worst_poly, std::abs(char_poly_eval(k, l)));
    }
  }
  ok = ok && worst_product < kProductTol && worst_poly < kPolyTol;
  return {ok, "k=5..200, max|prod-1|=" + fmt("%.2e", worst_product) +
                  ", max|p_k|=" + fmt("%.2e", worst_poly)};
}

Outcome eigenvector_convergence() {
  std::vector<double> angles;
  for (int k : {5, 10, 50, 200}) {
    const Vec3 e = normalized(solve_spectrum(k).e_c);
    angles.push_back(std::acos(std::min(1.0, std::abs(e[1]))));
  }
  bool ok = angles.back() < kAngleTol;
  for (std::size_t i = 1; i < angles.size(); ++i) {
    ok = ok && angles[i] < angles[i - 1];
  }
  std::string d = "angles(k=5,10,50,200) =";
  for (double a : angles) d += " " + fmt("%.5f", a);
  return {ok, d};
}

Outcome perturbation_integrity() {
  RandomStream rng(301, 0);
  double worst_det = 0.0;
  double worst_fd = 0.0;
  bool identity = true;
  for (double a : {0.1, 0.3, 0.8, 1.2}) {
    const BumpMap h(a, 0.1);
    for (int i = 0; i < 25000; ++i) {
      const Vec3 x = random_in_ball(rng);
      const Mat3 j = jac_bump(h, x);
      worst_det = std::max(worst_det, std::abs(det(j) - 1.0));
      if (i < 2000 && norm(x) < 0.99) {
        Mat3 fd;
        for (std::size_t c = 0; c < 3; ++c) {
          Vec3 e;
          e[c] = kFdStep;
          const Vec3 col =
              (apply_bump(h, x + e) - apply_bump(h, x - e)) / (2.0 * kFdStep);
          for (std::size_t r = 0; r < 3; ++r) fd(r, c) = col[r];
        }
        worst_fd = std::max(worst_fd, max_abs(j - fd));
      }
      if (i < 5000) {
        const Vec3 y = (0.9 + 0.1 * rng.uniform()) * normalized(x);
        identity = identity && apply_bump(h, y) == y &&
                   jac_bump(h, y) == Mat3::identity();
      }
    }
  }
  const bool ok = worst_det < kDetTol && worst_fd < kJacobianTol && identity;
  return {ok, "1e5 samples, max|det-1|=" + fmt("%.2e", worst_det) +
                  ", max|J-FD|=" + fmt("%.2e", worst_fd) +
                  (identity ? ", identity on the collar" : ", collar moved")};
}

Outcome ih_sign() {
  bool ok = I_of_h(BumpMap(0.0, 0.1)).value == 0.0;
  std::string d = "I(0)=0";
  QuadratureSpec mc;
  mc.method = QuadratureSpec::Method::monte_carlo;
  for (double a : {0.1, 0.2, 0.3}) {
    const IntegralEstimate mid = I_of_h(BumpMap(a, 0.1));
    const IntegralEstimate est = I_of_h(BumpMap(a, 0.1), mc);
    ok = ok && mid.value < 0.0 && est.value < 0.0 &&
         std::abs(est.value) > 3.0 * est.standard_error;
    d += ", a=" + fmt("%.1f", a) + ": " + fmt("%.4e", est.value) + " (" +
         fmt("%.1f", std::abs(est.value) / est.standard_error) + " SE)";
  }
  return {ok, d};
}

Outcome cone_certification() {
  bool linear_ok = true;
  ConeMargins prev{};
  for (int k = 5; k <= 100; ++k) {
    const SpectralData s = solve_spectrum(k);
    const ConeCertificate c =
        check_linear_cones(s, complete_constants(cone_constants(s)), 64);
    linear_ok = linear_ok && c.pass && c.margins.min() > 0.0;
    if (k > 5) {
      const auto now = c.margins.as_array();
      const auto before = prev.as_array();
      for (std::size_t i = 0; i < now.size(); ++i) {
        linear_ok = linear_ok && now[i] > before[i];
      }
    }
    prev = c.margins;
  }
  bool grid_ok = true;
  int certified = 0;
  for (int k : {5, 20, 100}) {
    const ConeConstants cc = complete_constants(cone_constants(solve_spectrum(k)));
    for (double frac : {0.3, 0.6, 0.9}) {
      const ConeCertificate c = certify_perturbed(bumped(k, frac * cc.epsilon / 1.1, 0.06), cc);
      if (c.c1_distance < cc.epsilon) {
        ++certified;
        grid_ok = grid_ok && c.pass;
      }
    }
  }
  grid_ok = grid_ok && certified == 9;
  bool zero_ok = true;
  for (int k : {5, 20, 100}) {
    const SpectralData s = solve_spectrum(k);
    const ConeConstants cc = complete_constants(cone_constants(s));
    const ConeCertificate lin = check_linear_cones(s, cc, 64);
    const ConeCertificate per = certify_perturbed(bumped(k, 0.0, 0.06), cc, {200, 64});
    zero_ok = zero_ok && per.margins == lin.margins &&
              per.chain_margin == lin.chain_margin && per.pass == lin.pass;
  }
  return {linear_ok && grid_ok && zero_ok,
          std::string("linear k=5..100 ") + (linear_ok ? "pass/increasing" : "FAIL") +
              ", perturbed grid " + std::to_string(certified) + "/9 below eps " +
              (grid_ok ? "pass" : "FAIL") + ", a=0 " +
              (zero_ok ? "bitwise equal" : "differs")};
}

Outcome lyapunov_oracle() {
  const SpectralData s = solve_spectrum(5);
  const Exponents e = benettin_spectrum(PerturbedDiffeo::unperturbed(s),
                                        TorusPoint::from_coords({0.1, 0.2, 0.3}),
                                        20000, 200, 1);
  const Exponents ref{std::log(5.0489173395223053), std::log(0.64310413210779056),
                      std::log(0.30797852836990413)};
  double err = 0.0;
  for (std::size_t i = 0; i < 3; ++i) err = std::max(err, std::abs(e[i] - ref[i]));
  double worst_sum = std::abs(e[0] + e[1] + e[2]);
  for (const PerturbedDiffeo& f :
       {PerturbedDiffeo::unperturbed(s), bumped(5, 0.3, 0.06), bumped(200, 1.2, 0.4)}) {
    for (const Exponents& x : lyapunov_mc(f, 16, 5000, 7).per_seed) {
      worst_sum = std::max(worst_sum, std::abs(x[0] + x[1] + x[2]));
    }
  }
  return {err < kBenettinTol && worst_sum < kSumTol,
          "max|exp-oracle|=" + fmt("%.2e", err) + ", max|sum|=" + fmt("%.2e", worst_sum)};
}

struct Corollary {
  int k;
  double a;
  double r;
  double gain_c;
  double loss_u;
  double se_c;
  double se_u;
  double lower;
};

const std::vector<Corollary>& corollary_runs() {
  static const std::vector<Corollary> runs = [] {
    std::vector<Corollary> out;
    const ExperimentConfig cfg;
    for (auto [k, a, r] : {std::tuple{5, 0.3, 0.06}, std::tuple{20, 0.5, 0.2},
                           std::tuple{200, 1.2, 0.4}}) {
      const PerturbedDiffeo f = bumped(k, a, r);
      const SpectralData& s = f.spectral();
      const AdaptedChart& chart = f.localized().chart();
      SigmaOptions opt;
      opt.warmup = cfg.warmup;
      opt.pullback_depth = cfg.pullback_depth;
      const SigmaPair p = estimate_sigmas(f, cfg.n_seeds, cfg.iters, cfg.master_seed, opt);
      const double I_h = I_of_h(BumpMap(a, 0.1)).value;
      const ReturnTime rt = return_time(s, chart, cfg.return_n_max, cfg.return_samples);
      const double C = estimate_C(f, {cfg.c_points, cfg.pullback_depth}).value;
      out.push_back({k, a, r, p.c.value() - std::log(s.lambda_c),
                     std::log(s.lambda_u) - p.u.value(), p.c.std_error(),
                     p.u.std_error(),
                     corollary_lower_bound(s, chart, I_h, rt.n, C)});
    }
    return out;
  }();
  return runs;
}

Outcome corollary_identity() {
  bool ok = true;
  std::string d;
  for (const Corollary& c : corollary_runs()) {
    const double se = std::hypot(c.se_c, c.se_u);
    const double diff = std::abs(c.gain_c - c.loss_u);
    ok = ok && diff < kSigmaSE * se;
    d += (d.empty() ? "" : ", ") + std::string("k=") + std::to_string(c.k) +
         ": " + fmt("%.2f", diff / se) + " SE";
  }
  return {ok, d};
}

Outcome corollary_inequality() {
  bool ok = true;
  std::string d;
  for (const Corollary& c : corollary_runs()) {
    ok = ok && c.gain_c >= c.lower - kSigmaSE * c.se_c;
    d += (d.empty() ? "" : ", ") + std::string("k=") + std::to_string(c.k) +
         ": " + fmt("%.3e", c.gain_c) + " vs " + fmt("%.3e", c.lower);
  }
  return {ok, d};
}

const PositiveWitness* witness_ptr = nullptr;

Outcome positive_example() {
  static PositiveWitness first;
  ExperimentConfig cfg;
  try {
    first = find_positive_example(cfg);
  } catch (const NotFound& e) {
    return {false, std::string("not found: ") + e.what()};
  }
  witness_ptr = &first;
  cfg.master_seed = 2;
  bool reproduced = false;
  double lo2 = NAN;
  try {
    const PositiveWitness second = find_positive_example(cfg);
    lo2 = second.lyapunov.ci_lo[1];
    reproduced = second.k == first.k && second.amplitude == first.amplitude &&
                 second.radius == first.radius && lo2 > 0.0;
  } catch (const NotFound&) {
  }
  const bool ok = first.lyapunov.ci_lo[1] > 0.0 && first.log_lambda_c < 0.0 && reproduced;
  return {ok, "k=" + std::to_string(first.k) + " a=" + fmt("%g", first.amplitude) +
                  " r=" + fmt("%g", first.radius) + ", CI lo " +
                  fmt("%.3e", first.lyapunov.ci_lo[1]) + " (seed 2: " +
                  fmt("%.3e", lo2) + "), log lc=" + fmt("%.4f", first.log_lambda_c)};
}

Outcome vanishing_radius() {
  if (witness_ptr == nullptr) return {false, "no witness from criterion 9"};
  const PositiveWitness& w = *witness_ptr;
  R0Result res;
  try {
    res = find_r0(w.k, w.amplitude, w.radius, ExperimentConfig{});
  } catch (const BracketInvalid& e) {
    return {false, std::string("bracket invalid: ") + e.what()};
  }
  const RadiusEstimate& m = res.at_r0;
  const bool bracket = res.lower.ci_hi < 0.0 && res.upper.ci_lo > 0.0 &&
                       res.lower.radius < res.r0 && res.r0 < res.upper.radius;
  const bool ok = bracket && std::abs(m.sigma_c) < kR0SE * m.std_error;
  return {ok, "r0=" + fmt("%.4f", res.r0) + ", sigma_c=" + fmt("%.2e", m.sigma_c) +
                  " (" + fmt("%.2f", std::abs(m.sigma_c) / m.std_error) + " SE), bracket [" +
                  fmt("%.4f", res.lower.radius) + ", " + fmt("%.4f", res.upper.radius) +
                  "]" + (bracket ? "" : " invalid")};
}

Outcome f_region() {
  bool disjoint = true;
  bool inside = true;
  int min_n = 1 << 30;
  for (int k = 5; k <= 100; ++k) {
    disjoint = disjoint && check_F_disjoint(k);
    const AdaptedChart chart = chart_for(k, 0.06);
    inside = inside && ball_inside_F(chart);
    min_n = std::min(min_n, return_time(chart.spectral(), chart, 20, 5000).n);
  }
  return {disjoint && inside && min_n >= 2,
          std::string("F disjoint ") + (disjoint ? "k=5..100" : "FAILS") +
              ", default ball " + (inside ? "inside F" : "leaves F") +
              ", min sampled n_r=" + std::to_string(min_n)};
}

Outcome determinism() {
  ExperimentConfig cfg;
  cfg.k_min = 5;
  cfg.k_max = 7;
  cfg.n_seeds = 8;
  cfg.iters = 2000;
  cfg.warmup = 100;
  cfg.quadrature_grid = 60;
  cfg.cone_points = 200;
  cfg.cone_directions = 32;
  cfg.c1_samples = 10000;
  cfg.c_points = 200;
  cfg.return_samples = 4000;
  const int saved = max_threads();
  set_threads(1);
  const std::string one = to_csv(sweep_k(cfg));
  set_threads(std::max(4, saved));
  const std::string many = to_csv(sweep_k(cfg));
  const std::string again = to_csv(sweep_k(cfg));
  const std::string serial = to_csv(sweep_k(cfg, Exec::serial));
  set_threads(saved);
  const bool ok = one == many && many == again && again == serial;
  return {ok, std::to_string(one.size()) + " bytes, runs " +
                  (ok ? "byte-identical" : "differ") + " (1 and " +
                  std::to_string(std::max(4, saved)) + " threads, serial)"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "spectral suite", 1.0, spectral_suite},
      {2, "eigenvector convergence", 1.0, eigenvector_convergence},
      {3, "perturbation integrity", 10.0, perturbation_integrity},
      {4, "I(h) sign", 30.0, ih_sign},
      {5, "cone certification", 120.0, cone_certification},
      {6, "Lyapunov oracle", 30.0, lyapunov_oracle},
      {7, "corollary identity", 300.0, corollary_identity},
      {8, "corollary inequality", 300.0, corollary_inequality},
      {9, "positive central exponent", 900.0, positive_example},
      {10, "vanishing radius", 900.0, vanishing_radius},
      {11, "F region", 60.0, f_region},
      {12, "determinism", 300.0, determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("#%-2d %s  %s: %s [%.2f s / %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL",
                c.name, o.detail.c_str(), secs, c.budget_s,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
