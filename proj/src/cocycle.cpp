#include "centrex/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "centrex/errors.hpp"
#include "centrex/rng.hpp"
#include "centrex/sampling.hpp"

namespace centrex {
namespace {

// Streams above this index belong to the direct-jacobian point cloud, so
// they never collide with per-seed orbit streams.
constexpr std::uint64_t kCloudStreamBase = 0x8000'0000'0000'0000ull;
constexpr std::size_t kCloudChunk = 256;

using Vec2 = std::array<double, 2>;

struct Mat2 {
  double a, b, c, d;  // [[a, b], [c, d]]
};

Vec2 mul2(const Mat2& m, const Vec2& v) {
  return {m.a * v[0] + m.b * v[1], m.c * v[0] + m.d * v[1]};
}

Vec2 solve(const Mat2& m, const Vec2& v) {
  const double det = m.a * m.d - m.b * m.c;
  return {(m.d * v[0] - m.b * v[1]) / det, (m.a * v[1] - m.c * v[0]) / det};
}

double norm2(const Vec2& v) { return std::hypot(v[0], v[1]); }

Vec2 unit(const Vec2& v) {
  const double n = norm2(v);
  return {v[0] / n, v[1] / n};
}

// The derivative of f restricted to the invariant cu-plane, in adapted
// coordinates (c, u): diag(lc, lu) * Dh(y) on the ball, diag outside.
Mat2 cu_block(const PerturbedDiffeo& f, const TorusPoint& w) {
  const SpectralData& s = f.spectral();
  Mat2 m{s.lambda_c, 0.0, 0.0, s.lambda_u};
  if (f.is_unperturbed()) return m;
  const AdaptedChart& chart = f.localized().chart();
  const Vec3 offset = chart.adapted_offset(w);
  if (!(norm(offset) < chart.radius())) return m;
  const Mat3 J = jac_bump(f.localized().bump(), offset / chart.radius());
  return {s.lambda_c * J(1, 1), s.lambda_c * J(1, 2), s.lambda_u * J(2, 1),
          s.lambda_u * J(2, 2)};
}

TorusPoint retreat(const PerturbedDiffeo& f, const TorusPoint& w) {
  return TorusPoint::from_coords(inverse_step(f, w).coords());
}

TorusPoint uniform_point(RandomStream& rng) {
  const double x = rng.uniform();
  const double y = rng.uniform();
  const double z = rng.uniform();
  return TorusPoint::from_coords({x, y, z});
}

Mat3 random_frame(RandomStream& rng) {
  Mat3 m;
  for (double& x : m.a) x = rng.uniform(-1.0, 1.0);
  return qr_decompose(m).q;
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
};

MethodEstimate summarize(const std::string& method, const Moments& m) {
  MethodEstimate e;
  e.method = method;
  const double n = static_cast<double>(m.n);
  e.value = m.sum / n;
  const double var =
      m.n > 1 ? std::max(0.0, (m.sum_sq - n * e.value * e.value) / (n - 1.0))
              : 0.0;
  e.std_error = std::sqrt(var / n);
  const double hw = ci95_half_width(e.std_error, m.n);
  e.ci_lo = e.value - hw;
  e.ci_hi = e.value + hw;
  e.samples = m.n;
  return e;
}

MethodEstimate from_lyapunov(const LyapunovEstimate& l, std::size_t slot) {
  MethodEstimate e;
  e.method = "spectrum-average";
  e.value = l.exponents[slot];
  e.std_error = l.std_error[slot];
  e.ci_lo = l.ci_lo[slot];
  e.ci_hi = l.ci_hi[slot];
  e.samples = l.n_seeds;
  return e;
}

struct CloudSums {
  Moments c;
  Moments u;
};

CloudSums direct_jacobian(const PerturbedDiffeo& f, std::uint64_t master_seed,
                          const SigmaOptions& opt, Exec exec) {
  const std::size_t n_chunks =
      (opt.cloud_points + kCloudChunk - 1) / kCloudChunk;
  const auto chunks = map_indexed<CloudSums>(exec, n_chunks, [&](std::size_t ci) {
    CloudSums out;
    RandomStream rng(master_seed, kCloudStreamBase + ci);
    const std::size_t begin = ci * kCloudChunk;
    const std::size_t end = std::min(opt.cloud_points, begin + kCloudChunk);
    for (std::size_t i = begin; i < end; ++i) {
      const TorusPoint w = uniform_point(rng);
      const Mat2 b = cu_block(f, w);
      const double jc =
          std::log(norm2(mul2(b, central_direction(f, w, opt.pullback_depth))));
      const double ju =
          std::log(norm2(mul2(b, unstable_direction(f, w, opt.pullback_depth))));
      out.c.sum += jc;
      out.c.sum_sq += jc * jc;
      ++out.c.n;
      out.u.sum += ju;
      out.u.sum_sq += ju * ju;
      ++out.u.n;
    }
    return out;
  });
  CloudSums total;
  for (const auto& c : chunks) {
    total.c.sum += c.c.sum;
    total.c.sum_sq += c.c.sum_sq;
    total.c.n += c.c.n;
    total.u.sum += c.u.sum;
    total.u.sum_sq += c.u.sum_sq;
    total.u.n += c.u.n;
  }
  return total;
}

SigmaEstimate combine(Bundle bundle, const MethodEstimate& a,
                      const MethodEstimate& b) {
  SigmaEstimate s;
  s.bundle = bundle;
  s.primary = a;
  s.cross_check = b;
  const double se = std::hypot(a.std_error, b.std_error);
  // rounding floor for the exact (linear) case where both errors vanish
  const double floor = 1e-12 * std::max(1.0, std::abs(a.value));
  s.disagreement = std::abs(a.value - b.value) > 3.0 * se + floor;
  return s;
}

}  // namespace

TorusPoint advance(const PerturbedDiffeo& f, const TorusPoint& w) {
  return TorusPoint::from_coords(step(f, w).coords());
}

namespace {

Exponents benettin_from_frame(const PerturbedDiffeo& f, const TorusPoint& w0,
                              std::size_t T, std::size_t warmup, Mat3 q) {
  if (T < 1) throw std::invalid_argument("benettin_spectrum: T must be >= 1");
  TorusPoint w = w0.reanchored();
  for (std::size_t t = 0; t < warmup; ++t) {
    q = qr_decompose(dstep(f, w) * q).q;
    w = advance(f, w);
  }
  std::array<double, 3> acc{0.0, 0.0, 0.0};
  for (std::size_t t = 0; t < T; ++t) {
    const QR qr = qr_decompose(dstep(f, w) * q);
    q = qr.q;
    for (std::size_t i = 0; i < 3; ++i) acc[i] += std::log(qr.r_diag[i]);
    w = advance(f, w);
  }
  Exponents out;
  for (std::size_t i = 0; i < 3; ++i) out[i] = acc[i] / static_cast<double>(T);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

Exponents benettin_spectrum(const PerturbedDiffeo& f, const TorusPoint& w0,
                            std::size_t T, std::size_t warmup,
                            std::uint64_t seed) {
  RandomStream rng(seed, 0);
  return benettin_from_frame(f, w0, T, warmup, random_frame(rng));
}

double ci95_half_width(double se, std::size_t n) {
  if (n < 2) return std::numeric_limits<double>::infinity();
  const boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
}

LyapunovEstimate lyapunov_mc(const PerturbedDiffeo& f, std::size_t n_seeds,
                             std::size_t T, std::uint64_t master_seed,
                             std::size_t warmup, Exec exec) {
  if (n_seeds < 2) {
    throw std::invalid_argument("lyapunov_mc: need at least two seeds");
  }
  LyapunovEstimate est;
  est.n_seeds = n_seeds;
  est.n_iters = T;
  est.warmup = warmup;
  est.master_seed = master_seed;
  est.per_seed = map_indexed<Exponents>(exec, n_seeds, [&](std::size_t i) {
    RandomStream rng(master_seed, i);
    const TorusPoint w0 = uniform_point(rng);
    return benettin_from_frame(f, w0, T, warmup, random_frame(rng));
  });
  const double n = static_cast<double>(n_seeds);
  for (std::size_t j = 0; j < 3; ++j) {
    double sum = 0.0;
    for (const auto& e : est.per_seed) sum += e[j];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& e : est.per_seed) ss += (e[j] - mean) * (e[j] - mean);
    const double se = std::sqrt(ss / (n - 1.0) / n);
    const double hw = ci95_half_width(se, n_seeds);
    est.exponents[j] = mean;
    est.std_error[j] = se;
    est.ci_lo[j] = mean - hw;
    est.ci_hi[j] = mean + hw;
  }
  return est;
}

std::array<double, 2> central_direction(const PerturbedDiffeo& f,
                                        const TorusPoint& w,
                                        std::size_t depth) {
  std::vector<TorusPoint> orbit;
  orbit.reserve(depth + 1);
  orbit.push_back(w.reanchored());
  for (std::size_t j = 0; j < depth; ++j) orbit.push_back(advance(f, orbit.back()));
  Vec2 v = unit({1.0, 1.0});
  for (std::size_t j = depth; j-- > 0;) v = unit(solve(cu_block(f, orbit[j]), v));
  if (v[0] < 0.0) v = {-v[0], -v[1]};
  return v;
}

std::array<double, 2> unstable_direction(const PerturbedDiffeo& f,
                                         const TorusPoint& w,
                                         std::size_t depth) {
  std::vector<TorusPoint> back;
  back.reserve(depth);
  TorusPoint x = w.reanchored();
  for (std::size_t j = 0; j < depth; ++j) {
    x = retreat(f, x);
    back.push_back(x);
  }
  Vec2 v = unit({1.0, 1.0});
  for (std::size_t j = depth; j-- > 0;) v = unit(mul2(cu_block(f, back[j]), v));
  if (v[1] < 0.0) v = {-v[0], -v[1]};
  return v;
}

SigmaPair estimate_sigmas(const PerturbedDiffeo& f, std::size_t n_seeds,
                          std::size_t T, std::uint64_t master_seed,
                          const SigmaOptions& options, Exec exec) {
  SigmaPair out;
  out.lyapunov = lyapunov_mc(f, n_seeds, T, master_seed, options.warmup, exec);
  const CloudSums cloud = direct_jacobian(f, master_seed, options, exec);
  out.u = combine(Bundle::u, from_lyapunov(out.lyapunov, 0),
                  summarize("direct-jacobian", cloud.u));
  out.c = combine(Bundle::c, from_lyapunov(out.lyapunov, 1),
                  summarize("direct-jacobian", cloud.c));
  return out;
}

SigmaEstimate sigma_estimate(const PerturbedDiffeo& f, Bundle bundle,
                             std::size_t n_seeds, std::size_t T,
                             std::uint64_t master_seed,
                             const SigmaOptions& options, Exec exec) {
  SigmaPair p = estimate_sigmas(f, n_seeds, T, master_seed, options, exec);
  return bundle == Bundle::c ? p.c : p.u;
}

ReturnTime return_time(const SpectralData& spectral, const AdaptedChart& chart,
                       int n_max, std::size_t n_samples, Exec exec) {
  if (n_max < 1) throw std::invalid_argument("return_time: n_max must be >= 1");
  if (n_samples < 1) throw std::invalid_argument("return_time: need samples");
  const PerturbedDiffeo linear = PerturbedDiffeo::unperturbed(spectral);
  const auto pts = halton_ball(n_samples, true);
  // first hit time per sample (n_max + 1 when none)
  const auto hits = map_indexed<int>(exec, pts.size(), [&](std::size_t i) {
    TorusPoint w = adapted_backward(chart, (1.0 - 1e-12) * pts[i]);
    for (int n = 1; n <= n_max; ++n) {
      w = advance(linear, w);
      if (chart.contains(w)) return n;
    }
    return n_max + 1;
  });
  ReturnTime rt;
  rt.n_max = n_max;
  rt.samples = pts.size();
  const int first = *std::min_element(hits.begin(), hits.end());
  rt.found = first <= n_max;
  rt.n = rt.found ? first : n_max + 1;
  rt.caveat =
      "sampled: a missed intersection reports a larger n than the true "
      "return time";
  return rt;
}

bool check_F_disjoint(int k) {
  if (k < 1) throw std::invalid_argument("check_F_disjoint: k must be >= 1");
  // A_k * A_k^-1 == I over the integers.
  const long long kk = k;
  const long long a[3][3] = {{0, 0, 1}, {0, 1, -1}, {-1, -1, kk}};
  const long long b[3][3] = {{kk - 1, -1, -1}, {1, 1, 0}, {1, 0, 0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      long long s = 0;
      for (int l = 0; l < 3; ++l) s += a[i][l] * b[l][j];
      if (s != (i == j ? 1 : 0)) return false;
    }
  }
  // third coordinate of A^-1 (x, y, z) is x
  if (b[2][0] != 1 || b[2][1] != 0 || b[2][2] != 0) return false;
  // x in (0, 2/3), z in (5/6, 1); since the image coordinate is exactly x
  // (no wrap), disjointness is 2/3 <= 5/6, i.e. 2*6 <= 5*3.
  return 2 * 6 <= 5 * 3;
}

bool point_in_F(const TorusPoint& w) {
  const Vec3& x = w.coords();
  return x[0] > 0.0 && x[0] < 2.0 / 3.0 && x[1] > 0.0 && x[1] < 1.0 &&
         x[2] > 5.0 / 6.0 && x[2] < 1.0;
}

bool ball_inside_F(const AdaptedChart& chart) {
  const Vec3& p = chart.center().coords();
  const std::array<double, 3> lo{0.0, 0.0, 5.0 / 6.0};
  const std::array<double, 3> hi{2.0 / 3.0, 1.0, 1.0};
  for (int i = 0; i < 3; ++i) {
    const double h = chart.half_extent(i);
    if (!(p[i] - h > lo[i] && p[i] + h < hi[i])) return false;
  }
  return true;
}

CEstimate estimate_C(const PerturbedDiffeo& f, const CGrid& grid, Exec exec) {
  CEstimate est;
  if (f.is_unperturbed()) return est;
  const LocalizedBump& lb = f.localized();
  const auto pts = halton_ball(grid.points, true);
  est.points = pts.size();
  struct PointC {
    double ratio;
    double proj;
    double h_u;
  };
  const auto vals = map_indexed<PointC>(exec, pts.size(), [&](std::size_t i) {
    const Vec3 y = (1.0 - 1e-12) * pts[i];
    const HComponents hc = h_components(lb.bump(), y);
    const TorusPoint w = adapted_backward(lb.chart(), y);
    const auto vc = central_direction(f, w, grid.depth);
    return PointC{std::abs(hc.h_c) / hc.h_u, std::abs(vc[1] / vc[0]), hc.h_u};
  });
  for (const auto& v : vals) {
    if (!(v.h_u > 0.0)) {
      throw NonPositiveHu("estimate_C: h^u <= 0 inside the ball");
    }
    est.max_ratio = std::max(est.max_ratio, v.ratio);
    est.max_projection = std::max(est.max_projection, v.proj);
  }
  est.value = est.max_ratio * est.max_projection;
  return est;
}

double corollary_lower_bound(const SpectralData& spectral,
                             const AdaptedChart& chart, double I_h, int n_r,
                             double C) {
  if (n_r < 1) {
    throw std::invalid_argument("corollary_lower_bound: n_r must be >= 1");
  }
  const double alpha = spectral.lambda_c / spectral.lambda_u;
  return adapted_ball_volume(chart) * (-I_h - C * std::pow(alpha, n_r));
}

}  // namespace centrex
