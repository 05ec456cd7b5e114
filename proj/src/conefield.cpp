#include "centrex/conefield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "centrex/perturbation.hpp"
#include "centrex/sampling.hpp"

namespace centrex {
namespace {

struct Split {
  std::array<bool, 3> core;
};

Split split_of(ConeFamily family) {
  switch (family) {
    case ConeFamily::s:
      return {{true, false, false}};
    case ConeFamily::u:
      return {{false, false, true}};
    case ConeFamily::cs:
      return {{true, true, false}};
    case ConeFamily::cu:
      return {{false, true, true}};
  }
  throw std::logic_error("unknown cone family");
}

struct Parts {
  double core;
  double complement;
};

Parts parts(const Vec3& a, ConeFamily family) {
  const Split sp = split_of(family);
  double e2 = 0.0;
  double f2 = 0.0;
  for (std::size_t i = 0; i < 3; ++i) (sp.core[i] ? e2 : f2) += a[i] * a[i];
  return {std::sqrt(e2), std::sqrt(f2)};
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Margins of one linearised map M = diag * G. Each entry also keeps the
// direction where it is attained.
struct PointResult {
  std::array<double, ConeMargins::count> margin;
  std::array<Vec3, ConeMargins::count> direction;
  double chain;
};

struct Kernel {
  Mat3 diag;
  Mat3 diag_inv;
  ConeConstants c;
  std::vector<Vec3> fwd_u, fwd_cu, bwd_s, bwd_cs;

  Kernel(const SpectralData& s, const ConeConstants& cc, std::size_t n)
      : diag(Mat3::diagonal(s.lambda_s, s.lambda_c, s.lambda_u)),
        diag_inv(Mat3::diagonal(1.0 / s.lambda_s, 1.0 / s.lambda_c,
                                1.0 / s.lambda_u)),
        c(cc) {
    if (!std::isfinite(cc.gamma) || !std::isfinite(cc.epsilon)) {
      throw std::invalid_argument(
          "cone certificate: constants need gamma and epsilon "
          "(use complete_constants)");
    }
    const double narrow = cc.gamma * cc.beta;
    fwd_u = cone_boundary_directions(ConeFamily::u, narrow, n);
    fwd_cu = cone_boundary_directions(ConeFamily::cu, narrow, n);
    bwd_s = cone_boundary_directions(ConeFamily::s, cc.beta, n);
    bwd_cs = cone_boundary_directions(ConeFamily::cs, cc.beta, n);
  }

  // Margin order: inv s, inv cs, inv u, inv cu, exp s, exp cs, exp u, exp cu
  PointResult evaluate(const Mat3& g) const {
    PointResult out;
    out.margin.fill(kInf);
    const Mat3 m = diag * g;
    const Mat3 m_inv = inverse(g) * diag_inv;
    const Vec3 sv = singular_values(g);
    const double l = sv[0];
    const double L = sv[2];
    const double narrow = c.gamma * c.beta;
    out.chain = std::min({c.lambda3 * l - 1.0, 1.0 / (L * c.mu1) - 1.0,
                          (l * c.lambda2) / (L * c.mu1) - 1.0,
                          (l * c.lambda3) / (L * c.mu2) - 1.0});

    auto take = [&](std::size_t slot, double value, const Vec3& dir) {
      if (value < out.margin[slot]) {
        out.margin[slot] = value;
        out.direction[slot] = dir;
      }
    };

    for (const Vec3& v : fwd_u) {
      const Vec3 w = m * v;
      const double stretch = norm(w) / norm(v);
      take(2, 1.0 - cone_ratio(w, ConeFamily::u) / narrow, v);
      take(6, stretch / (c.lambda3 * l) - 1.0, v);
    }
    for (const Vec3& v : fwd_cu) {
      const Vec3 w = m * v;
      const double stretch = norm(w) / norm(v);
      take(3, 1.0 - cone_ratio(w, ConeFamily::cu) / narrow, v);
      take(7, stretch / (c.lambda2 * l) - 1.0, v);
    }
    for (const Vec3& v : bwd_s) {
      const Vec3 w = m_inv * v;
      const double stretch = norm(w) / norm(v);
      take(0, 1.0 - cone_ratio(w, ConeFamily::s) / c.beta, v);
      take(4, stretch * (L * c.mu1) - 1.0, v);
    }
    for (const Vec3& v : bwd_cs) {
      const Vec3 w = m_inv * v;
      const double stretch = norm(w) / norm(v);
      take(1, 1.0 - cone_ratio(w, ConeFamily::cs) / c.beta, v);
      take(5, stretch * (L * c.mu2) - 1.0, v);
    }
    return out;
  }
};

ConeMargins to_margins(const std::array<double, ConeMargins::count>& m) {
  return {m[0], m[1], m[2], m[3], m[4], m[5], m[6], m[7]};
}

void finish(ConeCertificate& cert, const PointResult& worst,
            const std::vector<Vec3>& worst_points) {
  cert.margins = to_margins(worst.margin);
  cert.chain_margin = worst.chain;
  std::size_t arg = 0;
  for (std::size_t i = 1; i < ConeMargins::count; ++i) {
    if (worst.margin[i] < worst.margin[arg]) arg = i;
  }
  cert.worst_margin = ConeMargins::names()[arg];
  cert.worst_point = worst_points[arg];
  cert.worst_direction = worst.direction[arg];
  cert.pass = cert.margins.min() > 0.0 && cert.chain_margin > 0.0;
}

}  // namespace

std::string to_string(ConeFamily family) {
  switch (family) {
    case ConeFamily::s:
      return "s";
    case ConeFamily::u:
      return "u";
    case ConeFamily::cs:
      return "cs";
    case ConeFamily::cu:
      return "cu";
  }
  return "?";
}

const std::array<const char*, ConeMargins::count>& ConeMargins::names() {
  static const std::array<const char*, count> n{
      "invariance_s", "invariance_cs", "invariance_u", "invariance_cu",
      "expansion_s",  "expansion_cs",  "expansion_u",  "expansion_cu"};
  return n;
}

std::array<double, ConeMargins::count> ConeMargins::as_array() const {
  return {invariance_s, invariance_cs, invariance_u, invariance_cu,
          expansion_s,  expansion_cs,  expansion_u,  expansion_cu};
}

double ConeMargins::min() const {
  const auto a = as_array();
  return *std::min_element(a.begin(), a.end());
}

double cone_ratio(const Vec3& a, ConeFamily family) {
  const Parts p = parts(a, family);
  if (p.core == 0.0) return kInf;
  return p.complement / p.core;
}

bool in_cone_adapted(const Vec3& a, ConeFamily family, double beta) {
  if (a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0) {
    throw std::invalid_argument("in_cone: zero vector");
  }
  const Parts p = parts(a, family);
  return p.complement <= beta * p.core * (1.0 + 1e-12);
}

bool in_cone(const Vec3& v, const SpectralData& splitting, ConeFamily family,
             double beta) {
  if (v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0) {
    throw std::invalid_argument("in_cone: zero vector");
  }
  return in_cone_adapted(splitting.P_inv * v, family, beta);
}

std::vector<Vec3> cone_boundary_directions(ConeFamily family, double beta,
                                           std::size_t n) {
  if (n < 4) {
    throw std::invalid_argument("cone_boundary_directions: need n >= 4");
  }
  const Split sp = split_of(family);
  std::vector<std::size_t> core, comp;
  for (std::size_t i = 0; i < 3; ++i) (sp.core[i] ? core : comp).push_back(i);

  std::vector<Vec3> out;
  out.reserve(n + core.size());
  if (core.size() == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(n);
      Vec3 v;
      v[core[0]] = 1.0;
      v[comp[0]] = beta * std::cos(phi);
      v[comp[1]] = beta * std::sin(phi);
      out.push_back(normalized(v));
    }
  } else {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; out.size() < n; ++i) {
      const double phi = std::numbers::pi * static_cast<double>(i % half) /
                         static_cast<double>(half);
      const double sign = i < half ? 1.0 : -1.0;
      Vec3 v;
      v[core[0]] = std::cos(phi);
      v[core[1]] = std::sin(phi);
      v[comp[0]] = sign * beta;
      out.push_back(normalized(v));
    }
  }
  for (std::size_t idx : core) {
    Vec3 e;
    e[idx] = 1.0;
    out.push_back(e);
  }
  return out;
}

double gamma_of(const ConeConstants& c) {
  const double g = std::max(c.mu2 / c.lambda3, c.mu1 / c.lambda2);
  if (!(g < 1.0)) {
    throw std::domain_error("gamma_of: gamma must be < 1");
  }
  return g;
}

double epsilon_bound(const ConeConstants& c) {
  const double g = gamma_of(c);
  const double b = c.beta;
  const double recapture =
      b * (1.0 - g) / ((1.0 + b) * std::sqrt(1.0 + g * g * b * b));
  const double with_inverse = recapture / (1.0 + recapture);
  const double ratio = (1.0 - g) / (1.0 + g);
  const double upper = 1.0 / c.mu1 - 1.0;
  const double lower = 1.0 - 1.0 / c.lambda3;
  return std::min({with_inverse, ratio, upper, lower});
}

ConeConstants complete_constants(const ConeConstants& constants) {
  ConeConstants c = constants;
  c.gamma = gamma_of(c);
  c.epsilon = epsilon_bound(c);
  return c;
}

ConeCertificate check_linear_cones(const SpectralData& spectral,
                                   const ConeConstants& constants,
                                   std::size_t n_dirs) {
  const Kernel kernel(spectral, constants, n_dirs);
  const PointResult r = kernel.evaluate(Mat3::identity());
  ConeCertificate cert;
  cert.grid = {1, n_dirs};
  cert.constants = constants;
  const std::vector<Vec3> at(ConeMargins::count, Vec3{});
  finish(cert, r, at);
  return cert;
}

ConeCertificate certify_perturbed(const PerturbedDiffeo& f,
                                  const ConeConstants& constants,
                                  const ConeGrid& grid, std::size_t c1_samples,
                                  Exec exec) {
  const SpectralData& spectral = f.spectral();
  const Kernel kernel(spectral, constants, grid.directions);

  ConeCertificate cert;
  cert.grid = grid;
  cert.constants = constants;

  PointResult worst = kernel.evaluate(Mat3::identity());
  std::vector<Vec3> worst_points(ConeMargins::count, Vec3{});

  if (!f.is_unperturbed()) {
    const BumpMap& bump = f.localized().bump();
    cert.c1_distance = c1_distance(bump, c1_samples, exec);
    cert.precondition_met = cert.c1_distance < constants.epsilon;

    const auto pts = halton_ball(grid.points, true);
    const auto results = map_indexed<PointResult>(
        exec, pts.size(),
        [&](std::size_t i) { return kernel.evaluate(jac_bump(bump, pts[i])); });
    for (std::size_t i = 0; i < results.size(); ++i) {
      for (std::size_t m = 0; m < ConeMargins::count; ++m) {
        if (results[i].margin[m] < worst.margin[m]) {
          worst.margin[m] = results[i].margin[m];
          worst.direction[m] = results[i].direction[m];
          worst_points[m] = pts[i];
        }
      }
      worst.chain = std::min(worst.chain, results[i].chain);
    }
  } else {
    cert.grid.points = 1;
  }
  finish(cert, worst, worst_points);
  return cert;
}

}  // namespace centrex
