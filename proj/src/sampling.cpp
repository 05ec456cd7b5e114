#include "centrex/sampling.hpp"

namespace centrex {

double radical_inverse(std::size_t index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

std::vector<Vec3> halton_ball(std::size_t n, bool include_center) {
  std::vector<Vec3> pts;
  pts.reserve(n);
  if (include_center && n > 0) pts.push_back({0.0, 0.0, 0.0});
  // index 0 maps to the corner (-1,-1,-1); start at 1
  for (std::size_t i = 1; pts.size() < n; ++i) {
    const Vec3 x{2.0 * radical_inverse(i, 2) - 1.0,
                 2.0 * radical_inverse(i, 3) - 1.0,
                 2.0 * radical_inverse(i, 5) - 1.0};
    if (dot(x, x) <= 1.0) pts.push_back(x);
  }
  return pts;
}

}  // namespace centrex
