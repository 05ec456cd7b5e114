#pragma once

// Deterministic low-discrepancy point sets.

#include <cstddef>
#include <vector>

#include "centrex/mat3.hpp"

namespace centrex {

// Radical inverse of `index` in the given prime base (Halton coordinate).
double radical_inverse(std::size_t index, unsigned base);

// First n points of the 3-D Halton sequence (bases 2, 3, 5) restricted to
// the closed unit ball by rejection from [-1, 1]^3. When `include_center`
// is set the origin is emitted first and counts toward n.
std::vector<Vec3> halton_ball(std::size_t n, bool include_center = false);

}  // namespace centrex
