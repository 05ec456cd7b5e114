#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al., SC'11).
//
// A stream is identified by (master seed, stream index). Draws are a pure
// function of (key, counter), so per-seed orbit jobs produce identical
// numbers no matter which thread runs them or in what order.

#include <array>
#include <cstdint>

namespace centrex {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// One Philox4x32 block with 10 rounds.
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();
  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  void refill();

  PhiloxKey key_{};
  std::uint32_t stream_hi_ = 0;
  std::uint32_t stream_lo_ = 0;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int slot_ = 2;  // 2 == buffer exhausted
};

}  // namespace centrex
