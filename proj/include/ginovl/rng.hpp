#pragma once

#include <array>
#include <cstdint>
#include <utility>

// Counter-based random numbers. Every variate is a pure function of
// (seed, stream, entry): the stream is the matrix index, the entry is the
// position of the Gaussian inside the matrix. No generator state is shared,
// so any partition of the work over threads reproduces the same numbers.

namespace ginovl::rng {

/// Philox4x32 with 10 rounds.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Uniform in (0, 1] with 53 random bits.
double uniform_open_closed(std::uint32_t hi, std::uint32_t lo);

/// Gaussian variates addressed by (seed, stream, entry).
///
/// Block b = entry / 2 is the Philox counter (b, stream); its four words give
/// two uniforms u1, u2 and the Box-Muller pair
///   sqrt(-2 ln u1) cos(2 pi u2),  sqrt(-2 ln u1) sin(2 pi u2)
/// assigned to entries 2b and 2b + 1.
class GaussianStream {
public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream);

  std::pair<double, double> pair(std::uint64_t block) const;
  double at(std::uint64_t entry) const;

private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
};

}  // namespace ginovl::rng
