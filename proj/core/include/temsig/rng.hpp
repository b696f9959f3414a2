#ifndef TEMSIG_RNG_HPP
#define TEMSIG_RNG_HPP

#include <array>
#include <cstdint>

namespace temsig {

/// Philox4x32-10 counter-based generator. Stateless per block: output is a
/// pure function of (seed, stream, counter), so streams are reproducible,
/// splittable, and safe to sample from any thread in any order.
///
/// The 64-bit stream id occupies the upper half of the 128-bit counter and
/// the 64-bit seed forms the key; parallel units derive their substream from
/// (seed, unit index).
class Philox4x32 {
 public:
  Philox4x32(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Random-access N(0,1) / U(0,1) draws indexed by a 64-bit position.
/// normal(i) uses one Philox block per pair of variates (Box-Muller).
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream) : engine_(seed, stream) {}

  double normal(std::uint64_t i) const;

  /// Uniform double in (0,1), 53-bit resolution.
  double uniform(std::uint64_t i) const;

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t i, std::uint64_t n) const;

 private:
  Philox4x32 engine_;
};

}  // namespace temsig

#endif
