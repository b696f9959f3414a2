#include "temsig/rng.hpp"

#include <cmath>
#include <numbers>

namespace temsig {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> round_once(std::array<std::uint32_t, 4> c, std::uint32_t k0,
                                               std::uint32_t k1) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, c[0], hi0, lo0);
  mulhilo(kPhiloxM1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::uint64_t counter) const {
  std::array<std::uint32_t, 4> c = {
      static_cast<std::uint32_t>(counter),
      static_cast<std::uint32_t>(counter >> 32),
      static_cast<std::uint32_t>(stream_),
      static_cast<std::uint32_t>(stream_ >> 32),
  };
  std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
  c = round_once(c, k0, k1);
  for (int r = 1; r < 10; ++r) {
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
    c = round_once(c, k0, k1);
  }
  return c;
}

double GaussianStream::normal(std::uint64_t i) const {
  const auto b = engine_.block(i >> 1);
  const double u1 = (static_cast<double>(b[0]) + 0.5) * 0x1p-32;
  const double u2 = (static_cast<double>(b[1]) + 0.5) * 0x1p-32;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (i & 1) ? radius * std::sin(angle) : radius * std::cos(angle);
}

double GaussianStream::uniform(std::uint64_t i) const {
  const auto b = engine_.block(i);
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(b[0]) << 32 | b[1]) >> 11;  // 53 bits
  return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

std::uint64_t GaussianStream::uniform_index(std::uint64_t i, std::uint64_t n) const {
  const auto b = engine_.block(i);
  const std::uint64_t bits = static_cast<std::uint64_t>(b[2]) << 32 | b[3];
  return bits % n;
}

}  // namespace temsig
