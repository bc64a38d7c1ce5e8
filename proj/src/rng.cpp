#include "gwhf/rng.hpp"

#include <cmath>

namespace gwhf {

namespace {

constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t a, std::uint32_t b) {
  std::uint64_t m = (static_cast<std::uint64_t>(a >> 5) << 26) | (b >> 6);
  return (static_cast<double>(m) + 0.5) * 0x1p-53;
}

}  // namespace

PhiloxBlock philox4x32_10(PhiloxBlock c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += W0;
      k[1] += W1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(M0, c[0], hi0, lo0);
    mulhilo(M1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

PhiloxBlock Stream::block(std::int64_t index) const {
  auto u = static_cast<std::uint64_t>(index);
  return philox4x32_10({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(u >> 32),
                        realization, component},
                       {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
}

std::array<double, 2> Stream::uniforms(std::int64_t index) const {
  auto b = block(index);
  return {to_unit(b[0], b[1]), to_unit(b[2], b[3])};
}

Complex Stream::circular_normal(std::int64_t index) const {
  auto u = uniforms(index);
  double r = std::sqrt(-std::log(u[0]));
  double th = 2 * pi * u[1];
  return {r * std::cos(th), r * std::sin(th)};
}

}  // namespace gwhf
