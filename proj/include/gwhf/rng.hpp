#pragma once

#include <array>
#include <cstdint>

#include "gwhf/common.hpp"

namespace gwhf {

inline constexpr std::uint64_t default_seed = 0xC0FFEE;

using PhiloxBlock = std::array<std::uint32_t, 4>;

/// Philox4x32-10 block function (Salmon et al.), counter-based.
PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::array<std::uint32_t, 2> key);

/// Independent stream addressed by (seed, realization, component); every
/// draw is a pure function of its index, so sample order never matters.
struct Stream {
  std::uint64_t seed = default_seed;
  std::uint32_t realization = 0;
  std::uint32_t component = 0;

  PhiloxBlock block(std::int64_t index) const;
  /// Two uniforms in (0,1) with 53-bit resolution.
  std::array<double, 2> uniforms(std::int64_t index) const;
  /// Standard circular complex Gaussian, E|N|^2 = 1.
  Complex circular_normal(std::int64_t index) const;
};

}  // namespace gwhf
