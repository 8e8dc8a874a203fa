#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace hybridsort {

/// Reference element type. Geometry is keyed to the lane count, so wider
/// or unsigned element types only change kLanes.
using Element = std::int32_t;

/// Elements per 128-bit vector register.
inline constexpr std::size_t kLanes = 16 / sizeof(Element);

/// Padding value for partial blocks; sorts to the end.
inline constexpr Element kSentinel = std::numeric_limits<Element>::max();

constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n != 0 && (n & (n - 1)) == 0;
}

constexpr unsigned log2_exact(std::size_t n) noexcept {
  unsigned k = 0;
  while (n > 1) {
    n >>= 1;
    ++k;
  }
  return k;
}

}  // namespace hybridsort
