#pragma once

#include <array>
#include <bit>
#include <cstdint>

#include "subwordseg/raster.hpp"

namespace subwordseg {

// Clockwise ring starting north: P2=N, P3=NE, P4=E, P5=SE, P6=S, P7=SW, P8=W, P9=NW.
// Bit i of a neighbour mask holds P(i+2).
inline constexpr std::array<int, 8> kRingDx = {0, 1, 1, 1, 0, -1, -1, -1};
inline constexpr std::array<int, 8> kRingDy = {-1, -1, 0, 1, 1, 1, 0, -1};

inline std::uint8_t neighbor_mask(const BinaryImage& img, int x, int y) noexcept {
  std::uint8_t mask = 0;
  for (int i = 0; i < 8; ++i) {
    if (img.at_or_zero(x + kRingDx[i], y + kRingDy[i])) mask |= static_cast<std::uint8_t>(1u << i);
  }
  return mask;
}

inline int neighbor_count(std::uint8_t mask) noexcept { return std::popcount(mask); }

}  // namespace subwordseg
