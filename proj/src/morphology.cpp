#include "subwordseg/morphology.hpp"

#include <array>
#include <vector>

#include "subwordseg/error.hpp"
#include "subwordseg/neighborhood.hpp"

namespace subwordseg {

namespace {

// Number of 8-connected groups formed by the set bits of a ring mask, where
// two ring positions touch when their offsets differ by at most 1 per axis.
int ring_groups(std::uint8_t mask) {
  int groups = 0;
  std::uint8_t seen = 0;
  for (int start = 0; start < 8; ++start) {
    if (!(mask >> start & 1) || (seen >> start & 1)) continue;
    ++groups;
    std::array<int, 8> stack{};
    int top = 0;
    stack[top++] = start;
    seen |= static_cast<std::uint8_t>(1u << start);
    while (top > 0) {
      const int i = stack[--top];
      for (int j = 0; j < 8; ++j) {
        if (!(mask >> j & 1) || (seen >> j & 1)) continue;
        const int dx = kRingDx[i] - kRingDx[j];
        const int dy = kRingDy[i] - kRingDy[j];
        if (dx >= -1 && dx <= 1 && dy >= -1 && dy <= 1) {
          seen |= static_cast<std::uint8_t>(1u << j);
          stack[top++] = j;
        }
      }
    }
  }
  return groups;
}

const std::array<bool, 256>& matlab_bridge_table() {
  static const std::array<bool, 256> table = [] {
    std::array<bool, 256> t{};
    for (int m = 0; m < 256; ++m) t[m] = ring_groups(static_cast<std::uint8_t>(m)) >= 2;
    return t;
  }();
  return table;
}

// Applies `rule(mask)` to every background pixel of `img`; foreground is kept.
template <typename Rule>
BinaryImage grow_background(const BinaryImage& img, Rule rule) {
  BinaryImage out = img;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y)) continue;
      if (rule(neighbor_mask(img, x, y))) out.set(x, y, 1);
    }
  }
  return out;
}

}  // namespace

void CgsConfig::validate() const {
  if (dilate_iters < 0 || bridge_iters < 0 || majority_iters < 0) {
    throw ParamError("CGs iteration counts must be non-negative");
  }
}

BinaryImage dilate8(const BinaryImage& img) {
  const int w = img.width(), h = img.height();
  // Separable: horizontal 3-max then vertical 3-max.
  BinaryImage rows(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      rows.set(x, y, img.at_or_zero(x - 1, y) | img.at(x, y) | img.at_or_zero(x + 1, y));
  BinaryImage out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out.set(x, y, rows.at_or_zero(x, y - 1) | rows.at(x, y) | rows.at_or_zero(x, y + 1));
  return out;
}

BinaryImage bridge(const BinaryImage& img, BridgeRule rule) {
  if (rule == BridgeRule::MatlabBridge) {
    const auto& table = matlab_bridge_table();
    return grow_background(img, [&](std::uint8_t m) { return table[m]; });
  }
  return grow_background(img, [](std::uint8_t m) { return neighbor_count(m) == 2; });
}

BinaryImage majority_fill(const BinaryImage& img) {
  return grow_background(img, [](std::uint8_t m) { return neighbor_count(m) >= 5; });
}

BinaryImage connect_gaps(const BinaryImage& img, const CgsConfig& cfg) {
  cfg.validate();
  BinaryImage out = img;
  for (int i = 0; i < cfg.dilate_iters; ++i) out = dilate8(out);
  for (int i = 0; i < cfg.bridge_iters; ++i) out = bridge(out, cfg.bridge_rule);
  for (int i = 0; i < cfg.majority_iters; ++i) out = majority_fill(out);
  return out;
}

}  // namespace subwordseg
