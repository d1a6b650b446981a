#include "subwordseg/skeleton.hpp"

#include <array>
#include <utility>
#include <vector>

#include "subwordseg/neighborhood.hpp"

namespace subwordseg {

namespace {

// Deletion tables indexed by neighbour mask, one per sub-pass.
struct ThinningTables {
  std::array<bool, 256> first{};
  std::array<bool, 256> second{};
};

const ThinningTables& tables() {
  static const ThinningTables t = [] {
    ThinningTables out;
    for (int m = 0; m < 256; ++m) {
      auto p = [m](int k) { return (m >> (k - 2)) & 1; };  // P2..P9
      int b = 0, a = 0;
      for (int k = 2; k <= 9; ++k) {
        b += p(k);
        const int next = k == 9 ? 2 : k + 1;
        if (p(k) == 0 && p(next) == 1) ++a;
      }
      const bool common = b >= 2 && b <= 6 && a == 1;
      out.first[m] = common && p(2) * p(4) * p(6) == 0 && p(4) * p(6) * p(8) == 0;
      out.second[m] = common && p(2) * p(4) * p(8) == 0 && p(2) * p(6) * p(8) == 0;
    }
    return out;
  }();
  return t;
}

std::size_t sub_pass(BinaryImage& img, const std::array<bool, 256>& deletable) {
  std::vector<std::pair<int, int>> doomed;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (img.at(x, y) && deletable[neighbor_mask(img, x, y)]) doomed.emplace_back(x, y);
  for (const auto& [x, y] : doomed) img.set(x, y, 0);
  return doomed.size();
}

}  // namespace

BinaryImage thin_zhang_suen(const BinaryImage& img) {
  const auto& t = tables();
  BinaryImage out = img;
  const int cap = img.width() + img.height();
  for (int iter = 0; iter < cap; ++iter) {
    const std::size_t removed = sub_pass(out, t.first) + sub_pass(out, t.second);
    if (removed == 0) break;
  }
  return out;
}

}  // namespace subwordseg
