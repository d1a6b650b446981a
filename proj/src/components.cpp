#include "subwordseg/components.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace subwordseg {

namespace {

class DisjointSets {
 public:
  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root wins so the representative is the earliest provisional label.
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent_[b] = a;
    else parent_[a] = b;
  }

  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

Labeling label8(const BinaryImage& img) {
  const int w = img.width(), h = img.height();
  std::vector<std::uint32_t> provisional(img.size(), 0);
  auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };

  DisjointSets sets;
  sets.make();  // slot 0 is background

  // First pass: look at the already-visited half of the neighbourhood (W, NW, N, NE).
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!img.at(x, y)) continue;
      std::uint32_t label = 0;
      const int nx[4] = {x - 1, x - 1, x, x + 1};
      const int ny[4] = {y, y - 1, y - 1, y - 1};
      for (int k = 0; k < 4; ++k) {
        if (!img.contains(nx[k], ny[k])) continue;
        const std::uint32_t n = provisional[idx(nx[k], ny[k])];
        if (n == 0) continue;
        if (label == 0) label = n;
        else sets.unite(label, n);
      }
      provisional[idx(x, y)] = label == 0 ? sets.make() : label;
    }
  }

  // Second pass: resolve roots and renumber densely in raster order of first appearance.
  std::vector<std::uint32_t> final_label(sets.size(), 0);
  Labeling out;
  out.map.width = w;
  out.map.height = h;
  out.map.labels.assign(img.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint32_t p = provisional[idx(x, y)];
      if (p == 0) continue;
      const std::uint32_t root = sets.find(p);
      std::uint32_t& lab = final_label[root];
      if (lab == 0) {
        lab = static_cast<std::uint32_t>(out.components.size() + 1);
        out.components.push_back({lab, 0, Box{x, y, x, y}});
      }
      out.map.labels[idx(x, y)] = lab;
      Component& c = out.components[lab - 1];
      ++c.area;
      c.box.ax = std::min(c.box.ax, x);
      c.box.bx = std::max(c.box.bx, x);
      c.box.ay = std::min(c.box.ay, y);
      c.box.by = std::max(c.box.by, y);
    }
  }
  return out;
}

FilterResult filter_small(std::span<const Component> comps, std::size_t min_area) {
  FilterResult out;
  for (const auto& c : comps) (c.area < min_area ? out.removed : out.kept).push_back(c);
  return out;
}

FilterResult filter_small(std::span<const Component> comps, std::size_t min_area,
                          std::span<const std::size_t> sizes) {
  if (sizes.size() != comps.size()) {
    throw std::invalid_argument("filter_small: one size per component required");
  }
  FilterResult out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    (sizes[i] < min_area ? out.removed : out.kept).push_back(comps[i]);
  }
  return out;
}

std::vector<std::size_t> ink_areas(const Labeling& labeling, const BinaryImage& ink) {
  if (ink.width() != labeling.map.width || ink.height() != labeling.map.height) {
    throw std::invalid_argument("ink_areas: image size does not match label map");
  }
  std::vector<std::size_t> sizes(labeling.components.size(), 0);
  const auto bits = ink.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const std::uint32_t lab = labeling.map.labels[i];
    if (lab != 0 && bits[i]) ++sizes[lab - 1];
  }
  return sizes;
}

}  // namespace subwordseg
