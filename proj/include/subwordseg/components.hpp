#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "subwordseg/raster.hpp"

namespace subwordseg {

/// Axis-aligned box with inclusive corners: (ax, ay) upper-left, (bx, by) bottom-right.
struct Box {
  int ax = 0, ay = 0, bx = 0, by = 0;

  int width() const noexcept { return bx - ax + 1; }
  int height() const noexcept { return by - ay + 1; }
  std::int64_t area() const noexcept { return std::int64_t{width()} * height(); }
  bool valid() const noexcept { return ax <= bx && ay <= by; }
  bool contains(int x, int y) const noexcept { return x >= ax && x <= bx && y >= ay && y <= by; }
  bool contains(const Box& o) const noexcept {
    return o.ax >= ax && o.bx <= bx && o.ay >= ay && o.by <= by;
  }

  bool operator==(const Box&) const = default;
};

struct Component {
  std::uint32_t label = 0;
  std::size_t area = 0;
  Box box;

  bool operator==(const Component&) const = default;
};

struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> labels;  // 0 = background, otherwise 1..K

  std::uint32_t at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

struct Labeling {
  LabelMap map;
  std::vector<Component> components;  // components[i].label == i + 1
};

/// Two-pass union-find labelling over 8-connectivity. Labels are dense and
/// numbered in order of first encounter in a raster scan.
Labeling label8(const BinaryImage& img);

struct FilterResult {
  std::vector<Component> kept;
  std::vector<Component> removed;
};

/// Splits components by area: removed = area < min_area. Order is preserved.
FilterResult filter_small(std::span<const Component> comps, std::size_t min_area);

/// Same split, measuring component i by sizes[i] instead of its area.
FilterResult filter_small(std::span<const Component> comps, std::size_t min_area,
                          std::span<const std::size_t> sizes);

/// Per-label count of `ink` foreground pixels; element i belongs to label i + 1.
/// Used to measure components of a grown image by the ink they were grown from.
std::vector<std::size_t> ink_areas(const Labeling& labeling, const BinaryImage& ink);

}  // namespace subwordseg
