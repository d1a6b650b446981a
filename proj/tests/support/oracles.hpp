#pragma once

// Test-only reference implementations. Nothing here calls into the library
// code paths it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <set>
#include <vector>

#include "subwordseg/raster.hpp"

namespace oracle {

using subwordseg::BinaryImage;

// BFS flood fill over 8-connectivity. Returns each component's sorted pixel
// indices, components ordered by their smallest index.
inline std::vector<std::vector<std::size_t>> flood_components(const BinaryImage& img) {
  const int w = img.width(), h = img.height();
  std::vector<char> seen(img.size(), 0);
  std::vector<std::vector<std::size_t>> out;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t start = static_cast<std::size_t>(y) * w + x;
      if (!img.at(x, y) || seen[start]) continue;
      std::vector<std::size_t> comp;
      std::deque<std::pair<int, int>> queue{{x, y}};
      seen[start] = 1;
      while (!queue.empty()) {
        const auto [cx, cy] = queue.front();
        queue.pop_front();
        comp.push_back(static_cast<std::size_t>(cy) * w + cx);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
            if (img.at(nx, ny) && !seen[ni]) {
              seen[ni] = 1;
              queue.emplace_back(nx, ny);
            }
          }
      }
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
  }
  return out;
}

inline std::size_t count_components(const BinaryImage& img) { return flood_components(img).size(); }

// Exhaustive Otsu: sigma_b^2 evaluated from its definition at every t in
// long double; the smallest t within a relative 1e-12 of the maximum wins.
inline int otsu_exhaustive(const std::array<std::uint64_t, 256>& bins) {
  long double n = 0;
  for (auto b : bins) n += b;
  std::array<long double, 256> sigma{};
  long double best = 0;
  int distinct = 0, only = 0;
  for (int v = 0; v < 256; ++v)
    if (bins[v]) {
      ++distinct;
      only = v;
    }
  if (distinct == 1) return only;
  for (int t = 0; t < 256; ++t) {
    long double n0 = 0, s0 = 0, n1 = 0, s1 = 0;
    for (int v = 0; v < 256; ++v) {
      if (v <= t) {
        n0 += bins[v];
        s0 += static_cast<long double>(bins[v]) * v;
      } else {
        n1 += bins[v];
        s1 += static_cast<long double>(bins[v]) * v;
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    const long double w0 = n0 / n, w1 = n1 / n, mu0 = s0 / n0, mu1 = s1 / n1;
    sigma[t] = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    best = std::max(best, sigma[t]);
  }
  for (int t = 0; t < 256; ++t)
    if (sigma[t] >= best * (1 - 1e-12L)) return t;
  return 0;
}

inline BinaryImage random_binary(std::mt19937_64& rng, int w, int h, double density) {
  std::bernoulli_distribution on(density);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h);
  for (auto& b : bits) b = on(rng) ? 1 : 0;
  return BinaryImage(w, h, std::move(bits));
}

// Random thick strokes: a few polylines drawn with a disc brush of radius
// 1..2 on an empty canvas.
inline BinaryImage random_strokes(std::mt19937_64& rng, int w, int h) {
  BinaryImage img(w, h);
  std::uniform_int_distribution<int> strokes(1, 4), vertices(2, 4), rx(4, w - 5), ry(4, h - 5), rad(1, 2);
  const int n = strokes(rng);
  for (int s = 0; s < n; ++s) {
    const int r = rad(rng);
    int px = rx(rng), py = ry(rng);
    const int nv = vertices(rng);
    for (int v = 1; v < nv; ++v) {
      const int qx = rx(rng), qy = ry(rng);
      const int steps = std::max(std::abs(qx - px), std::abs(qy - py)) * 2 + 1;
      for (int k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        const int cx = static_cast<int>(std::lround(px + t * (qx - px)));
        const int cy = static_cast<int>(std::lround(py + t * (qy - py)));
        for (int dy = -r; dy <= r; ++dy)
          for (int dx = -r; dx <= r; ++dx)
            if (dx * dx + dy * dy <= r * r && img.contains(cx + dx, cy + dy)) img.set(cx + dx, cy + dy, 1);
      }
      px = qx;
      py = qy;
    }
  }
  return img;
}

inline bool subset(const BinaryImage& a, const BinaryImage& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.bits()[i] && !b.bits()[i]) return false;
  return true;
}

inline BinaryImage unite(const BinaryImage& a, const BinaryImage& b) {
  std::vector<std::uint8_t> bits(a.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = a.bits()[i] | b.bits()[i];
  return BinaryImage(a.width(), a.height(), std::move(bits));
}

// 180-degree rotation: processing the rotated image visits pixels in reverse
// scan order relative to the original.
inline BinaryImage rotate180(const BinaryImage& img) {
  std::vector<std::uint8_t> bits(img.bits().rbegin(), img.bits().rend());
  return BinaryImage(img.width(), img.height(), std::move(bits));
}

inline BinaryImage from_rows(const std::vector<std::string>& rows) {
  const int h = static_cast<int>(rows.size()), w = static_cast<int>(rows[0].size());
  BinaryImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.set(x, y, rows[y][x] == '#' ? 1 : 0);
  return img;
}

inline void fill_rect(BinaryImage& img, int x0, int y0, int x1, int y1) {
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) img.set(x, y, 1);
}

}  // namespace oracle
