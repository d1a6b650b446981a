#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace subwordseg {

using Bytes = std::vector<std::uint8_t>;

/// 8-bit greyscale raster, row-major, x to the right and y downward.
class GrayImage {
 public:
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
  void set(int x, int y, std::uint8_t v) { data_[index(x, y)] = v; }

  std::span<const std::uint8_t> data() const noexcept { return data_; }

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

/// Bilevel raster. 1 = foreground ink, 0 = background.
class BinaryImage {
 public:
  BinaryImage(int width, int height);
  BinaryImage(int width, int height, std::vector<std::uint8_t> bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::uint8_t at(int x, int y) const { return bits_[index(x, y)]; }
  // Out-of-bounds reads as background.
  std::uint8_t at_or_zero(int x, int y) const noexcept {
    return contains(x, y) ? bits_[index(x, y)] : 0;
  }
  void set(int x, int y, std::uint8_t v) { bits_[index(x, y)] = v ? 1 : 0; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::size_t count() const noexcept;

  bool operator==(const BinaryImage&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

struct Histogram {
  std::array<std::uint64_t, 256> bins{};
  std::uint64_t total = 0;

  static Histogram from_bins(const std::array<std::uint64_t, 256>& bins);
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

/// 24-bit colour raster; only used for annotated output.
class RgbImage {
 public:
  RgbImage(int width, int height);
  explicit RgbImage(const GrayImage& gray);
  explicit RgbImage(const BinaryImage& bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Rgb at(int x, int y) const { return pixels_[index(x, y)]; }
  void set(int x, int y, Rgb c) { pixels_[index(x, y)] = c; }

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

// Netpbm codecs. Loaders accept both the ASCII (P1/P2) and binary (P4/P5)
// variants; savers emit the binary variant. Errors throw ParseError.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);
Bytes save_pgm(const GrayImage& img);

BinaryImage load_pbm(std::span<const std::uint8_t> bytes);
Bytes save_pbm(const BinaryImage& img);
Bytes save_pbm_ascii(const BinaryImage& img);

Bytes save_ppm(const RgbImage& img);

Histogram histogram(const GrayImage& img);

/// Smallest threshold maximising between-class variance, class 0 being
/// intensities <= t. When only one intensity is occupied the variance is zero
/// everywhere and that intensity is returned. Throws std::invalid_argument on
/// an empty histogram.
int otsu_threshold(const Histogram& h);

/// Ink is dark: bit = 1 iff intensity <= t.
BinaryImage binarize(const GrayImage& img, int t);

}  // namespace subwordseg
