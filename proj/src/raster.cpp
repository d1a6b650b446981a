#include "subwordseg/raster.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "subwordseg/error.hpp"

namespace subwordseg {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("image dimensions must be at least 1x1, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

std::size_t area_of(int width, int height) {
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

// Cursor over a Netpbm byte stream. Header tokens are separated by whitespace
// and '#' starts a comment that runs to the end of the line.
class NetpbmReader {
 public:
  explicit NetpbmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }

  std::string magic() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') {
      throw ParseError("bad magic number", 0);
    }
    pos_ = 2;
    return {static_cast<char>(bytes_[0]), static_cast<char>(bytes_[1])};
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long number(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFul) throw ParseError(std::string(what) + " out of range", start);
      ++pos_;
    }
    if (pos_ == start) {
      throw ParseError(at_end() ? std::string("truncated data: expected ") + what
                                : std::string("expected ") + what,
                       start);
    }
    return value;
  }

  // P1 samples may be packed without separators ("0110").
  std::uint8_t ascii_bit() {
    skip_space_and_comments();
    if (at_end()) throw ParseError("truncated data: expected pixel", pos_);
    const auto c = bytes_[pos_];
    if (c != '0' && c != '1') throw ParseError("invalid P1 pixel", pos_);
    ++pos_;
    return c == '1' ? 1 : 0;
  }

  // Exactly one whitespace byte separates the header from a binary raster.
  void end_of_header() {
    if (at_end() || !std::isspace(bytes_[pos_])) {
      throw ParseError("expected single whitespace after header", pos_);
    }
    ++pos_;
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (bytes_.size() - pos_ < n) {
      throw ParseError("truncated data: need " + std::to_string(n) + " bytes, have " +
                           std::to_string(bytes_.size() - pos_),
                       bytes_.size());
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::pair<int, int> read_dims(NetpbmReader& in) {
  const std::size_t at = in.offset();
  const auto w = in.number("width");
  const auto h = in.number("height");
  if (w < 1 || h < 1 || w > 1u << 20 || h > 1u << 20) {
    throw ParseError("invalid dimensions " + std::to_string(w) + "x" + std::to_string(h), at);
  }
  return {static_cast<int>(w), static_cast<int>(h)};
}

Bytes header(const char* magic, int width, int height, int maxval) {
  std::string head = std::string(magic) + "\n" + std::to_string(width) + " " +
                     std::to_string(height) + "\n";
  if (maxval > 0) head += std::to_string(maxval) + "\n";
  return Bytes(head.begin(), head.end());
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(area_of(width, height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != area_of(width, height)) {
    throw std::invalid_argument("pixel count does not match dimensions");
  }
}

BinaryImage::BinaryImage(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  bits_.assign(area_of(width, height), 0);
}

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width, height);
  if (bits_.size() != area_of(width, height)) {
    throw std::invalid_argument("bit count does not match dimensions");
  }
  if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; })) {
    throw std::invalid_argument("binary image values must be 0 or 1");
  }
}

std::size_t BinaryImage::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Histogram Histogram::from_bins(const std::array<std::uint64_t, 256>& bins) {
  Histogram h;
  h.bins = bins;
  h.total = std::accumulate(bins.begin(), bins.end(), std::uint64_t{0});
  return h;
}

RgbImage::RgbImage(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(area_of(width, height), Rgb{255, 255, 255});
}

RgbImage::RgbImage(const GrayImage& gray) : RgbImage(gray.width(), gray.height()) {
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) {
      const auto v = gray.at(x, y);
      set(x, y, {v, v, v});
    }
}

RgbImage::RgbImage(const BinaryImage& bits) : RgbImage(bits.width(), bits.height()) {
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) {
      const std::uint8_t v = bits.at(x, y) ? 0 : 255;
      set(x, y, {v, v, v});
    }
}

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
  NetpbmReader in(bytes);
  const auto magic = in.magic();
  if (magic != "P2" && magic != "P5") throw ParseError("bad magic number '" + magic + "'", 0);
  const auto [w, h] = read_dims(in);
  const std::size_t maxval_at = in.offset();
  const auto maxval = in.number("maxval");
  if (maxval < 1 || maxval > 255) {
    throw ParseError("maxval must be in 1..255, got " + std::to_string(maxval), maxval_at);
  }

  std::vector<std::uint8_t> data(area_of(w, h));
  auto store = [&](std::size_t i, unsigned long v, std::size_t at) {
    if (v > maxval) throw ParseError("sample exceeds maxval", at);
    data[i] = static_cast<std::uint8_t>(maxval == 255 ? v : (v * 255 + maxval / 2) / maxval);
  };
  if (magic == "P5") {
    in.end_of_header();
    const std::size_t base = in.offset();
    const auto raw = in.take(data.size());
    for (std::size_t i = 0; i < raw.size(); ++i) store(i, raw[i], base + i);
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) {
      in.skip_space_and_comments();
      const std::size_t at = in.offset();
      store(i, in.number("pixel"), at);
    }
  }
  return GrayImage(w, h, std::move(data));
}

Bytes save_pgm(const GrayImage& img) {
  Bytes out = header("P5", img.width(), img.height(), 255);
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

BinaryImage load_pbm(std::span<const std::uint8_t> bytes) {
  NetpbmReader in(bytes);
  const auto magic = in.magic();
  if (magic != "P1" && magic != "P4") throw ParseError("bad magic number '" + magic + "'", 0);
  const auto [w, h] = read_dims(in);

  std::vector<std::uint8_t> bits(area_of(w, h));
  if (magic == "P4") {
    in.end_of_header();
    const std::size_t stride = (static_cast<std::size_t>(w) + 7) / 8;
    const auto raw = in.take(stride * static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) {
      const auto row = raw.subspan(static_cast<std::size_t>(y) * stride, stride);
      for (int x = 0; x < w; ++x) {
        bits[static_cast<std::size_t>(y) * w + x] = (row[x / 8] >> (7 - x % 8)) & 1;
      }
    }
  } else {
    for (auto& b : bits) b = in.ascii_bit();
  }
  return BinaryImage(w, h, std::move(bits));
}

Bytes save_pbm(const BinaryImage& img) {
  Bytes out = header("P4", img.width(), img.height(), 0);
  const std::size_t stride = (static_cast<std::size_t>(img.width()) + 7) / 8;
  for (int y = 0; y < img.height(); ++y) {
    Bytes row(stride, 0);
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y)) row[x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
    }
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

Bytes save_pbm_ascii(const BinaryImage& img) {
  Bytes out = header("P1", img.width(), img.height(), 0);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (x > 0) out.push_back(' ');
      out.push_back(img.at(x, y) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

Bytes save_ppm(const RgbImage& img) {
  Bytes out = header("P6", img.width(), img.height(), 255);
  out.reserve(out.size() + area_of(img.width(), img.height()) * 3);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const auto c = img.at(x, y);
      out.push_back(c.r);
      out.push_back(c.g);
      out.push_back(c.b);
    }
  return out;
}

Histogram histogram(const GrayImage& img) {
  Histogram h;
  for (const auto v : img.data()) ++h.bins[v];
  h.total = img.size();
  return h;
}

int otsu_threshold(const Histogram& h) {
  using boost::multiprecision::cpp_int;

  std::uint64_t total = 0;
  cpp_int total_sum = 0;
  int occupied = 0, only_level = 0;
  for (int v = 0; v < 256; ++v) {
    total += h.bins[v];
    total_sum += cpp_int(h.bins[v]) * v;
    if (h.bins[v] > 0) {
      ++occupied;
      only_level = v;
    }
  }
  if (total == 0) throw std::invalid_argument("empty histogram");
  if (occupied == 1) return only_level;

  // sigma_b^2(t) = (s0*n1 - s1*n0)^2 / (N^2 * n0 * n1). N^2 is common to every
  // t, so candidates are compared as exact fractions num/den.
  cpp_int best_num = 0, best_den = 1;
  int best_t = 0;
  std::uint64_t n0 = 0;
  cpp_int s0 = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += h.bins[t];
    s0 += cpp_int(h.bins[t]) * t;
    const std::uint64_t n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const cpp_int s1 = total_sum - s0;
    const cpp_int diff = s0 * n1 - s1 * n0;
    const cpp_int num = diff * diff;
    const cpp_int den = cpp_int(n0) * n1;
    if (num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best_t = t;
    }
  }
  return best_t;
}

BinaryImage binarize(const GrayImage& img, int t) {
  if (t < 0 || t > 255) throw std::invalid_argument("threshold must be in 0..255");
  std::vector<std::uint8_t> bits(img.size());
  std::transform(img.data().begin(), img.data().end(), bits.begin(),
                 [t](std::uint8_t v) { return static_cast<std::uint8_t>(v <= t); });
  return BinaryImage(img.width(), img.height(), std::move(bits));
}

}  // namespace subwordseg
