#include <doctest.h>

#include <random>
#include <string>

#include "subwordseg/error.hpp"
#include "subwordseg/raster.hpp"
#include "support/oracles.hpp"

using namespace subwordseg;

namespace {

Bytes bytes_of(const std::string& s) { return Bytes(s.begin(), s.end()); }

std::array<std::uint64_t, 256> bins_of(std::initializer_list<std::pair<int, std::uint64_t>> entries) {
  std::array<std::uint64_t, 256> b{};
  for (auto [v, n] : entries) b[v] = n;
  return b;
}

}  // namespace

TEST_CASE("load_pgm reads binary and ascii variants") {
  Bytes p5 = bytes_of("P5 2 1 255\n");
  p5.push_back(0x00);
  p5.push_back(0xFF);
  const GrayImage a = load_pgm(p5);
  CHECK(a.width() == 2);
  CHECK(a.height() == 1);
  CHECK(a.at(0, 0) == 0);
  CHECK(a.at(1, 0) == 255);

  const GrayImage b = load_pgm(bytes_of("P2 1 1 255\n128\n"));
  CHECK(b.width() == 1);
  CHECK(b.at(0, 0) == 128);

  const GrayImage c = load_pgm(bytes_of("P2\n# comment\n3 2\n255\n1 2 3\n4 5 6\n"));
  CHECK(c.at(2, 0) == 3);
  CHECK(c.at(0, 1) == 4);
}

TEST_CASE("load_pgm rescales samples when maxval is below 255") {
  const GrayImage img = load_pgm(bytes_of("P2 2 1 15\n0 15\n"));
  CHECK(img.at(0, 0) == 0);
  CHECK(img.at(1, 0) == 255);
}

TEST_CASE("load_pgm errors name the byte offset") {
  CHECK_THROWS_AS(load_pgm(bytes_of("P9 1 1 255\n0")), ParseError);
  CHECK_THROWS_AS(load_pgm(bytes_of("P5 1 1 65535\n\x01\x02")), ParseError);

  try {
    load_pgm(bytes_of("P5 4 1 255\n\x01\x02"));
    FAIL("expected truncation error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("truncated") != std::string::npos);
    CHECK(e.offset() == 13);
  }

  try {
    load_pgm(bytes_of("P2 2 1 255\n3 x"));
    FAIL("expected bad sample error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 13);
  }
}

TEST_CASE("load_pbm ascii and packed") {
  const BinaryImage a = load_pbm(bytes_of("P1 2 2\n1 0 0 1\n"));
  CHECK(std::vector<std::uint8_t>(a.bits().begin(), a.bits().end()) == std::vector<std::uint8_t>{1, 0, 0, 1});

  // Width 7: one payload byte per row, the trailing padding bit is ignored.
  Bytes p4 = bytes_of("P4 7 2\n");
  p4.push_back(0b10100011);  // last bit is padding
  p4.push_back(0b01000001);
  const BinaryImage b = load_pbm(p4);
  CHECK(b.at(0, 0) == 1);
  CHECK(b.at(1, 0) == 0);
  CHECK(b.at(2, 0) == 1);
  CHECK(b.at(6, 0) == 1);
  CHECK(b.at(1, 1) == 1);
  CHECK(b.at(6, 1) == 0);
  CHECK(b.count() == 4);

  const Bytes saved = save_pbm(b);
  CHECK(saved.size() == std::string("P4\n7 2\n").size() + 2);

  CHECK_THROWS_AS(load_pbm(bytes_of("P1 2 2\n1 0 1\n")), ParseError);
  CHECK_THROWS_AS(load_pbm(bytes_of("P4 9 1\n\xff")), ParseError);
  CHECK_THROWS_AS(load_pbm(bytes_of("P1 1 1\n2\n")), ParseError);
}

TEST_CASE("Netpbm round trips are identity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 23), h = 1 + static_cast<int>(rng() % 11);
    const BinaryImage bits = oracle::random_binary(rng, w, h, 0.4);
    CHECK(load_pbm(save_pbm(bits)) == bits);
    CHECK(load_pbm(save_pbm_ascii(bits)) == bits);

    std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h);
    for (auto& v : data) v = static_cast<std::uint8_t>(rng());
    const GrayImage gray(w, h, data);
    CHECK(load_pgm(save_pgm(gray)) == gray);
  }
  std::mt19937_64 r2(1);
  const BinaryImage seven_by_three = oracle::random_binary(r2, 7, 3, 0.5);
  CHECK(load_pbm(save_pbm(seven_by_three)) == seven_by_three);
}

TEST_CASE("histogram counts intensities") {
  const Histogram h = histogram(GrayImage(3, 1, {5, 5, 9}));
  CHECK(h.bins[5] == 2);
  CHECK(h.bins[9] == 1);
  CHECK(h.total == 3);

  CHECK(histogram(GrayImage(1, 1, {0})).bins[0] == 1);
  const Histogram u = histogram(GrayImage(4, 4, std::uint8_t{7}));
  CHECK(u.bins[7] == 16);
  CHECK(u.total == 16);
}

TEST_CASE("otsu_threshold examples") {
  // Degenerate: one occupied level returns that level.
  CHECK(otsu_threshold(Histogram::from_bins(bins_of({{7, 12}}))) == 7);

  const auto split = bins_of({{0, 5}, {255, 5}});
  CHECK(oracle::otsu_exhaustive(split) == 0);
  CHECK(otsu_threshold(Histogram::from_bins(split)) == 0);

  const auto uneven = bins_of({{10, 6}, {200, 4}});
  CHECK(oracle::otsu_exhaustive(uneven) == 10);
  CHECK(otsu_threshold(Histogram::from_bins(uneven)) == 10);

  CHECK_THROWS_WITH_AS(otsu_threshold(Histogram{}), "empty histogram", std::invalid_argument);
}

TEST_CASE("otsu_threshold matches the exhaustive oracle and is scale invariant") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    std::array<std::uint64_t, 256> bins{};
    const int occupied = 1 + static_cast<int>(rng() % 40);
    for (int k = 0; k < occupied; ++k) bins[rng() % 256] += 1 + rng() % 1000;
    const Histogram h = Histogram::from_bins(bins);
    const int t = otsu_threshold(h);
    REQUIRE(t == oracle::otsu_exhaustive(bins));

    std::array<std::uint64_t, 256> scaled{};
    const std::uint64_t factor = 1 + rng() % 97;
    for (int v = 0; v < 256; ++v) scaled[v] = bins[v] * factor;
    CHECK(otsu_threshold(Histogram::from_bins(scaled)) == t);
  }
}

TEST_CASE("binarize polarity: ink is dark") {
  const GrayImage img(3, 1, {0, 128, 255});
  const BinaryImage b = binarize(img, 128);
  CHECK(b.at(0, 0) == 1);
  CHECK(b.at(1, 0) == 1);
  CHECK(b.at(2, 0) == 0);
  CHECK(binarize(img, 255).count() == 3);
  CHECK(binarize(GrayImage(3, 1, {4, 9, 200}), 0).count() == 0);
  CHECK_THROWS(binarize(img, 256));
}

TEST_CASE("binarize foreground count is monotone in the threshold") {
  std::mt19937_64 rng(5);
  std::vector<std::uint8_t> data(40 * 30);
  for (auto& v : data) v = static_cast<std::uint8_t>(rng());
  const GrayImage img(40, 30, data);
  std::size_t prev = 0;
  for (int t = 0; t < 256; ++t) {
    const std::size_t n = binarize(img, t).count();
    CHECK(n >= prev);
    prev = n;
  }
  CHECK(prev == img.size());
}

TEST_CASE("images reject inconsistent construction") {
  CHECK_THROWS(GrayImage(0, 3));
  CHECK_THROWS(GrayImage(2, 2, std::vector<std::uint8_t>{1, 2, 3}));
  CHECK_THROWS(BinaryImage(2, 1, {0, 2}));
}
