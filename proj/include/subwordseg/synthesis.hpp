#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "subwordseg/components.hpp"
#include "subwordseg/groundtruth.hpp"
#include "subwordseg/raster.hpp"

namespace subwordseg {

struct Point {
  int x = 0, y = 0;
  bool operator==(const Point&) const = default;
};

/// One sub-word: a thick x-monotone polyline drawn with a square brush of side
/// `thickness` centred on each path sample. A gap erases the stroke's pixels
/// in columns [gap_x, gap_x + gap_width).
struct Stroke {
  std::vector<Point> path;
  int thickness = 3;
  int gap_x = 0;
  int gap_width = 0;
};

struct WordLayout {
  int width = 256;
  int height = 96;
  std::vector<Stroke> strokes;
  std::vector<Box> dots;  // filled rectangles
  std::uint64_t noise_seed = 0;
};

/// Stroke pixels, optionally before the gap is cut.
BinaryImage stroke_mask(const Stroke& s, int width, int height, bool with_gap = true);

/// Foreground of the whole word: every stroke (gaps cut) plus every dot.
BinaryImage ink_mask(const WordLayout& layout);

/// Greyscale rendering: ink in 24..64, background in 224..240, per-pixel
/// noise drawn from noise_seed.
GrayImage render(const WordLayout& layout);

/// Truth boxes are the pre-gap stroke extents; dots are excluded.
WordTruth truth_of(const WordLayout& layout, std::string id);

struct SynthParams {
  int subword_count = 3;             // 1..8
  int stroke_thickness = 3;          // 2..8
  std::vector<int> gap_widths;       // gap_widths[i] cuts sub-word i; 0 = no gap; each 0..20
  int dot_count = 0;                 // 0..4, every dot smaller than 30 px
  int canvas_width = 256;
  int canvas_height = 96;
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr int kSubwordSeparation = 12;  // min columns between sub-word spans
inline constexpr int kDotClearance = 12;       // min Chebyshev distance from dots to other ink
inline constexpr int kCanvasMargin = 8;
inline constexpr int kMinPiece = 8;            // min stroke length on each side of a gap

struct SynthWord {
  GrayImage image;
  WordTruth truth;
  WordLayout layout;
};

/// Deterministic in `p` (seed included). Throws ParamError when the canvas
/// cannot hold the requested sub-words, gaps or dots.
SynthWord synth_word(const SynthParams& p, std::string id = "S0001");

/// Minimum canvas width that fits `subwords` sub-words each able to carry a
/// gap of `max_gap` columns.
int canvas_width_for(int subwords, int max_gap, int thickness = 3);

struct CorpusSpec {
  std::size_t words = 0;
  std::uint64_t seed = 0;
  int subwords_min = 1;
  int subwords_max = 8;
  std::optional<std::size_t> subwords_total;  // shape the corpus to this many sub-words
  int gap_min = 0;  // per sub-word gap width drawn from [gap_min, gap_max]
  int gap_max = 0;
  int dots_max = 0;  // per word dot count drawn from [0, dots_max]
  int thickness = 3;
  int canvas_height = 96;
  std::optional<int> canvas_width;  // unset: canvas_width_for(...) with a 256 floor

  void validate() const;
};

struct CorpusItem {
  std::string id;
  SynthParams params;
};

/// Per-word parameters. Word i draws from its own stream derived from
/// (seed, i), so items do not depend on each other.
std::vector<CorpusItem> plan_corpus(const CorpusSpec& spec);

std::string corpus_id(std::size_t index);

/// Seed of word `index`'s stream (splitmix64 of the corpus seed and index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Uniform integer in [lo, hi] from a 64-bit engine, independent of the
/// standard library's distribution implementation.
int uniform_int(std::mt19937_64& rng, int lo, int hi);

}  // namespace subwordseg
