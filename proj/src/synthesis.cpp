#include "subwordseg/synthesis.hpp"

#include <algorithm>
#include <cstdio>

#include "subwordseg/error.hpp"

namespace subwordseg {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void stamp(BinaryImage& img, int cx, int cy, int thickness) {
  const int r = (thickness - 1) / 2;
  for (int y = cy - r; y < cy - r + thickness; ++y)
    for (int x = cx - r; x < cx - r + thickness; ++x)
      if (img.contains(x, y)) img.set(x, y, 1);
}

// Smallest stroke length (in columns) able to carry a gap of `gap` columns.
int min_stroke_length(int gap) { return std::max(16, gap + 2 * kMinPiece); }

bool ink_within(const BinaryImage& ink, const Box& b, int clearance) {
  for (int y = b.ay - clearance; y <= b.by + clearance; ++y)
    for (int x = b.ax - clearance; x <= b.bx + clearance; ++x)
      if (ink.at_or_zero(x, y)) return true;
  return false;
}

}  // namespace

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  if (hi < lo) std::swap(lo, hi);
  const std::uint64_t range = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
  // Lemire's nearly-divisionless bounded draw.
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t floor = (0 - range) % range;
    while (low < floor) {
      m = static_cast<unsigned __int128>(rng()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return lo + static_cast<int>(m >> 64);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string corpus_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "S%04zu", index + 1);
  return buf;
}

BinaryImage stroke_mask(const Stroke& s, int width, int height, bool with_gap) {
  BinaryImage img(width, height);
  if (s.path.size() == 1) stamp(img, s.path[0].x, s.path[0].y, s.thickness);
  for (std::size_t i = 1; i < s.path.size(); ++i) {
    const Point p = s.path[i - 1], q = s.path[i];
    const std::int64_t dx = q.x - p.x, dy = q.y - p.y;
    if (dx <= 0) {
      stamp(img, q.x, q.y, s.thickness);
      continue;
    }
    for (int x = p.x; x <= q.x; ++x) {
      const auto y = p.y + floor_div(2 * (x - p.x) * dy + dx, 2 * dx);
      stamp(img, x, static_cast<int>(y), s.thickness);
    }
  }
  if (with_gap && s.gap_width > 0) {
    for (int y = 0; y < height; ++y)
      for (int x = std::max(0, s.gap_x); x < std::min(width, s.gap_x + s.gap_width); ++x)
        img.set(x, y, 0);
  }
  return img;
}

BinaryImage ink_mask(const WordLayout& layout) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(layout.width) * layout.height, 0);
  for (const auto& s : layout.strokes) {
    const auto m = stroke_mask(s, layout.width, layout.height);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] |= m.bits()[i];
  }
  BinaryImage out(layout.width, layout.height, std::move(bits));
  for (const auto& d : layout.dots)
    for (int y = d.ay; y <= d.by; ++y)
      for (int x = d.ax; x <= d.bx; ++x)
        if (out.contains(x, y)) out.set(x, y, 1);
  return out;
}

GrayImage render(const WordLayout& layout) {
  const BinaryImage ink = ink_mask(layout);
  std::mt19937_64 rng(layout.noise_seed);
  std::vector<std::uint8_t> data(ink.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = static_cast<std::uint8_t>(ink.bits()[i] ? uniform_int(rng, 24, 64)
                                                      : uniform_int(rng, 224, 240));
  }
  return GrayImage(layout.width, layout.height, std::move(data));
}

WordTruth truth_of(const WordLayout& layout, std::string id) {
  WordTruth t;
  t.id = std::move(id);
  for (const auto& s : layout.strokes) {
    const auto comps = label8(stroke_mask(s, layout.width, layout.height, false)).components;
    if (comps.empty()) continue;
    Box b = comps.front().box;
    for (const auto& c : comps) {
      b.ax = std::min(b.ax, c.box.ax);
      b.ay = std::min(b.ay, c.box.ay);
      b.bx = std::max(b.bx, c.box.bx);
      b.by = std::max(b.by, c.box.by);
    }
    t.subwords.push_back(b);
  }
  return t;
}

void SynthParams::validate() const {
  if (subword_count < 1 || subword_count > 8) throw ParamError("subword_count must be in 1..8");
  if (stroke_thickness < 2 || stroke_thickness > 8) throw ParamError("stroke_thickness must be in 2..8");
  if (static_cast<int>(gap_widths.size()) > subword_count) {
    throw ParamError("more gap widths than sub-words");
  }
  for (const int g : gap_widths) {
    if (g < 0 || g > 20) throw ParamError("gap widths must be in 0..20");
  }
  if (dot_count < 0 || dot_count > 4) throw ParamError("dot_count must be in 0..4");
  if (canvas_width < 32 || canvas_height < 48) throw ParamError("canvas must be at least 32x48");
}

int canvas_width_for(int subwords, int max_gap, int thickness) {
  const int span = std::max({40, min_stroke_length(max_gap) + 8, 4 * thickness});
  return 2 * kCanvasMargin + subwords * span + kSubwordSeparation * (subwords - 1);
}

SynthWord synth_word(const SynthParams& p, std::string id) {
  p.validate();
  const int n = p.subword_count;
  const int t = p.stroke_thickness;
  const int span =
      (p.canvas_width - 2 * kCanvasMargin - kSubwordSeparation * (n - 1)) / n;
  auto gap_of = [&](int i) {
    return i < static_cast<int>(p.gap_widths.size()) ? p.gap_widths[i] : 0;
  };
  for (int i = 0; i < n; ++i) {
    if (span < min_stroke_length(gap_of(i))) {
      throw ParamError("canvas " + std::to_string(p.canvas_width) + "px wide is too small for " +
                       std::to_string(n) + " sub-words");
    }
  }

  std::mt19937_64 rng(p.seed);
  WordLayout layout;
  layout.width = p.canvas_width;
  layout.height = p.canvas_height;

  const int r = (t - 1) / 2;
  const int band_lo = p.canvas_height * 3 / 8;
  const int band_hi = p.canvas_height * 5 / 8;
  for (int i = 0; i < n; ++i) {
    const int x0 = kCanvasMargin + i * (span + kSubwordSeparation);
    const int min_len = min_stroke_length(gap_of(i));
    const int len = uniform_int(rng, std::max(min_len, span * 6 / 10), span);
    const int cx_first = x0 + r;
    const int cx_last = x0 + len - 1 - (t - 1 - r);

    std::vector<int> xs = {cx_first, cx_last};
    const int inner = uniform_int(rng, 0, 2);
    for (int k = 0; k < inner && cx_last - cx_first > 2; ++k) {
      xs.push_back(uniform_int(rng, cx_first + 1, cx_last - 1));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    Stroke s;
    s.thickness = t;
    int y = uniform_int(rng, band_lo, band_hi);
    s.path.push_back({xs[0], y});
    for (std::size_t k = 1; k < xs.size(); ++k) {
      const int dx = xs[k] - xs[k - 1];
      const int rise = dx * 3 / 4;
      y = std::clamp(y + uniform_int(rng, -rise, rise), band_lo, band_hi);
      s.path.push_back({xs[k], y});
    }
    if (const int g = gap_of(i); g > 0) {
      s.gap_width = g;
      s.gap_x = uniform_int(rng, x0 + kMinPiece, x0 + len - 1 - kMinPiece - g + 1);
    }
    layout.strokes.push_back(std::move(s));
  }

  BinaryImage occupied = ink_mask(layout);
  const int word_right = layout.strokes.back().path.back().x + t;
  for (int d = 0; d < p.dot_count; ++d) {
    bool placed = false;
    for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
      const int w = uniform_int(rng, 2, 5);
      const int h = uniform_int(rng, 2, 5);
      const int ax = uniform_int(rng, kCanvasMargin, std::max(kCanvasMargin, word_right - w));
      const int ay = uniform_int(rng, 1, p.canvas_height - 1 - h);
      const Box dot{ax, ay, ax + w - 1, ay + h - 1};
      if (dot.bx >= p.canvas_width || ink_within(occupied, dot, kDotClearance)) continue;
      layout.dots.push_back(dot);
      for (int yy = dot.ay; yy <= dot.by; ++yy)
        for (int xx = dot.ax; xx <= dot.bx; ++xx) occupied.set(xx, yy, 1);
      placed = true;
    }
    if (!placed) throw ParamError("no room on the canvas for " + std::to_string(p.dot_count) + " dots");
  }
  layout.noise_seed = rng();

  SynthWord out{render(layout), truth_of(layout, std::move(id)), std::move(layout)};
  return out;
}

void CorpusSpec::validate() const {
  if (subwords_min < 1 || subwords_max > 8 || subwords_min > subwords_max) {
    throw ParamError("sub-word range must lie within 1..8");
  }
  if (gap_min < 0 || gap_max > 20 || gap_min > gap_max) throw ParamError("gap range must lie within 0..20");
  if (dots_max < 0 || dots_max > 4) throw ParamError("dots must be in 0..4");
  if (subwords_total) {
    if (*subwords_total < words * subwords_min || *subwords_total > words * subwords_max) {
      throw ParamError("sub-word total " + std::to_string(*subwords_total) +
                       " is not reachable with " + std::to_string(words) + " words");
    }
  }
  if (canvas_width && *canvas_width < 32) throw ParamError("canvas width must be at least 32");
  if (canvas_height < 48) throw ParamError("canvas height must be at least 48");
  if (thickness < 2 || thickness > 8) throw ParamError("stroke thickness must be in 2..8");
}

std::vector<CorpusItem> plan_corpus(const CorpusSpec& spec) {
  spec.validate();
  std::vector<int> counts;
  if (spec.subwords_total) {
    counts.assign(spec.words, spec.subwords_min);
    std::size_t remaining = *spec.subwords_total - spec.words * spec.subwords_min;
    std::mt19937_64 rng(derive_seed(~spec.seed, 0));
    while (remaining > 0) {
      auto& c = counts[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(spec.words) - 1))];
      if (c < spec.subwords_max) {
        ++c;
        --remaining;
      }
    }
  }

  std::vector<CorpusItem> items;
  items.reserve(spec.words);
  for (std::size_t i = 0; i < spec.words; ++i) {
    std::mt19937_64 rng(derive_seed(spec.seed, i));
    SynthParams p;
    p.subword_count = counts.empty() ? uniform_int(rng, spec.subwords_min, spec.subwords_max) : counts[i];
    p.stroke_thickness = spec.thickness;
    for (int k = 0; k < p.subword_count; ++k) p.gap_widths.push_back(uniform_int(rng, spec.gap_min, spec.gap_max));
    p.dot_count = uniform_int(rng, 0, spec.dots_max);
    p.canvas_height = spec.canvas_height;
    p.canvas_width = spec.canvas_width.value_or(
        std::max(256, canvas_width_for(p.subword_count, spec.gap_max, spec.thickness)));
    p.seed = rng();
    items.push_back({corpus_id(i), std::move(p)});
  }
  return items;
}

}  // namespace subwordseg
