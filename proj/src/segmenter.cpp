#include "subwordseg/segmenter.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "subwordseg/error.hpp"
#include "subwordseg/skeleton.hpp"

namespace subwordseg {

using json = nlohmann::json;

namespace {

StageStats stats_of(std::string stage, const BinaryImage& img) {
  return {std::move(stage), img.count(), label8(img).components.size()};
}

void sort_right_to_left(std::vector<Box>& boxes) {
  std::stable_sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
    if (a.ax != b.ax) return a.ax > b.ax;
    return a.ay < b.ay;
  });
}

std::vector<Box> boxes_of(const std::vector<Component>& comps) {
  std::vector<Box> out;
  out.reserve(comps.size());
  for (const auto& c : comps) out.push_back(c.box);
  sort_right_to_left(out);
  return out;
}

json box_json(const Box& b) { return {{"ax", b.ax}, {"ay", b.ay}, {"bx", b.bx}, {"by", b.by}}; }

Box box_from(const json& j) {
  Box b{j.at("ax").get<int>(), j.at("ay").get<int>(), j.at("bx").get<int>(), j.at("by").get<int>()};
  if (!b.valid()) throw std::invalid_argument("box corners out of order");
  return b;
}

}  // namespace

void PipelineConfig::validate() const {
  if (threshold && (*threshold < 0 || *threshold > 255)) {
    throw ParamError("threshold must be in 0..255");
  }
  if (cgs) cgs->validate();
}

SegmentationResult segment_word(const GrayImage& img, const PipelineConfig& cfg,
                                std::string image_id) {
  cfg.validate();
  if (cfg.threshold) return segment_binary(binarize(img, *cfg.threshold), cfg, std::move(image_id));

  const Histogram h = histogram(img);
  const bool uniform =
      std::count_if(h.bins.begin(), h.bins.end(), [](std::uint64_t n) { return n > 0; }) == 1;
  if (uniform) return segment_binary(BinaryImage(img.width(), img.height()), cfg, std::move(image_id));
  return segment_binary(binarize(img, otsu_threshold(h)), cfg, std::move(image_id));
}

SegmentationResult segment_binary(const BinaryImage& ink, const PipelineConfig& cfg,
                                  std::string image_id) {
  cfg.validate();
  SegmentationResult result;
  result.image_id = std::move(image_id);
  result.stage_trace.push_back(stats_of("binarize", ink));

  BinaryImage connected = ink;
  if (cfg.cgs) {
    connected = connect_gaps(ink, *cfg.cgs);
    result.stage_trace.push_back(stats_of("connect_gaps", connected));
  }

  const Labeling regions = label8(connected);
  const std::vector<std::size_t> region_ink = ink_areas(regions, ink);

  std::vector<Component> comps;
  std::vector<std::size_t> sizes;
  if (cfg.apply_skeleton) {
    const BinaryImage thin = thin_zhang_suen(connected);
    const Labeling skel = label8(thin);
    // Each skeleton component lies inside exactly one gap-connected region.
    std::vector<std::size_t> size_of(skel.components.size(), 0);
    for (std::size_t i = 0; i < skel.map.labels.size(); ++i) {
      const auto s = skel.map.labels[i];
      if (s != 0) size_of[s - 1] = region_ink[regions.map.labels[i] - 1];
    }
    result.stage_trace.push_back({"skeleton", thin.count(), skel.components.size()});
    comps = skel.components;
    sizes = std::move(size_of);
  } else {
    comps = regions.components;
    sizes = region_ink;
  }

  const FilterResult filtered = filter_small(comps, cfg.min_area, sizes);
  const std::size_t kept_area =
      std::accumulate(filtered.kept.begin(), filtered.kept.end(), std::size_t{0},
                      [](std::size_t acc, const Component& c) { return acc + c.area; });
  result.stage_trace.push_back({"filter_small", kept_area, filtered.kept.size()});

  result.boxes = boxes_of(filtered.kept);
  result.removed_boxes = boxes_of(filtered.removed);
  result.removed_count = filtered.removed.size();
  return result;
}

CountClass classify_count(std::size_t pred_count, std::size_t truth_count) {
  if (pred_count < truth_count) return CountClass::Under;
  if (pred_count > truth_count) return CountClass::Over;
  return CountClass::Exact;
}

std::string_view to_string(CountClass c) {
  switch (c) {
    case CountClass::Exact: return "exact";
    case CountClass::Over: return "over";
    case CountClass::Under: return "under";
  }
  return "exact";
}

std::string to_json(const SegmentationResult& r) {
  json boxes = json::array(), removed = json::array(), trace = json::array();
  for (const auto& b : r.boxes) boxes.push_back(box_json(b));
  for (const auto& b : r.removed_boxes) removed.push_back(box_json(b));
  for (const auto& s : r.stage_trace) {
    trace.push_back({{"stage", s.stage}, {"foreground", s.foreground}, {"components", s.components}});
  }
  json j = {{"id", r.image_id}, {"boxes", boxes}, {"removed", removed}, {"trace", trace}};
  return j.dump(2) + "\n";
}

SegmentationResult segmentation_from_json(std::string_view text) {
  const json j = json::parse(text);
  SegmentationResult r;
  r.image_id = j.at("id").get<std::string>();
  for (const auto& b : j.at("boxes")) r.boxes.push_back(box_from(b));
  if (j.contains("removed")) {
    for (const auto& b : j.at("removed")) r.removed_boxes.push_back(box_from(b));
  }
  r.removed_count = r.removed_boxes.size();
  if (j.contains("trace")) {
    for (const auto& s : j.at("trace")) {
      r.stage_trace.push_back({s.at("stage").get<std::string>(), s.at("foreground").get<std::size_t>(),
                               s.at("components").get<std::size_t>()});
    }
  }
  return r;
}

}  // namespace subwordseg
