#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subwordseg/components.hpp"
#include "subwordseg/morphology.hpp"
#include "subwordseg/raster.hpp"

namespace subwordseg {

struct PipelineConfig {
  std::optional<int> threshold;         // unset: Otsu
  std::optional<CgsConfig> cgs = CgsConfig{};  // unset: gap connection disabled
  std::size_t min_area = 30;
  bool apply_skeleton = false;

  void validate() const;
};

struct StageStats {
  std::string stage;
  std::size_t foreground = 0;
  std::size_t components = 0;

  bool operator==(const StageStats&) const = default;
};

struct SegmentationResult {
  std::string image_id;
  std::vector<Box> boxes;          // right to left: descending ax, then ascending ay
  std::size_t removed_count = 0;
  std::vector<Box> removed_boxes;  // same ordering as boxes
  std::vector<StageStats> stage_trace;

  bool operator==(const SegmentationResult&) const = default;
};

/// Binarise (Otsu unless overridden), connect gaps, optionally thin, label,
/// drop diacritics and box the remaining sub-words.
///
/// A component's size for the diacritic filter is the number of binarised ink
/// pixels inside the gap-connected region it belongs to. Without gap
/// connection this is the component's own area; with it, dilation does not
/// inflate a dot past the threshold.
///
/// An image with a single grey level carries no ink/background split and
/// yields no foreground when the threshold is automatic.
SegmentationResult segment_word(const GrayImage& img, const PipelineConfig& cfg = {},
                                std::string image_id = {});

/// Same pipeline starting from an already binarised image.
SegmentationResult segment_binary(const BinaryImage& ink, const PipelineConfig& cfg = {},
                                  std::string image_id = {});

enum class CountClass { Exact, Over, Under };

CountClass classify_count(std::size_t pred_count, std::size_t truth_count);

std::string_view to_string(CountClass c);

/// {"id", "boxes":[{ax,ay,bx,by}], "removed":[...], "trace":[...]}
std::string to_json(const SegmentationResult& r);
SegmentationResult segmentation_from_json(std::string_view text);

}  // namespace subwordseg
