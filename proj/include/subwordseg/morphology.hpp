#pragma once

#include "subwordseg/raster.hpp"

namespace subwordseg {

enum class BridgeRule {
  // A background pixel with exactly two foreground 8-neighbours is set.
  ExactlyTwo,
  // A background pixel is set when its foreground neighbours fall into two or
  // more groups that are not 8-connected to each other inside the 3x3 window.
  MatlabBridge,
};

struct CgsConfig {
  int dilate_iters = 4;
  int bridge_iters = 2;
  int majority_iters = 2;
  BridgeRule bridge_rule = BridgeRule::ExactlyTwo;

  void validate() const;
};

// All operators update synchronously (every output pixel is decided from the
// input image) and treat pixels outside the frame as background. None of them
// ever clears a foreground pixel.

/// 3x3 dilation.
BinaryImage dilate8(const BinaryImage& img);

BinaryImage bridge(const BinaryImage& img, BridgeRule rule = BridgeRule::ExactlyTwo);

/// Background pixels with five or more foreground 8-neighbours become foreground.
BinaryImage majority_fill(const BinaryImage& img);

/// Gap connection: dilate8, then bridge, then majority_fill, each repeated
/// the configured number of times.
BinaryImage connect_gaps(const BinaryImage& img, const CgsConfig& cfg = {});

}  // namespace subwordseg
