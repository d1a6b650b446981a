#pragma once

#include "subwordseg/raster.hpp"

namespace subwordseg {

/// Zhang-Suen parallel thinning (Comm. ACM 27(3), 1984).
///
/// Alternates the two synchronous sub-passes until a full iteration deletes
/// nothing, capped at width + height iterations. A pixel P1 is deleted when
///   2 <= B(P1) <= 6   (foreground 8-neighbours),
///   A(P1) == 1        (0->1 transitions around P2..P9,P2),
/// and, in the first sub-pass, P2*P4*P6 == 0 and P4*P6*P8 == 0; in the second
/// sub-pass, P2*P4*P8 == 0 and P2*P6*P8 == 0.
BinaryImage thin_zhang_suen(const BinaryImage& img);

}  // namespace subwordseg
