#pragma once

#include <Eigen/Core>

#include "vibench/core/image.hpp"
#include "vibench/maskgen/config.hpp"

namespace vibench::maskgen {

struct MaskAttributeMeasurement {
  double fg_size = 0.0;          // mean occluded fraction per frame
  double fg_displacement = 0.0;  // mean centroid step / frame diagonal
  double fg_pose_motion = 0.0;   // centroid-aligned symmetric difference / mean area
};

/// Centroid (x, y) of the occluded pixels. Throws NumericError on an empty frame.
Eigen::Vector2d mask_centroid(const MaskFrame& frame);

/// Number of pixels where a and b translated by (dx, dy) disagree.
long symmetric_difference(const MaskFrame& a, const MaskFrame& b, int dx, int dy);

/// Throws PreconditionError on an empty sequence and NumericError when any
/// frame has no occluded pixel.
MaskAttributeMeasurement measure_attributes(const MaskSequence& mask);

/// Labels from measured values. Throws ValidationError on overlapping bands.
LabelSet label_mask(const MaskAttributeMeasurement& m, const LabelThresholds& thresholds);

}  // namespace vibench::maskgen
