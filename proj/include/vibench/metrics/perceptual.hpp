#pragma once

#include "vibench/core/image.hpp"
#include "vibench/features/extractor.hpp"

namespace vibench::metrics {

/// Added to the channel norm before unit-normalizing activations.
inline constexpr double kChannelNormEpsilon = 1e-10;

/// Weighted distance between two multi-layer activation sets.
///
/// Per layer, each position's channel vector is divided by (its L2 norm +
/// kChannelNormEpsilon); squared differences are weighted per channel,
/// summed over channels and averaged over positions. Layers are summed.
/// Empty `weights` means unit weights. Throws PreconditionError on a schema
/// mismatch.
double perceptual_distance(const features::FeatureSet& a, const features::FeatureSet& b,
                           const features::LayerWeights& weights = {});

/// Mean over frames of perceptual_distance on frame features, weighted by
/// the extractor's calibration weights.
double lpips_video(const VideoClip& pred, const VideoClip& ref, const features::FrameExtractor& extractor);

/// Mean over every stride-1 window of clip_length() frames of the unit-weight
/// perceptual distance on clip features. A video of T frames has T - 9
/// windows for the standard 10-frame extractor.
double pvcs_video(const VideoClip& pred, const VideoClip& ref, const features::ClipExtractor& extractor);

}  // namespace vibench::metrics
