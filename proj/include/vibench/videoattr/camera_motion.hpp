#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vibench/core/image.hpp"
#include "vibench/corpus/manifest.hpp"
#include "vibench/videoattr/affine.hpp"

namespace vibench::videoattr {

/// How an invalid-pixel fraction f becomes a compatibility score.
enum class CompatibilityMapping {
  kComplement,  // 1 - f
  kReciprocal,  // eps / (f + eps)
};

struct CameraMotionThresholds {
  /// Total compatibility at or above this labels the clip low camera motion.
  double low_motion_min_compatibility = 0.85;
  /// Total compatibility at or below this labels it high camera motion.
  double high_motion_max_compatibility = 0.60;

  void validate() const;
};

struct CameraMotionOptions {
  CameraMotionThresholds thresholds;
  RansacOptions ransac;
  CompatibilityMapping mapping = CompatibilityMapping::kComplement;
  double reciprocal_epsilon = 0.01;
  int sample_count = 10;
  std::uint64_t seed = 0;
};

struct PairwiseCompatibility {
  int i = 0;
  int j = 0;
  /// Invalid fractions for the i->j and j->i warps; 1 when alignment failed.
  double invalid_ij = 1.0;
  double invalid_ji = 1.0;
  bool aligned = false;
  double compatibility = 0.0;
};

struct CameraMotionResult {
  double total_compatibility = 0.0;
  std::vector<int> sampled_frames;
  std::vector<PairwiseCompatibility> pairs;
  std::optional<Setting> label;
};

/// count indices spread evenly over [0, length), first and last included.
std::vector<int> sample_evenly(int length, int count);

double compatibility_from_invalid(double invalid_fraction, CompatibilityMapping mapping,
                                  double epsilon = 0.01);

std::optional<Setting> label_from_compatibility(double total, const CameraMotionThresholds& thresholds);

/// Samples evenly spaced frames, aligns every unordered pair in both
/// directions and takes the minimum compatibility. Pairs that fail to align
/// contribute 0. Throws PreconditionError for clips shorter than the sample count.
CameraMotionResult classify_camera_motion(const VideoClip& clip, const CameraMotionOptions& options);

/// Average precision of scores against binary relevance (true = positive).
/// Tied scores are ranked as one block.
double average_precision(const std::vector<double>& scores, const std::vector<bool>& positive);

/// Labels every clip of the manifest. Unlabeled results leave the clip
/// untouched; an existing conflicting camera_motion label throws.
corpus::Manifest annotate_camera_motion(
    const corpus::Manifest& manifest, const CameraMotionOptions& options,
    const std::function<void(const std::string&, const CameraMotionResult&)>& on_clip = {});

}  // namespace vibench::videoattr
