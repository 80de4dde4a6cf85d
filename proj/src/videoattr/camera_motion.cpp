#include "vibench/videoattr/camera_motion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vibench/videoattr/coverage.hpp"

namespace vibench::videoattr {

void CameraMotionThresholds::validate() const {
  if (!(high_motion_max_compatibility < low_motion_min_compatibility)) {
    throw ValidationError("camera-motion thresholds overlap: high-motion ceiling must be below the "
                          "low-motion floor");
  }
}

std::vector<int> sample_evenly(int length, int count) {
  if (count < 1 || length < count) {
    throw PreconditionError("cannot sample " + std::to_string(count) + " frames from " +
                            std::to_string(length));
  }
  std::vector<int> out;
  if (count == 1) return {0};
  for (int k = 0; k < count; ++k) {
    out.push_back(static_cast<int>(std::lround(static_cast<double>(k) * (length - 1) / (count - 1))));
  }
  return out;
}

double compatibility_from_invalid(double invalid_fraction, CompatibilityMapping mapping, double epsilon) {
  if (mapping == CompatibilityMapping::kComplement) return 1.0 - invalid_fraction;
  return epsilon / (invalid_fraction + epsilon);
}

std::optional<Setting> label_from_compatibility(double total, const CameraMotionThresholds& thresholds) {
  thresholds.validate();
  if (total >= thresholds.low_motion_min_compatibility) return Setting::kLow;
  if (total <= thresholds.high_motion_max_compatibility) return Setting::kHigh;
  return std::nullopt;
}

namespace {

double directed_invalid(const RgbFrame& a, const RgbFrame& b, const FrameFeatures& fa,
                        const FrameFeatures& fb, const RansacOptions& options, Engine& eng,
                        bool& ok) {
  std::optional<AffineEstimate> est;
  if (a == b) {
    est = AffineEstimate{AffineTransform::Identity(), 0, 0};
  } else {
    est = ransac_affine(match_features(fa, fb, options.ratio_test), options, eng);
  }
  if (!est) {
    ok = false;
    return 1.0;
  }
  try {
    return invalid_fraction(est->transform, b.width(), b.height());
  } catch (const PreconditionError&) {
    ok = false;
    return 1.0;
  }
}

}  // namespace

CameraMotionResult classify_camera_motion(const VideoClip& clip, const CameraMotionOptions& options) {
  options.thresholds.validate();
  if (clip.length() < options.sample_count) {
    throw PreconditionError("clip '" + clip.id + "' has " + std::to_string(clip.length()) +
                            " frames; camera-motion classification needs at least " +
                            std::to_string(options.sample_count));
  }
  clip.check_uniform();
  CameraMotionResult result;
  result.sampled_frames = sample_evenly(clip.length(), options.sample_count);

  std::vector<FrameFeatures> features;
  features.reserve(result.sampled_frames.size());
  for (int idx : result.sampled_frames) {
    features.emplace_back(clip.frames[static_cast<std::size_t>(idx)], options.ransac);
  }

  result.total_compatibility = 1.0;
  const int n = static_cast<int>(result.sampled_frames.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      PairwiseCompatibility pc;
      pc.i = result.sampled_frames[static_cast<std::size_t>(a)];
      pc.j = result.sampled_frames[static_cast<std::size_t>(b)];
      const auto& fi = clip.frames[static_cast<std::size_t>(pc.i)];
      const auto& fj = clip.frames[static_cast<std::size_t>(pc.j)];
      const std::string tag = clip.id + ":" + std::to_string(pc.i) + "-" + std::to_string(pc.j);
      Engine forward = derive_stream(options.seed, tag + ":fwd");
      Engine backward = derive_stream(options.seed, tag + ":bwd");
      bool ok = true;
      pc.invalid_ij = directed_invalid(fi, fj, features[static_cast<std::size_t>(a)],
                                       features[static_cast<std::size_t>(b)], options.ransac, forward, ok);
      pc.invalid_ji = directed_invalid(fj, fi, features[static_cast<std::size_t>(b)],
                                       features[static_cast<std::size_t>(a)], options.ransac, backward, ok);
      pc.aligned = ok;
      pc.compatibility = ok ? compatibility_from_invalid(std::max(pc.invalid_ij, pc.invalid_ji),
                                                         options.mapping, options.reciprocal_epsilon)
                            : 0.0;
      result.total_compatibility = std::min(result.total_compatibility, pc.compatibility);
      result.pairs.push_back(pc);
    }
  }
  result.label = label_from_compatibility(result.total_compatibility, options.thresholds);
  return result;
}

double average_precision(const std::vector<double>& scores, const std::vector<bool>& positive) {
  if (scores.size() != positive.size()) throw PreconditionError("scores and labels differ in length");
  const auto total_pos = std::count(positive.begin(), positive.end(), true);
  if (total_pos == 0) throw PreconditionError("average precision needs at least one positive");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });

  double ap = 0.0;
  double prev_recall = 0.0;
  long tp = 0, seen = 0;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    while (end < order.size() && scores[order[end]] == scores[order[k]]) {
      if (positive[order[end]]) ++tp;
      ++seen;
      ++end;
    }
    const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    k = end;
  }
  return ap;
}

corpus::Manifest annotate_camera_motion(
    const corpus::Manifest& manifest, const CameraMotionOptions& options,
    const std::function<void(const std::string&, const CameraMotionResult&)>& on_clip) {
  corpus::Manifest out = manifest;
  for (auto& entry : out.clips) {
    const VideoClip clip = corpus::load_clip(manifest, entry);
    const auto result = classify_camera_motion(clip, options);
    if (on_clip) on_clip(entry.id, result);
    if (result.label) entry.labels.add({Attribute::kCameraMotion, *result.label});
  }
  return out;
}

}  // namespace vibench::videoattr
