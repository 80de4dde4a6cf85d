#include "vibench/metrics/perceptual.hpp"

#include <algorithm>
#include <string>

#include "vibench/core/error.hpp"

namespace vibench::metrics {
namespace {

Eigen::MatrixXd unit_normalize(const Eigen::MatrixXf& x) {
  Eigen::MatrixXd d = x.cast<double>();
  const Eigen::RowVectorXd norms = d.colwise().norm().array() + kChannelNormEpsilon;
  return d.array().rowwise() / norms.array();
}

void check_video_pair(const VideoClip& pred, const VideoClip& ref) {
  if (pred.length() != ref.length()) {
    throw PreconditionError("prediction has " + std::to_string(pred.length()) + " frames, reference has " +
                            std::to_string(ref.length()));
  }
  if (pred.width() != ref.width() || pred.height() != ref.height()) {
    throw PreconditionError("prediction and reference dimensions differ");
  }
}

}  // namespace

double perceptual_distance(const features::FeatureSet& a, const features::FeatureSet& b,
                           const features::LayerWeights& weights) {
  if (a.layers.size() != b.layers.size()) {
    throw PreconditionError("layer counts differ: " + std::to_string(a.layers.size()) + " vs " +
                            std::to_string(b.layers.size()));
  }
  if (!weights.empty() && weights.size() != a.layers.size()) {
    throw PreconditionError("expected " + std::to_string(a.layers.size()) + " weight vectors, got " +
                            std::to_string(weights.size()));
  }
  double total = 0.0;
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    const auto& la = a.layers[l];
    const auto& lb = b.layers[l];
    if (la.shape != lb.shape || la.values.rows() != lb.values.rows() || la.values.cols() != lb.values.cols()) {
      throw PreconditionError("layer " + std::to_string(l) + " shapes differ");
    }
    if (la.positions() == 0) throw PreconditionError("layer " + std::to_string(l) + " is empty");
    const Eigen::MatrixXd diff2 = (unit_normalize(la.values) - unit_normalize(lb.values)).array().square();
    Eigen::RowVectorXd per_position;
    if (weights.empty()) {
      per_position = diff2.colwise().sum();
    } else {
      if (weights[l].size() != la.channels()) {
        throw PreconditionError("layer " + std::to_string(l) + " has " + std::to_string(la.channels()) +
                                " channels but " + std::to_string(weights[l].size()) + " weights");
      }
      per_position = weights[l].cast<double>().transpose() * diff2;
    }
    total += per_position.mean();
  }
  return total;
}

double lpips_video(const VideoClip& pred, const VideoClip& ref, const features::FrameExtractor& extractor) {
  check_video_pair(pred, ref);
  if (pred.length() == 0) throw PreconditionError("cannot score an empty video");
  const features::LayerWeights weights = extractor.calibration_weights();
  double sum = 0.0;
  for (int t = 0; t < pred.length(); ++t) {
    const auto i = static_cast<std::size_t>(t);
    // Identical frames give identical features and an exact zero.
    if (pred.frames[i] == ref.frames[i]) continue;
    sum += perceptual_distance(extractor.extract(pred.frames[i]), extractor.extract(ref.frames[i]), weights);
  }
  return sum / pred.length();
}

double pvcs_video(const VideoClip& pred, const VideoClip& ref, const features::ClipExtractor& extractor) {
  check_video_pair(pred, ref);
  const int window = extractor.clip_length();
  if (pred.length() < window) {
    throw PreconditionError("PVCS needs at least " + std::to_string(window) + " frames, got " +
                            std::to_string(pred.length()));
  }
  const int count = pred.length() - window + 1;
  const std::span<const RgbFrame> p(pred.frames), r(ref.frames);
  const auto pred_windows = extractor.windows(p);
  const auto ref_windows = extractor.windows(r);
  double sum = 0.0;
  for (int s = 0; s < count; ++s) {
    const auto wp = p.subspan(static_cast<std::size_t>(s), static_cast<std::size_t>(window));
    const auto wr = r.subspan(static_cast<std::size_t>(s), static_cast<std::size_t>(window));
    if (std::equal(wp.begin(), wp.end(), wr.begin())) continue;
    sum += perceptual_distance(pred_windows->extract(s), ref_windows->extract(s));
  }
  return sum / count;
}

}  // namespace vibench::metrics
