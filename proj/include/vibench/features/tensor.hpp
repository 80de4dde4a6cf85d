#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace vibench::features {

/// One layer's activations as channels x positions. `shape` keeps the
/// original layout: {C, h, w} for frames, {C, t, h, w} for clips.
struct FeatureTensor {
  std::vector<int> shape;
  Eigen::MatrixXf values;

  int channels() const { return static_cast<int>(values.rows()); }
  Eigen::Index positions() const { return values.cols(); }

  friend bool operator==(const FeatureTensor& a, const FeatureTensor& b) {
    return a.shape == b.shape && a.values.rows() == b.values.rows() &&
           a.values.cols() == b.values.cols() && a.values == b.values;
  }
};

/// Ordered multi-layer activations plus the extractor that produced them.
struct FeatureSet {
  std::vector<FeatureTensor> layers;
  std::string fingerprint;

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

using FrameFeatureSet = FeatureSet;
using ClipFeatureSet = FeatureSet;

/// Fixed-length pooled representation of a frame or a whole video.
struct PooledEmbedding {
  Eigen::VectorXd values;
  std::string pooling;
  std::string fingerprint;

  friend bool operator==(const PooledEmbedding& a, const PooledEmbedding& b) {
    return a.values.size() == b.values.size() && a.values == b.values && a.pooling == b.pooling &&
           a.fingerprint == b.fingerprint;
  }
};

/// Per-layer, per-channel linear weights applied to squared differences.
using LayerWeights = std::vector<Eigen::VectorXf>;

/// Unit weights matching a feature schema.
LayerWeights unit_weights(const FeatureSet& schema);

/// Order-sensitive 64-bit digest of all shapes and values (for golden checks).
std::string feature_checksum(const FeatureSet& features);

}  // namespace vibench::features
