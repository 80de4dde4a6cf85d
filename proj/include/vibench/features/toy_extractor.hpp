#pragma once

#include <cstdint>
#include <vector>

#include "vibench/features/extractor.hpp"

namespace vibench::features {

/// One toy layer: average-pool RGB in [0, 1] over blocks, then apply a
/// seeded affine map 3 -> channels at every block.
struct ToyLayerSpec {
  int channels = 8;
  int spatial_stride = 8;
  int temporal_stride = 1;  // clip extractor only
};

/// Deterministic linear stand-in for a pretrained backbone. Layer l output
/// at each block is W_l * mean_rgb(block) + b_l, so a black frame yields the
/// biases exactly and the embedding of a constant-colour frame is
/// W_last * rgb / 255 + b_last.
class ToyFrameExtractor final : public FrameExtractor {
 public:
  explicit ToyFrameExtractor(std::uint64_t seed = 7, std::vector<ToyLayerSpec> layers = default_layers(),
                             int embedding_channels = 16);

  static std::vector<ToyLayerSpec> default_layers();

  std::string name() const override { return "toy-frame"; }
  std::string fingerprint() const override { return fingerprint_; }
  FrameFeatureSet extract(const RgbFrame& frame) const override;
  PooledEmbedding embed(const RgbFrame& frame) const override;
  LayerWeights calibration_weights() const override { return calibration_; }

  const Eigen::MatrixXf& layer_weight(std::size_t l) const { return weights_[l]; }
  const Eigen::VectorXf& layer_bias(std::size_t l) const { return biases_[l]; }
  const Eigen::MatrixXf& embedding_weight() const { return embed_weight_; }
  const Eigen::VectorXf& embedding_bias() const { return embed_bias_; }

 private:
  std::vector<ToyLayerSpec> specs_;
  std::vector<Eigen::MatrixXf> weights_;
  std::vector<Eigen::VectorXf> biases_;
  LayerWeights calibration_;
  Eigen::MatrixXf embed_weight_;
  Eigen::VectorXf embed_bias_;
  std::string fingerprint_;
};

class ToyClipExtractor final : public ClipExtractor {
 public:
  explicit ToyClipExtractor(std::uint64_t seed = 11, std::vector<ToyLayerSpec> layers = default_layers(),
                            int embedding_channels = 16);

  /// Five layers, mirroring the five pre-pooling blocks of a video backbone.
  static std::vector<ToyLayerSpec> default_layers();

  std::string name() const override { return "toy-clip"; }
  std::string fingerprint() const override { return fingerprint_; }
  ClipFeatureSet extract(std::span<const RgbFrame> frames) const override;
  /// Block sums are computed once per frame and shared by overlapping windows.
  std::unique_ptr<ClipWindows> windows(std::span<const RgbFrame> frames) const override;
  PooledEmbedding embed(std::span<const RgbFrame> frames) const override;

  const Eigen::MatrixXf& embedding_weight() const { return embed_weight_; }
  const Eigen::VectorXf& embedding_bias() const { return embed_bias_; }

 private:
  std::vector<ToyLayerSpec> specs_;
  std::vector<Eigen::MatrixXf> weights_;
  std::vector<Eigen::VectorXf> biases_;
  Eigen::MatrixXf embed_weight_;
  Eigen::VectorXf embed_bias_;
  std::string fingerprint_;
};

}  // namespace vibench::features
