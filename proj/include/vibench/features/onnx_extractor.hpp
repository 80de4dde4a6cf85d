#pragma once

#include <memory>

#include "vibench/features/config.hpp"
#include "vibench/features/extractor.hpp"

namespace vibench::features {

/// 2-D backbone in ONNX format. Input is N x 3 x H x W; every feature output
/// is N x C x h x w. Inference is serialized internally.
class OnnxFrameExtractor final : public FrameExtractor {
 public:
  /// Throws LoadError if the model is missing, unreadable, or its SHA-256
  /// differs from config.fingerprint.
  explicit OnnxFrameExtractor(ExtractorConfig config);
  ~OnnxFrameExtractor() override;

  std::string name() const override { return config_.name; }
  std::string fingerprint() const override { return config_.fingerprint; }
  std::string identity() const override { return identity_; }
  FrameFeatureSet extract(const RgbFrame& frame) const override;
  PooledEmbedding embed(const RgbFrame& frame) const override;
  std::vector<PooledEmbedding> embed_batch(std::span<const RgbFrame> frames) const override;
  LayerWeights calibration_weights() const override { return weights_; }

 private:
  struct Impl;
  ExtractorConfig config_;
  std::string identity_;
  LayerWeights weights_;
  std::unique_ptr<Impl> impl_;
};

/// 3-D backbone in ONNX format. Input is 1 x 3 x T x H x W with a dynamic
/// time axis; feature outputs are 1 x C x t x h x w.
class OnnxClipExtractor final : public ClipExtractor {
 public:
  explicit OnnxClipExtractor(ExtractorConfig config);
  ~OnnxClipExtractor() override;

  std::string name() const override { return config_.name; }
  std::string fingerprint() const override { return config_.fingerprint; }
  std::string identity() const override { return identity_; }
  int clip_length() const override { return config_.clip_length; }
  ClipFeatureSet extract(std::span<const RgbFrame> frames) const override;
  /// Runs the whole video through the network and averages the embedding
  /// output over time and space.
  PooledEmbedding embed(std::span<const RgbFrame> frames) const override;

 private:
  struct Impl;
  ExtractorConfig config_;
  std::string identity_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vibench::features
