#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vibench/core/image.hpp"
#include "vibench/features/tensor.hpp"

namespace vibench::features {

/// Per-frame deep features (LPIPS backbone) and pooled frame embeddings
/// (FID backbone). Implementations must be safe to call concurrently.
class FrameExtractor {
 public:
  virtual ~FrameExtractor() = default;

  virtual std::string name() const = 0;
  /// Digest of the weights; changes iff the weight bytes change.
  virtual std::string fingerprint() const = 0;
  /// Digest of weights plus preprocessing; used as the cache key component.
  virtual std::string identity() const { return fingerprint(); }

  virtual FrameFeatureSet extract(const RgbFrame& frame) const = 0;
  virtual PooledEmbedding embed(const RgbFrame& frame) const = 0;
  virtual std::vector<PooledEmbedding> embed_batch(std::span<const RgbFrame> frames) const;

  /// Calibrated per-channel weights for perceptual distance. Unit weights
  /// when the extractor ships none.
  virtual LayerWeights calibration_weights() const = 0;
};

/// Clip features of every window of one video, computed on demand.
class ClipWindows {
 public:
  virtual ~ClipWindows() = default;
  /// Features of frames [start, start + clip_length()).
  virtual ClipFeatureSet extract(int start) const = 0;
};

/// Spatiotemporal features over fixed-length clips (PVCS backbone) and
/// pooled whole-video embeddings (VFID backbone).
class ClipExtractor {
 public:
  virtual ~ClipExtractor() = default;

  virtual std::string name() const = 0;
  virtual std::string fingerprint() const = 0;
  virtual std::string identity() const { return fingerprint(); }

  /// Frames per clip accepted by extract().
  virtual int clip_length() const { return 10; }
  /// Throws PreconditionError unless frames.size() == clip_length().
  virtual ClipFeatureSet extract(std::span<const RgbFrame> frames) const = 0;
  /// Sliding-window extraction over `frames`, which must outlive the result.
  /// Window results equal extract() on the same frames; the default calls it
  /// per window.
  virtual std::unique_ptr<ClipWindows> windows(std::span<const RgbFrame> frames) const;
  /// Final-pool activations averaged over space and time of the whole video.
  virtual PooledEmbedding embed(std::span<const RgbFrame> frames) const = 0;
};

using FrameExtractorPtr = std::shared_ptr<const FrameExtractor>;
using ClipExtractorPtr = std::shared_ptr<const ClipExtractor>;

}  // namespace vibench::features
