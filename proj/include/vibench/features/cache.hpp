#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "vibench/features/extractor.hpp"

namespace vibench::features {

/// SHA-256 over dimensions and pixel bytes.
std::string content_hash(const RgbFrame& frame);
std::string content_hash(std::span<const RgbFrame> frames);

/// On-disk embedding store keyed by (content hash, extractor identity).
///
/// Layout: <root>/<identity[0:16]>/<hash[0:2]>/<hash>.emb, each file holding
/// the magic "VBEMB01\0", a u32 length, the pooling string and the values as
/// little-endian doubles. Writes go to a unique temporary file and are
/// renamed into place, so concurrent writers of one key leave one complete
/// file (last writer wins).
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path_for(const std::string& identity, const std::string& hash) const;

  /// Unreadable or truncated entries are treated as misses.
  std::optional<PooledEmbedding> get(const std::string& identity, const std::string& hash) const;
  void put(const std::string& identity, const std::string& hash, const PooledEmbedding& embedding) const;

 private:
  std::filesystem::path root_;
};

/// Frame extractor decorator that serves embed() from an EmbeddingCache.
class CachingFrameExtractor final : public FrameExtractor {
 public:
  CachingFrameExtractor(FrameExtractorPtr inner, std::shared_ptr<const EmbeddingCache> cache);

  std::string name() const override { return inner_->name(); }
  std::string fingerprint() const override { return inner_->fingerprint(); }
  std::string identity() const override { return inner_->identity(); }
  FrameFeatureSet extract(const RgbFrame& frame) const override { return inner_->extract(frame); }
  PooledEmbedding embed(const RgbFrame& frame) const override;
  std::vector<PooledEmbedding> embed_batch(std::span<const RgbFrame> frames) const override;
  LayerWeights calibration_weights() const override { return inner_->calibration_weights(); }

 private:
  FrameExtractorPtr inner_;
  std::shared_ptr<const EmbeddingCache> cache_;
};

/// Clip extractor decorator that serves embed() from an EmbeddingCache.
class CachingClipExtractor final : public ClipExtractor {
 public:
  CachingClipExtractor(ClipExtractorPtr inner, std::shared_ptr<const EmbeddingCache> cache);

  std::string name() const override { return inner_->name(); }
  std::string fingerprint() const override { return inner_->fingerprint(); }
  std::string identity() const override { return inner_->identity(); }
  int clip_length() const override { return inner_->clip_length(); }
  ClipFeatureSet extract(std::span<const RgbFrame> frames) const override { return inner_->extract(frames); }
  std::unique_ptr<ClipWindows> windows(std::span<const RgbFrame> frames) const override {
    return inner_->windows(frames);
  }
  PooledEmbedding embed(std::span<const RgbFrame> frames) const override;

 private:
  ClipExtractorPtr inner_;
  std::shared_ptr<const EmbeddingCache> cache_;
};

}  // namespace vibench::features
