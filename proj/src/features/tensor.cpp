#include "vibench/features/tensor.hpp"

#include "vibench/features/extractor.hpp"

#include <cstdio>
#include <cstring>

namespace vibench::features {

LayerWeights unit_weights(const FeatureSet& schema) {
  LayerWeights w;
  for (const auto& layer : schema.layers) w.push_back(Eigen::VectorXf::Ones(layer.channels()));
  return w;
}

std::string feature_checksum(const FeatureSet& features) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& layer : features.layers) {
    for (int d : layer.shape) mix(&d, sizeof d);
    mix(layer.values.data(), static_cast<std::size_t>(layer.values.size()) * sizeof(float));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

class IndependentWindows final : public ClipWindows {
 public:
  IndependentWindows(const ClipExtractor& extractor, std::span<const RgbFrame> frames)
      : extractor_(extractor), frames_(frames) {}

  ClipFeatureSet extract(int start) const override {
    const int n = extractor_.clip_length();
    if (start < 0 || start + n > static_cast<int>(frames_.size())) {
      throw PreconditionError("window " + std::to_string(start) + "+" + std::to_string(n) + " exceeds " +
                              std::to_string(frames_.size()) + " frames");
    }
    return extractor_.extract(frames_.subspan(static_cast<std::size_t>(start), static_cast<std::size_t>(n)));
  }

 private:
  const ClipExtractor& extractor_;
  std::span<const RgbFrame> frames_;
};

}  // namespace

std::unique_ptr<ClipWindows> ClipExtractor::windows(std::span<const RgbFrame> frames) const {
  return std::make_unique<IndependentWindows>(*this, frames);
}

std::vector<PooledEmbedding> FrameExtractor::embed_batch(std::span<const RgbFrame> frames) const {
  std::vector<PooledEmbedding> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(embed(f));
  return out;
}

}  // namespace vibench::features
