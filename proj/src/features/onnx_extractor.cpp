#include "vibench/features/onnx_extractor.hpp"

#include <filesystem>
#include <mutex>
#include <opencv2/dnn.hpp>

#include "vibench/core/error.hpp"
#include "vibench/core/image_io.hpp"
#include "vibench/features/fingerprint.hpp"

namespace vibench::features {
namespace {

cv::dnn::Net load_net(const ExtractorConfig& config) {
  if (!std::filesystem::is_regular_file(config.model)) {
    throw LoadError("weights file not found: " + config.model.string());
  }
  const std::string actual = sha256_file(config.model);
  if (actual != config.fingerprint) {
    throw LoadError("weights fingerprint mismatch for " + config.model.string() + ": expected " +
                    config.fingerprint + ", got " + actual);
  }
  try {
    cv::dnn::Net net = cv::dnn::readNetFromONNX(config.model.string());
    if (net.empty()) throw LoadError("empty network in " + config.model.string());
    net.setPreferableBackend(cv::dnn::DNN_BACKEND_OPENCV);
    net.setPreferableTarget(cv::dnn::DNN_TARGET_CPU);
    return net;
  } catch (const cv::Exception& e) {
    throw LoadError("corrupt weights file " + config.model.string() + ": " + e.what());
  }
}

/// Writes the normalized planes of one frame at `dst`, channel stride `plane_stride`.
void fill_planes(const RgbFrame& frame, const Preprocessing& pre, float* dst, std::size_t plane_stride) {
  RgbFrame resized;
  const RgbFrame* src = &frame;
  if (frame.width() != pre.width || frame.height() != pre.height) {
    resized = resize_bilinear(frame, pre.width, pre.height);
    src = &resized;
  }
  const RgbFrame& f = *src;
  for (int c = 0; c < 3; ++c) {
    const float scale = 1.0f / (255.0f * pre.std[c]);
    const float shift = pre.mean[c] / pre.std[c];
    float* plane = dst + c * plane_stride;
    for (int y = 0; y < f.height(); ++y) {
      for (int x = 0; x < f.width(); ++x) plane[y * f.width() + x] = f(y, x, c) * scale - shift;
    }
  }
}

/// Converts output `n` of an N x C x ... blob into a C x positions tensor.
FeatureTensor to_tensor(const cv::Mat& blob, int n) {
  FeatureTensor t;
  const int channels = blob.size[1];
  Eigen::Index positions = 1;
  t.shape.push_back(channels);
  for (int d = 2; d < blob.dims; ++d) {
    t.shape.push_back(blob.size[d]);
    positions *= blob.size[d];
  }
  const float* base = blob.ptr<float>() + static_cast<std::size_t>(n) * channels * positions;
  t.values = Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      base, channels, positions);
  return t;
}

PooledEmbedding pool(const cv::Mat& blob, int n, const std::string& pooling, const std::string& fingerprint) {
  const FeatureTensor t = to_tensor(blob, n);
  PooledEmbedding e;
  e.values = t.values.cast<double>().rowwise().mean();
  e.pooling = pooling;
  e.fingerprint = fingerprint;
  return e;
}

std::vector<cv::String> output_names(const ExtractorConfig& config, bool with_embedding) {
  std::vector<cv::String> names(config.feature_outputs.begin(), config.feature_outputs.end());
  if (with_embedding) names.push_back(config.embedding_output);
  return names;
}

}  // namespace

struct OnnxFrameExtractor::Impl {
  cv::dnn::Net net;
  std::mutex mutex;

  std::vector<cv::Mat> run(const ExtractorConfig& config, std::span<const RgbFrame> frames,
                           const std::vector<cv::String>& names) {
    const auto& pre = config.preprocessing;
    const int dims[] = {static_cast<int>(frames.size()), 3, pre.height, pre.width};
    cv::Mat blob(4, dims, CV_32F);
    const std::size_t plane = static_cast<std::size_t>(pre.width) * pre.height;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      fill_planes(frames[i], pre, blob.ptr<float>() + i * 3 * plane, plane);
    }
    std::lock_guard lock(mutex);
    net.setInput(blob, config.input);
    std::vector<cv::Mat> outs;
    net.forward(outs, names);
    for (auto& o : outs) o = o.clone();
    return outs;
  }
};

OnnxFrameExtractor::OnnxFrameExtractor(ExtractorConfig config)
    : config_(std::move(config)), identity_(config_identity(config_)), impl_(std::make_unique<Impl>()) {
  impl_->net = load_net(config_);
  const RgbFrame probe(config_.preprocessing.width, config_.preprocessing.height);
  const FrameFeatureSet schema = extract(probe);
  if (config_.layer_weights.empty()) {
    weights_ = unit_weights(schema);
  } else {
    for (std::size_t l = 0; l < schema.layers.size(); ++l) {
      if (config_.layer_weights[l].size() != schema.layers[l].channels()) {
        throw LoadError("layer_weights[" + std::to_string(l) + "] has " +
                        std::to_string(config_.layer_weights[l].size()) + " entries, layer has " +
                        std::to_string(schema.layers[l].channels()) + " channels");
      }
    }
    weights_ = config_.layer_weights;
  }
}

OnnxFrameExtractor::~OnnxFrameExtractor() = default;

FrameFeatureSet OnnxFrameExtractor::extract(const RgbFrame& frame) const {
  const auto outs = impl_->run(config_, std::span(&frame, 1), output_names(config_, false));
  FrameFeatureSet out;
  out.fingerprint = config_.fingerprint;
  for (const auto& o : outs) out.layers.push_back(to_tensor(o, 0));
  return out;
}

PooledEmbedding OnnxFrameExtractor::embed(const RgbFrame& frame) const {
  const auto outs = impl_->run(config_, std::span(&frame, 1), {config_.embedding_output});
  return pool(outs.front(), 0, "global-mean:" + config_.embedding_output, config_.fingerprint);
}

std::vector<PooledEmbedding> OnnxFrameExtractor::embed_batch(std::span<const RgbFrame> frames) const {
  std::vector<PooledEmbedding> out;
  out.reserve(frames.size());
  const auto batch = static_cast<std::size_t>(config_.batch_size);
  for (std::size_t start = 0; start < frames.size(); start += batch) {
    const auto chunk = frames.subspan(start, std::min(batch, frames.size() - start));
    const auto outs = impl_->run(config_, chunk, {config_.embedding_output});
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      out.push_back(pool(outs.front(), static_cast<int>(i), "global-mean:" + config_.embedding_output,
                         config_.fingerprint));
    }
  }
  return out;
}

struct OnnxClipExtractor::Impl {
  cv::dnn::Net net;
  std::mutex mutex;

  std::vector<cv::Mat> run(const ExtractorConfig& config, std::span<const RgbFrame> frames,
                           const std::vector<cv::String>& names) {
    const auto& pre = config.preprocessing;
    const int time = static_cast<int>(frames.size());
    const int dims[] = {1, 3, time, pre.height, pre.width};
    cv::Mat blob(5, dims, CV_32F);
    const std::size_t plane = static_cast<std::size_t>(pre.width) * pre.height;
    // Channel-major layout: channel c of frame t lives at (c * T + t) * plane.
    for (int t = 0; t < time; ++t) {
      fill_planes(frames[static_cast<std::size_t>(t)], pre, blob.ptr<float>() + t * plane, time * plane);
    }
    std::lock_guard lock(mutex);
    net.setInput(blob, config.input);
    std::vector<cv::Mat> outs;
    net.forward(outs, names);
    for (auto& o : outs) o = o.clone();
    return outs;
  }
};

OnnxClipExtractor::OnnxClipExtractor(ExtractorConfig config)
    : config_(std::move(config)), identity_(config_identity(config_)), impl_(std::make_unique<Impl>()) {
  impl_->net = load_net(config_);
}

OnnxClipExtractor::~OnnxClipExtractor() = default;

ClipFeatureSet OnnxClipExtractor::extract(std::span<const RgbFrame> frames) const {
  if (static_cast<int>(frames.size()) != clip_length()) {
    throw PreconditionError("clip extractor needs exactly " + std::to_string(clip_length()) +
                            " frames, got " + std::to_string(frames.size()));
  }
  const auto outs = impl_->run(config_, frames, output_names(config_, false));
  ClipFeatureSet out;
  out.fingerprint = config_.fingerprint;
  for (const auto& o : outs) out.layers.push_back(to_tensor(o, 0));
  return out;
}

PooledEmbedding OnnxClipExtractor::embed(std::span<const RgbFrame> frames) const {
  if (frames.empty()) throw PreconditionError("cannot embed an empty video");
  const auto outs = impl_->run(config_, frames, {config_.embedding_output});
  return pool(outs.front(), 0, "spatiotemporal-mean:" + config_.embedding_output, config_.fingerprint);
}

}  // namespace vibench::features
