#include "vibench/features/toy_extractor.hpp"

#include <algorithm>
#include <array>
#include <memory>

#include "vibench/core/error.hpp"
#include "vibench/core/rng.hpp"
#include "vibench/features/fingerprint.hpp"

namespace vibench::features {
namespace {

// Summed-area table of the three channels scaled to [0, 1]; (H+1) x (W+1) per channel.
struct IntegralImage {
  int width = 0;
  int height = 0;
  std::array<Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>, 3> sums;

  explicit IntegralImage(const RgbFrame& f) : width(f.width()), height(f.height()) {
    for (auto& s : sums) s = decltype(IntegralImage::sums)::value_type::Zero(height + 1, width + 1);
    for (int y = 0; y < height; ++y) {
      const std::uint8_t* row = &f.interleaved().coeffRef(y, 0);
      for (int c = 0; c < 3; ++c) {
        const double* above = &sums[c].coeffRef(y, 1);
        double* out = &sums[c].coeffRef(y + 1, 1);
        double running = 0.0;
        for (int x = 0; x < width; ++x) {
          running += row[3 * x + c] / 255.0;
          out[x] = above[x] + running;
        }
      }
    }
  }

  Eigen::Vector3d block_sum(int y0, int y1, int x0, int x1) const {
    Eigen::Vector3d out;
    for (int c = 0; c < 3; ++c) {
      out[c] = sums[c](y1, x1) - sums[c](y0, x1) - sums[c](y1, x0) + sums[c](y0, x0);
    }
    return out;
  }
};

int cells(int extent, int stride) { return std::max(1, extent / std::max(1, stride)); }
int edge(int i, int extent, int count) { return static_cast<int>(static_cast<long>(i) * extent / count); }

void init_layers(std::uint64_t seed, const char* tag, const std::vector<ToyLayerSpec>& specs,
                 int embedding_channels, std::vector<Eigen::MatrixXf>& weights,
                 std::vector<Eigen::VectorXf>& biases, Eigen::MatrixXf& embed_w, Eigen::VectorXf& embed_b) {
  Engine eng = derive_stream(seed, tag);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  auto gaussian = [&](int rows, int cols, float scale) {
    Eigen::MatrixXf m(rows, cols);
    for (int j = 0; j < cols; ++j) {
      for (int i = 0; i < rows; ++i) m(i, j) = scale * normal(eng);
    }
    return m;
  };
  for (const auto& s : specs) {
    if (s.channels < 1 || s.spatial_stride < 1 || s.temporal_stride < 1) {
      throw PreconditionError("toy layer spec must be positive");
    }
    weights.push_back(gaussian(s.channels, 3, 1.0f));
    biases.push_back(gaussian(s.channels, 1, 0.1f).col(0));
  }
  embed_w = gaussian(embedding_channels, 3, 1.0f);
  embed_b = gaussian(embedding_channels, 1, 0.1f).col(0);
}

std::string digest(const char* kind, std::uint64_t seed, const std::vector<ToyLayerSpec>& specs,
                   const std::vector<Eigen::MatrixXf>& weights, const std::vector<Eigen::VectorXf>& biases,
                   const Eigen::MatrixXf& ew, const Eigen::VectorXf& eb) {
  Sha256 h;
  h.update(kind);
  h.update_pod(&seed, 1);
  for (std::size_t l = 0; l < specs.size(); ++l) {
    h.update_pod(&specs[l], 1);
    h.update_pod(weights[l].data(), static_cast<std::size_t>(weights[l].size()));
    h.update_pod(biases[l].data(), static_cast<std::size_t>(biases[l].size()));
  }
  h.update_pod(ew.data(), static_cast<std::size_t>(ew.size()));
  h.update_pod(eb.data(), static_cast<std::size_t>(eb.size()));
  return h.hex();
}

}  // namespace

std::vector<ToyLayerSpec> ToyFrameExtractor::default_layers() {
  return {{8, 4, 1}, {12, 8, 1}, {16, 16, 1}, {16, 32, 1}, {24, 64, 1}};
}

ToyFrameExtractor::ToyFrameExtractor(std::uint64_t seed, std::vector<ToyLayerSpec> layers,
                                     int embedding_channels)
    : specs_(std::move(layers)) {
  init_layers(seed, "toy-frame", specs_, embedding_channels, weights_, biases_, embed_weight_, embed_bias_);
  Engine eng = derive_stream(seed, "toy-frame-calibration");
  std::uniform_real_distribution<float> u(0.1f, 1.0f);
  for (const auto& s : specs_) {
    Eigen::VectorXf w(s.channels);
    for (int c = 0; c < s.channels; ++c) w[c] = u(eng);
    calibration_.push_back(w);
  }
  fingerprint_ = digest("toy-frame-v1", seed, specs_, weights_, biases_, embed_weight_, embed_bias_);
}

FrameFeatureSet ToyFrameExtractor::extract(const RgbFrame& frame) const {
  const IntegralImage integral(frame);
  FrameFeatureSet out;
  out.fingerprint = fingerprint_;
  for (std::size_t l = 0; l < specs_.size(); ++l) {
    const int gh = cells(frame.height(), specs_[l].spatial_stride);
    const int gw = cells(frame.width(), specs_[l].spatial_stride);
    Eigen::MatrixXf pooled(3, gh * gw);
    for (int i = 0; i < gh; ++i) {
      const int y0 = edge(i, frame.height(), gh), y1 = edge(i + 1, frame.height(), gh);
      for (int j = 0; j < gw; ++j) {
        const int x0 = edge(j, frame.width(), gw), x1 = edge(j + 1, frame.width(), gw);
        const double area = static_cast<double>(y1 - y0) * (x1 - x0);
        pooled.col(i * gw + j) = (integral.block_sum(y0, y1, x0, x1) / area).cast<float>();
      }
    }
    FeatureTensor t;
    t.shape = {specs_[l].channels, gh, gw};
    t.values = (weights_[l] * pooled).colwise() + biases_[l];
    out.layers.push_back(std::move(t));
  }
  return out;
}

PooledEmbedding ToyFrameExtractor::embed(const RgbFrame& frame) const {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      for (int c = 0; c < 3; ++c) mean[c] += frame(y, x, c);
    }
  }
  mean /= 255.0 * frame.width() * frame.height();
  PooledEmbedding e;
  e.values = (embed_weight_.cast<double>() * mean + embed_bias_.cast<double>());
  e.pooling = "global-mean";
  e.fingerprint = fingerprint_;
  return e;
}

std::vector<ToyLayerSpec> ToyClipExtractor::default_layers() {
  return {{8, 8, 1}, {12, 16, 2}, {16, 32, 2}, {16, 64, 5}, {24, 64, 10}};
}

ToyClipExtractor::ToyClipExtractor(std::uint64_t seed, std::vector<ToyLayerSpec> layers,
                                   int embedding_channels)
    : specs_(std::move(layers)) {
  init_layers(seed, "toy-clip", specs_, embedding_channels, weights_, biases_, embed_weight_, embed_bias_);
  fingerprint_ = digest("toy-clip-v1", seed, specs_, weights_, biases_, embed_weight_, embed_bias_);
}

namespace {

class ToyClipWindows final : public ClipWindows {
 public:
  ToyClipWindows(const std::vector<ToyLayerSpec>& specs, const std::vector<Eigen::MatrixXf>& weights,
                 const std::vector<Eigen::VectorXf>& biases, std::string fingerprint, int clip_length,
                 std::span<const RgbFrame> frames)
      : specs_(specs), weights_(weights), biases_(biases), fingerprint_(std::move(fingerprint)),
        clip_length_(clip_length), frames_(static_cast<int>(frames.size())) {
    if (frames.empty()) return;
    height_ = frames.front().height();
    width_ = frames.front().width();
    // cell_sums_[l][t] holds the unnormalised channel sums of every spatial cell of layer l in frame t.
    cell_sums_.assign(specs_.size(), std::vector<Eigen::Matrix3Xd>(frames.size()));
    for (std::size_t t = 0; t < frames.size(); ++t) {
      if (frames[t].width() != width_ || frames[t].height() != height_) {
        throw PreconditionError("clip frames must share one size");
      }
      const IntegralImage integral(frames[t]);
      for (std::size_t l = 0; l < specs_.size(); ++l) {
        const int gh = cells(height_, specs_[l].spatial_stride);
        const int gw = cells(width_, specs_[l].spatial_stride);
        Eigen::Matrix3Xd& sums = cell_sums_[l][t];
        sums.resize(3, gh * gw);
        for (int i = 0; i < gh; ++i) {
          const int y0 = edge(i, height_, gh), y1 = edge(i + 1, height_, gh);
          for (int j = 0; j < gw; ++j) {
            const int x0 = edge(j, width_, gw), x1 = edge(j + 1, width_, gw);
            sums.col(i * gw + j) = integral.block_sum(y0, y1, x0, x1);
          }
        }
      }
    }
  }

  ClipFeatureSet extract(int start) const override {
    if (start < 0 || start + clip_length_ > frames_) {
      throw PreconditionError("window " + std::to_string(start) + "+" + std::to_string(clip_length_) +
                              " exceeds " + std::to_string(frames_) + " frames");
    }
    const int length = clip_length_;
    ClipFeatureSet out;
    out.fingerprint = fingerprint_;
    for (std::size_t l = 0; l < specs_.size(); ++l) {
      const int gt = cells(length, specs_[l].temporal_stride);
      const int gh = cells(height_, specs_[l].spatial_stride);
      const int gw = cells(width_, specs_[l].spatial_stride);
      Eigen::MatrixXf pooled(3, gt * gh * gw);
      for (int k = 0; k < gt; ++k) {
        const int t0 = edge(k, length, gt), t1 = edge(k + 1, length, gt);
        for (int i = 0; i < gh; ++i) {
          const int y0 = edge(i, height_, gh), y1 = edge(i + 1, height_, gh);
          for (int j = 0; j < gw; ++j) {
            const int x0 = edge(j, width_, gw), x1 = edge(j + 1, width_, gw);
            Eigen::Vector3d sum = Eigen::Vector3d::Zero();
            for (int t = t0; t < t1; ++t) sum += cell_sums_[l][static_cast<std::size_t>(start + t)].col(i * gw + j);
            const double volume = static_cast<double>(t1 - t0) * (y1 - y0) * (x1 - x0);
            pooled.col((k * gh + i) * gw + j) = (sum / volume).cast<float>();
          }
        }
      }
      FeatureTensor t;
      t.shape = {specs_[l].channels, gt, gh, gw};
      t.values = (weights_[l] * pooled).colwise() + biases_[l];
      out.layers.push_back(std::move(t));
    }
    return out;
  }

 private:
  const std::vector<ToyLayerSpec>& specs_;
  const std::vector<Eigen::MatrixXf>& weights_;
  const std::vector<Eigen::VectorXf>& biases_;
  std::string fingerprint_;
  int clip_length_;
  int frames_;
  int height_ = 0;
  int width_ = 0;
  std::vector<std::vector<Eigen::Matrix3Xd>> cell_sums_;
};

}  // namespace

ClipFeatureSet ToyClipExtractor::extract(std::span<const RgbFrame> frames) const {
  if (static_cast<int>(frames.size()) != clip_length()) {
    throw PreconditionError("clip extractor needs exactly " + std::to_string(clip_length()) +
                            " frames, got " + std::to_string(frames.size()));
  }
  return windows(frames)->extract(0);
}

std::unique_ptr<ClipWindows> ToyClipExtractor::windows(std::span<const RgbFrame> frames) const {
  return std::make_unique<ToyClipWindows>(specs_, weights_, biases_, fingerprint_, clip_length(), frames);
}

PooledEmbedding ToyClipExtractor::embed(std::span<const RgbFrame> frames) const {
  if (frames.empty()) throw PreconditionError("cannot embed an empty video");
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  double count = 0.0;
  for (const auto& f : frames) {
    for (int y = 0; y < f.height(); ++y) {
      for (int x = 0; x < f.width(); ++x) {
        for (int c = 0; c < 3; ++c) mean[c] += f(y, x, c);
      }
    }
    count += static_cast<double>(f.width()) * f.height();
  }
  mean /= 255.0 * count;
  PooledEmbedding e;
  e.values = embed_weight_.cast<double>() * mean + embed_bias_.cast<double>();
  e.pooling = "spatiotemporal-mean";
  e.fingerprint = fingerprint_;
  return e;
}

}  // namespace vibench::features
