#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "vibench/core/error.hpp"
#include "vibench/core/labels.hpp"

namespace vibench {

/// Row-major 2-D array; row index is y.
template <typename T>
using Plane = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// H x W occlusion map, values in {0, 1} (1 = occluded/unknown).
using MaskFrame = Plane<std::uint8_t>;

/// 8-bit RGB image stored interleaved as an H x 3W plane.
class RgbFrame {
 public:
  RgbFrame() = default;
  RgbFrame(int width, int height, std::uint8_t fill = 0)
      : data_(Plane<std::uint8_t>::Constant(height, 3 * width, fill)) {}
  explicit RgbFrame(Plane<std::uint8_t> interleaved) : data_(std::move(interleaved)) {}

  int width() const { return static_cast<int>(data_.cols() / 3); }
  int height() const { return static_cast<int>(data_.rows()); }

  std::uint8_t& operator()(int y, int x, int c) { return data_(y, 3 * x + c); }
  std::uint8_t operator()(int y, int x, int c) const { return data_(y, 3 * x + c); }

  const Plane<std::uint8_t>& interleaved() const { return data_; }
  Plane<std::uint8_t>& interleaved() { return data_; }

  std::uint8_t* data() { return data_.data(); }
  const std::uint8_t* data() const { return data_.data(); }

  friend bool operator==(const RgbFrame& a, const RgbFrame& b) {
    return a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() &&
           (a.data_ == b.data_).all();
  }

 private:
  Plane<std::uint8_t> data_;
};

/// Ordered frame sequence with identity. Frames share dimensions.
struct VideoClip {
  std::string id;
  std::vector<RgbFrame> frames;

  int length() const { return static_cast<int>(frames.size()); }
  int width() const { return frames.empty() ? 0 : frames.front().width(); }
  int height() const { return frames.empty() ? 0 : frames.front().height(); }

  /// Throws PreconditionError if frames disagree on dimensions.
  void check_uniform() const;

  friend bool operator==(const VideoClip& a, const VideoClip& b) {
    return a.id == b.id && a.frames == b.frames;
  }
};

/// Per-frame binary occlusion volume with its generation seed and labels.
struct MaskSequence {
  std::string id;
  std::vector<MaskFrame> frames;
  std::uint64_t seed = 0;
  LabelSet labels;

  int length() const { return static_cast<int>(frames.size()); }
  int width() const { return frames.empty() ? 0 : static_cast<int>(frames.front().cols()); }
  int height() const { return frames.empty() ? 0 : static_cast<int>(frames.front().rows()); }

  void check_uniform() const;
  /// Throws ValidationError if any value is outside {0, 1}.
  void check_binary() const;
  /// Same frames in reverse temporal order.
  MaskSequence reversed() const;

  friend bool operator==(const MaskSequence& a, const MaskSequence& b);
};

inline bool same_frames(const std::vector<MaskFrame>& a, const std::vector<MaskFrame>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols() || !(a[i] == b[i]).all()) {
      return false;
    }
  }
  return true;
}

inline bool operator==(const MaskSequence& a, const MaskSequence& b) {
  return a.id == b.id && a.seed == b.seed && a.labels == b.labels && same_frames(a.frames, b.frames);
}

inline void VideoClip::check_uniform() const {
  for (const auto& f : frames) {
    if (f.width() != width() || f.height() != height()) {
      throw PreconditionError("clip '" + id + "' has frames of differing dimensions");
    }
  }
}

inline void MaskSequence::check_uniform() const {
  for (const auto& f : frames) {
    if (f.cols() != width() || f.rows() != height()) {
      throw PreconditionError("mask '" + id + "' has frames of differing dimensions");
    }
  }
}

inline void MaskSequence::check_binary() const {
  for (const auto& f : frames) {
    if ((f > 1).any()) throw ValidationError("mask '" + id + "' is not binary");
  }
}

inline MaskSequence MaskSequence::reversed() const {
  MaskSequence out = *this;
  std::reverse(out.frames.begin(), out.frames.end());
  return out;
}

/// Throws PreconditionError unless the mask matches the clip in W, H and T.
inline void check_aligned(const VideoClip& video, const MaskSequence& mask) {
  if (video.length() != mask.length() || video.width() != mask.width() ||
      video.height() != mask.height()) {
    throw PreconditionError("video '" + video.id + "' (" + std::to_string(video.width()) + "x" +
                            std::to_string(video.height()) + "x" + std::to_string(video.length()) +
                            ") and mask '" + mask.id + "' (" + std::to_string(mask.width()) + "x" +
                            std::to_string(mask.height()) + "x" + std::to_string(mask.length()) +
                            ") are not aligned");
  }
}

}  // namespace vibench
