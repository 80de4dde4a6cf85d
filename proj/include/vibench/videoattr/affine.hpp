#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "vibench/core/image.hpp"
#include "vibench/core/rng.hpp"

namespace vibench::videoattr {

/// Maps homogeneous (x, y, 1) in one frame to (x', y') in another.
template <typename Scalar>
using Affine2 = Eigen::Matrix<Scalar, 2, 3>;
using AffineTransform = Affine2<double>;

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> apply(const Affine2<Scalar>& t, const Eigen::Matrix<Scalar, 2, 1>& p) {
  return t.template leftCols<2>() * p + t.col(2);
}

struct RansacOptions {
  double inlier_threshold = 3.0;  // pixels, in the full-resolution frame
  double confidence = 0.999;
  int max_iterations = 2000;
  int min_inliers = 10;
  double ratio_test = 0.75;
  /// Frames are downscaled so their longer side is at most this before
  /// feature detection; the transform is returned in full-resolution pixels.
  int max_dimension = 640;
};

struct Correspondences {
  std::vector<Eigen::Vector2d> source;
  std::vector<Eigen::Vector2d> target;
};

struct AffineEstimate {
  AffineTransform transform;
  int inliers = 0;
  int matches = 0;
};

/// Least-squares affine fit over the given correspondences (needs >= 3).
AffineTransform fit_affine(const std::vector<Eigen::Vector2d>& source,
                           const std::vector<Eigen::Vector2d>& target);

/// RANSAC over minimal 3-point samples followed by a least-squares refit on
/// the consensus set. Returns nullopt when fewer than min_inliers agree.
std::optional<AffineEstimate> ransac_affine(const Correspondences& matches, const RansacOptions& options,
                                            Engine& eng);

/// Detected keypoints and descriptors of one frame, reusable across pairs.
class FrameFeatures {
 public:
  FrameFeatures() = default;
  FrameFeatures(const RgbFrame& frame, const RansacOptions& options);

  std::size_t size() const { return points_.size(); }
  int width() const { return width_; }
  int height() const { return height_; }

 private:
  friend Correspondences match_features(const FrameFeatures&, const FrameFeatures&, double);
  std::vector<Eigen::Vector2d> points_;  // full-resolution coordinates
  Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> descriptors_;
  int width_ = 0;
  int height_ = 0;
};

/// Nearest-neighbour descriptor matches from a to b passing Lowe's ratio test.
Correspondences match_features(const FrameFeatures& a, const FrameFeatures& b, double ratio);

/// Transform mapping coordinates of a into b, or nullopt on too little
/// consensus (e.g. untextured or unrelated frames). Byte-identical frames
/// short-circuit to the exact identity.
std::optional<AffineEstimate> estimate_affine(const RgbFrame& a, const RgbFrame& b,
                                              const RansacOptions& options, Engine& eng);

}  // namespace vibench::videoattr
