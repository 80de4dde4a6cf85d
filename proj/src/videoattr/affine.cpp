#include "vibench/videoattr/affine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <opencv2/features2d.hpp>
#include <opencv2/imgproc.hpp>

#include "vibench/core/image_io.hpp"

namespace vibench::videoattr {

AffineTransform fit_affine(const std::vector<Eigen::Vector2d>& source,
                           const std::vector<Eigen::Vector2d>& target) {
  if (source.size() != target.size() || source.size() < 3) {
    throw PreconditionError("affine fit needs at least three correspondences");
  }
  const auto n = static_cast<Eigen::Index>(source.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::MatrixXd rhs(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    design.row(i) << source[i].x(), source[i].y(), 1.0;
    rhs.row(i) = target[i].transpose();
  }
  const Eigen::Matrix<double, 3, 2> solution = design.colPivHouseholderQr().solve(rhs);
  return solution.transpose();
}

namespace {

// Exact affine through three correspondences; nullopt for (near-)collinear samples.
std::optional<AffineTransform> solve_minimal(const Eigen::Vector2d* src, const Eigen::Vector2d* dst) {
  Eigen::Matrix3d design;
  Eigen::Matrix<double, 3, 2> rhs;
  for (int k = 0; k < 3; ++k) {
    design.row(k) << src[k].x(), src[k].y(), 1.0;
    rhs.row(k) = dst[k].transpose();
  }
  const double det = design.determinant();
  if (std::abs(det) < 1e-6) return std::nullopt;
  return AffineTransform((design.inverse() * rhs).transpose());
}

int count_inliers(const Correspondences& m, const AffineTransform& t, double threshold,
                  std::vector<int>* indices) {
  const double t2 = threshold * threshold;
  int count = 0;
  if (indices) indices->clear();
  for (std::size_t i = 0; i < m.source.size(); ++i) {
    if ((apply(t, m.source[i]) - m.target[i]).squaredNorm() <= t2) {
      ++count;
      if (indices) indices->push_back(static_cast<int>(i));
    }
  }
  return count;
}

cv::Mat gray_mat(const RgbFrame& frame, double scale) {
  const Plane<std::uint8_t> gray = to_gray(frame);
  cv::Mat full(static_cast<int>(gray.rows()), static_cast<int>(gray.cols()), CV_8UC1,
               const_cast<std::uint8_t*>(gray.data()));
  cv::Mat out;
  if (scale < 1.0) {
    cv::resize(full, out, cv::Size(), scale, scale, cv::INTER_AREA);
  } else {
    out = full.clone();
  }
  return out;
}

}  // namespace

std::optional<AffineEstimate> ransac_affine(const Correspondences& matches, const RansacOptions& options,
                                            Engine& eng) {
  const int n = static_cast<int>(matches.source.size());
  if (n < std::max(3, options.min_inliers)) return std::nullopt;

  std::uniform_int_distribution<int> pick(0, n - 1);
  AffineTransform best;
  int best_count = -1;
  int iterations = options.max_iterations;
  for (int it = 0; it < iterations; ++it) {
    int idx[3];
    idx[0] = pick(eng);
    do idx[1] = pick(eng); while (idx[1] == idx[0]);
    do idx[2] = pick(eng); while (idx[2] == idx[0] || idx[2] == idx[1]);
    const Eigen::Vector2d src[3] = {matches.source[idx[0]], matches.source[idx[1]], matches.source[idx[2]]};
    const Eigen::Vector2d dst[3] = {matches.target[idx[0]], matches.target[idx[1]], matches.target[idx[2]]};
    const auto model = solve_minimal(src, dst);
    if (!model) continue;
    const int count = count_inliers(matches, *model, options.inlier_threshold, nullptr);
    if (count > best_count) {
      best_count = count;
      best = *model;
      // Adaptive stopping: iterations needed to hit confidence at this inlier ratio.
      const double ratio = static_cast<double>(count) / n;
      const double p_good = ratio * ratio * ratio;
      if (p_good >= 1.0) {
        iterations = it + 1;
      } else if (p_good > 0.0) {
        const double needed = std::log(1.0 - options.confidence) / std::log(1.0 - p_good);
        iterations = std::min(options.max_iterations, static_cast<int>(std::ceil(needed)));
      }
    }
  }
  if (best_count < options.min_inliers) return std::nullopt;

  std::vector<int> inliers;
  count_inliers(matches, best, options.inlier_threshold, &inliers);
  for (int refit = 0; refit < 3; ++refit) {
    std::vector<Eigen::Vector2d> src, dst;
    for (int i : inliers) {
      src.push_back(matches.source[static_cast<std::size_t>(i)]);
      dst.push_back(matches.target[static_cast<std::size_t>(i)]);
    }
    const AffineTransform refined = fit_affine(src, dst);
    std::vector<int> next;
    count_inliers(matches, refined, options.inlier_threshold, &next);
    if (next.size() < inliers.size()) break;
    best = refined;
    if (next == inliers) break;
    inliers = std::move(next);
  }
  if (static_cast<int>(inliers.size()) < options.min_inliers) return std::nullopt;
  return AffineEstimate{best, static_cast<int>(inliers.size()), n};
}

FrameFeatures::FrameFeatures(const RgbFrame& frame, const RansacOptions& options)
    : width_(frame.width()), height_(frame.height()) {
  const int longest = std::max(frame.width(), frame.height());
  const double scale =
      (options.max_dimension > 0 && longest > options.max_dimension)
          ? static_cast<double>(options.max_dimension) / longest
          : 1.0;
  const cv::Mat gray = gray_mat(frame, scale);
  auto sift = cv::SIFT::create();
  std::vector<cv::KeyPoint> keypoints;
  cv::Mat descriptors;
  sift->detectAndCompute(gray, cv::noArray(), keypoints, descriptors);
  points_.reserve(keypoints.size());
  for (const auto& kp : keypoints) points_.emplace_back(kp.pt.x / scale, kp.pt.y / scale);
  descriptors_.resize(descriptors.rows, descriptors.cols);
  for (int r = 0; r < descriptors.rows; ++r) {
    std::copy_n(descriptors.ptr<float>(r), descriptors.cols, descriptors_.row(r).data());
  }
}

Correspondences match_features(const FrameFeatures& a, const FrameFeatures& b, double ratio) {
  Correspondences out;
  if (a.size() == 0 || b.size() < 2) return out;
  cv::Mat da(static_cast<int>(a.descriptors_.rows()), static_cast<int>(a.descriptors_.cols()), CV_32F,
             const_cast<float*>(a.descriptors_.data()));
  cv::Mat db(static_cast<int>(b.descriptors_.rows()), static_cast<int>(b.descriptors_.cols()), CV_32F,
             const_cast<float*>(b.descriptors_.data()));
  cv::BFMatcher matcher(cv::NORM_L2);
  std::vector<std::vector<cv::DMatch>> knn;
  matcher.knnMatch(da, db, knn, 2);
  for (const auto& m : knn) {
    if (m.size() < 2) continue;
    if (m[0].distance < ratio * m[1].distance) {
      out.source.push_back(a.points_[static_cast<std::size_t>(m[0].queryIdx)]);
      out.target.push_back(b.points_[static_cast<std::size_t>(m[0].trainIdx)]);
    }
  }
  return out;
}

std::optional<AffineEstimate> estimate_affine(const RgbFrame& a, const RgbFrame& b,
                                              const RansacOptions& options, Engine& eng) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw PreconditionError("affine estimation needs frames of equal size");
  }
  if (a == b) {
    AffineEstimate identity;
    identity.transform = AffineTransform::Identity();
    return identity;
  }
  const FrameFeatures fa(a, options);
  const FrameFeatures fb(b, options);
  return ransac_affine(match_features(fa, fb, options.ratio_test), options, eng);
}

}  // namespace vibench::videoattr
