#pragma once

#include <Eigen/Core>
#include <cmath>

#include "vibench/core/error.hpp"
#include "vibench/core/image.hpp"

namespace vibench::metrics {

/// Returned by psnr() for identical inputs.
inline constexpr double kPsnrCap = 100.0;

/// 10 log10(255^2 / MSE) over all elements of two equally shaped 8-bit
/// arrays; `cap` when they are identical.
template <typename A, typename B>
double psnr(const Eigen::DenseBase<A>& a, const Eigen::DenseBase<B>& b, double cap = kPsnrCap) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw PreconditionError("psnr shape mismatch: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  if (a.size() == 0) throw PreconditionError("psnr of empty arrays");
  std::int64_t sse = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const int d = int(a.derived().coeff(i, j)) - int(b.derived().coeff(i, j));
      sse += d * d;
    }
  }
  if (sse == 0) return cap;
  const double mse = double(sse) / double(a.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

struct PconsOptions {
  int patch_size = 50;
  /// Chebyshev radius of candidate centers around the source center.
  int radius = 20;
  double cap = kPsnrCap;
};

/// Top-left corner of the source patch for mask frame t: the mask centroid
/// rounded half-up, clipped so the patch lies inside the frame.
Eigen::Vector2i pcons_source_corner(const MaskFrame& mask, const PconsOptions& options = {});

/// Max PSNR between the source patch of frame `a` at `corner` and every
/// fully in-frame patch of frame `b` whose corner is within the Chebyshev
/// radius of `corner`.
double pcons_pair(const RgbFrame& a, const RgbFrame& b, const Eigen::Vector2i& corner,
                  const PconsOptions& options = {});

/// Mean of pcons_pair over the T - 1 consecutive pairs, with the source
/// patch of pair (t, t+1) centered on the mask centroid of frame t.
/// Throws PreconditionError on misalignment, frames smaller than the patch
/// or a single frame, and NumericError on an empty mask frame.
double pcons_video(const VideoClip& pred, const MaskSequence& mask, const PconsOptions& options = {});

}  // namespace vibench::metrics
