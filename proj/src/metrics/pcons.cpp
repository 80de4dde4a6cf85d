#include "vibench/metrics/pcons.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vibench/maskgen/measure.hpp"

namespace vibench::metrics {
namespace {

void check_options(const PconsOptions& o) {
  if (o.patch_size < 1 || o.radius < 0) throw PreconditionError("patch size must be positive, radius non-negative");
}

}  // namespace

Eigen::Vector2i pcons_source_corner(const MaskFrame& mask, const PconsOptions& options) {
  check_options(options);
  const int w = static_cast<int>(mask.cols()), h = static_cast<int>(mask.rows());
  if (w < options.patch_size || h < options.patch_size) {
    throw PreconditionError("frame " + std::to_string(w) + "x" + std::to_string(h) + " is smaller than the " +
                            std::to_string(options.patch_size) + "-pixel patch");
  }
  const Eigen::Vector2d c = maskgen::mask_centroid(mask);
  const int half = options.patch_size / 2;
  const int cx = std::clamp(static_cast<int>(std::floor(c.x() + 0.5)), half, w - (options.patch_size - half));
  const int cy = std::clamp(static_cast<int>(std::floor(c.y() + 0.5)), half, h - (options.patch_size - half));
  return {cx - half, cy - half};
}

double pcons_pair(const RgbFrame& a, const RgbFrame& b, const Eigen::Vector2i& corner, const PconsOptions& options) {
  check_options(options);
  const int p = options.patch_size;
  if (a.width() != b.width() || a.height() != b.height()) throw PreconditionError("pcons frames differ in size");
  if (corner.x() < 0 || corner.y() < 0 || corner.x() + p > a.width() || corner.y() + p > a.height()) {
    throw PreconditionError("source patch is not inside the frame");
  }
  const auto& pa = a.interleaved();
  const auto& pb = b.interleaved();
  const auto src = pa.block(corner.y(), 3 * corner.x(), p, 3 * p);
  const int y_lo = std::max(0, corner.y() - options.radius);
  const int y_hi = std::min(a.height() - p, corner.y() + options.radius);
  const int x_lo = std::max(0, corner.x() - options.radius);
  const int x_hi = std::min(a.width() - p, corner.x() + options.radius);
  // The smallest squared error maximizes PSNR; stop at an exact match.
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (int y = y_lo; y <= y_hi && best > 0; ++y) {
    for (int x = x_lo; x <= x_hi && best > 0; ++x) {
      std::int64_t sse = 0;
      for (int r = 0; r < p && sse < best; ++r) {
        const std::uint8_t* ra = &src.coeffRef(r, 0);
        const std::uint8_t* rb = &pb.coeffRef(y + r, 3 * x);
        int row = 0;
        for (int k = 0; k < 3 * p; ++k) {
          const int d = int(ra[k]) - int(rb[k]);
          row += d * d;
        }
        sse += row;
      }
      best = std::min(best, sse);
    }
  }
  if (best == 0) return options.cap;
  const double mse = double(best) / (3.0 * p * p);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double pcons_video(const VideoClip& pred, const MaskSequence& mask, const PconsOptions& options) {
  check_aligned(pred, mask);
  if (pred.length() < 2) throw PreconditionError("PCons needs at least two frames");
  double sum = 0.0;
  for (int t = 0; t + 1 < pred.length(); ++t) {
    const auto i = static_cast<std::size_t>(t);
    sum += pcons_pair(pred.frames[i], pred.frames[i + 1], pcons_source_corner(mask.frames[i], options), options);
  }
  return sum / (pred.length() - 1);
}

}  // namespace vibench::metrics
