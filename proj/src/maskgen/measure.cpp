#include "vibench/maskgen/measure.hpp"

#include <algorithm>
#include <cmath>

#include "vibench/core/error.hpp"

namespace vibench::maskgen {
namespace {

struct FrameStats {
  long area = 0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  // Inclusive bounding box of occluded pixels.
  int x0 = 0, x1 = -1, y0 = 0, y1 = -1;
};

FrameStats stats_of(const MaskFrame& frame) {
  FrameStats s;
  s.x0 = static_cast<int>(frame.cols());
  s.y0 = static_cast<int>(frame.rows());
  double sx = 0.0, sy = 0.0;
  for (int y = 0; y < frame.rows(); ++y) {
    const std::uint8_t* row = frame.row(y).data();
    for (int x = 0; x < frame.cols(); ++x) {
      if (row[x]) {
        ++s.area;
        sx += x;
        sy += y;
        s.x0 = std::min(s.x0, x);
        s.x1 = std::max(s.x1, x);
        s.y0 = std::min(s.y0, y);
        s.y1 = std::max(s.y1, y);
      }
    }
  }
  if (s.area > 0) s.centroid = {sx / s.area, sy / s.area};
  return s;
}

// Symmetric difference restricted to the union of both bounding boxes.
long symdiff_boxed(const MaskFrame& a, const FrameStats& sa, const MaskFrame& b,
                   const FrameStats& sb, int dx, int dy) {
  const int h = static_cast<int>(a.rows());
  const int w = static_cast<int>(a.cols());
  const int x0 = std::max(0, std::min(sa.x0, sb.x0 + dx));
  const int x1 = std::min(w - 1, std::max(sa.x1, sb.x1 + dx));
  const int y0 = std::max(0, std::min(sa.y0, sb.y0 + dy));
  const int y1 = std::min(h - 1, std::max(sa.y1, sb.y1 + dy));
  long count = 0;
  long inside_b = 0;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const int bx = x - dx;
      const int by = y - dy;
      const bool vb = bx >= 0 && bx < w && by >= 0 && by < h && b(by, bx);
      if (vb) ++inside_b;
      if (static_cast<bool>(a(y, x)) != vb) ++count;
    }
  }
  // Pixels of b that the shift pushed outside the frame still count as differences.
  return count + (sb.area - inside_b);
}

}  // namespace

Eigen::Vector2d mask_centroid(const MaskFrame& frame) {
  const auto s = stats_of(frame);
  if (s.area == 0) throw NumericError("centroid of an empty mask frame is undefined");
  return s.centroid;
}

long symmetric_difference(const MaskFrame& a, const MaskFrame& b, int dx, int dy) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw PreconditionError("symmetric difference of frames with different sizes");
  }
  const auto sa = stats_of(a);
  const auto sb = stats_of(b);
  if (sa.area == 0 && sb.area == 0) return 0;
  FrameStats ua = sa, ub = sb;
  if (sa.area == 0) ua = {0, {}, sb.x0 + dx, sb.x1 + dx, sb.y0 + dy, sb.y1 + dy};
  if (sb.area == 0) ub = {0, {}, sa.x0 - dx, sa.x1 - dx, sa.y0 - dy, sa.y1 - dy};
  return symdiff_boxed(a, ua, b, ub, dx, dy);
}

MaskAttributeMeasurement measure_attributes(const MaskSequence& mask) {
  if (mask.frames.empty()) throw PreconditionError("cannot measure an empty mask sequence");
  mask.check_uniform();
  const double w = mask.width();
  const double h = mask.height();
  const double diagonal = std::sqrt(w * w + h * h);

  std::vector<FrameStats> stats;
  stats.reserve(mask.frames.size());
  for (std::size_t t = 0; t < mask.frames.size(); ++t) {
    stats.push_back(stats_of(mask.frames[t]));
    if (stats.back().area == 0) {
      throw NumericError("mask '" + mask.id + "' frame " + std::to_string(t) +
                         " has no occluded pixels");
    }
  }

  MaskAttributeMeasurement m;
  double total_area = 0.0;
  for (const auto& s : stats) total_area += static_cast<double>(s.area);
  const double mean_area = total_area / static_cast<double>(stats.size());
  m.fg_size = mean_area / (w * h);

  const std::size_t pairs = stats.size() - 1;
  if (pairs == 0) return m;
  double displacement = 0.0;
  double symdiff = 0.0;
  for (std::size_t t = 0; t < pairs; ++t) {
    const auto& a = stats[t];
    const auto& b = stats[t + 1];
    displacement += (b.centroid - a.centroid).norm();
    // Integer shift that moves b's centroid onto a's.
    const int dx = static_cast<int>(std::lround(a.centroid.x() - b.centroid.x()));
    const int dy = static_cast<int>(std::lround(a.centroid.y() - b.centroid.y()));
    symdiff += static_cast<double>(symdiff_boxed(mask.frames[t], a, mask.frames[t + 1], b, dx, dy));
  }
  m.fg_displacement = displacement / static_cast<double>(pairs) / diagonal;
  m.fg_pose_motion = symdiff / static_cast<double>(pairs) / mean_area;
  return m;
}

LabelSet label_mask(const MaskAttributeMeasurement& m, const LabelThresholds& thresholds) {
  thresholds.validate();
  LabelSet labels;
  auto apply = [&](Attribute a, double value, const Band& band) {
    if (value <= band.low_ceiling) labels.add({a, Setting::kLow});
    else if (value >= band.high_floor) labels.add({a, Setting::kHigh});
  };
  apply(Attribute::kFgDisplacement, m.fg_displacement, thresholds.fg_displacement);
  apply(Attribute::kFgPoseMotion, m.fg_pose_motion, thresholds.fg_pose_motion);
  apply(Attribute::kFgSize, m.fg_size, thresholds.fg_size);
  return labels;
}

}  // namespace vibench::maskgen
