#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <vector>

#include "vibench/core/error.hpp"
#include "vibench/videoattr/affine.hpp"

namespace vibench::videoattr {

template <typename Scalar>
using Polygon = std::vector<Eigen::Matrix<Scalar, 2, 1>>;

/// Absolute shoelace area.
template <typename Scalar>
Scalar polygon_area(const Polygon<Scalar>& poly) {
  Scalar twice = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return std::abs(twice) / Scalar(2);
}

/// Sutherland-Hodgman clip of an arbitrary simple polygon against the
/// axis-aligned rectangle [0, width] x [0, height].
template <typename Scalar>
Polygon<Scalar> clip_to_rect(const Polygon<Scalar>& poly, Scalar width, Scalar height) {
  using Point = Eigen::Matrix<Scalar, 2, 1>;
  auto clip_edge = [](const Polygon<Scalar>& in, auto inside, auto intersect) {
    Polygon<Scalar> out;
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& cur = in[i];
      const Point& prev = in[(i + n - 1) % n];
      const bool cin = inside(cur);
      const bool pin = inside(prev);
      if (cin) {
        if (!pin) out.push_back(intersect(prev, cur));
        out.push_back(cur);
      } else if (pin) {
        out.push_back(intersect(prev, cur));
      }
    }
    return out;
  };
  auto at_x = [](const Point& a, const Point& b, Scalar x) {
    const Scalar t = (x - a.x()) / (b.x() - a.x());
    return Point(x, a.y() + t * (b.y() - a.y()));
  };
  auto at_y = [](const Point& a, const Point& b, Scalar y) {
    const Scalar t = (y - a.y()) / (b.y() - a.y());
    return Point(a.x() + t * (b.x() - a.x()), y);
  };
  Polygon<Scalar> out = poly;
  out = clip_edge(out, [](const Point& p) { return p.x() >= Scalar(0); },
                  [&](const Point& a, const Point& b) { return at_x(a, b, Scalar(0)); });
  if (out.empty()) return out;
  out = clip_edge(out, [&](const Point& p) { return p.x() <= width; },
                  [&](const Point& a, const Point& b) { return at_x(a, b, width); });
  if (out.empty()) return out;
  out = clip_edge(out, [](const Point& p) { return p.y() >= Scalar(0); },
                  [&](const Point& a, const Point& b) { return at_y(a, b, Scalar(0)); });
  if (out.empty()) return out;
  out = clip_edge(out, [&](const Point& p) { return p.y() <= height; },
                  [&](const Point& a, const Point& b) { return at_y(a, b, height); });
  return out;
}

/// Fraction of the width x height target canvas left uncovered after
/// warping a same-sized source frame by the transform. Computed exactly from
/// the warped frame polygon; throws PreconditionError for singular transforms.
template <typename Scalar>
Scalar invalid_fraction(const Affine2<Scalar>& transform, int width, int height) {
  if (width <= 0 || height <= 0) throw PreconditionError("canvas must be non-empty");
  const Scalar det = transform.template leftCols<2>().determinant();
  if (!(std::abs(det) > Scalar(1e-12))) throw PreconditionError("affine transform is not invertible");
  using Point = Eigen::Matrix<Scalar, 2, 1>;
  const Scalar w = width;
  const Scalar h = height;
  const Polygon<Scalar> corners = {Point(0, 0), Point(w, 0), Point(w, h), Point(0, h)};
  Polygon<Scalar> warped;
  for (const auto& c : corners) warped.push_back(apply(transform, c));
  const Scalar covered = polygon_area(clip_to_rect(warped, w, h));
  const Scalar fraction = Scalar(1) - covered / (w * h);
  return std::clamp(fraction, Scalar(0), Scalar(1));
}

}  // namespace vibench::videoattr
