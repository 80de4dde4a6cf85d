#include "vibench/maskgen/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vibench::maskgen {
namespace {

Eigen::Vector2d random_unit(Engine& eng) {
  const double angle = uniform(eng, 0.0, 2.0 * std::numbers::pi);
  return {std::cos(angle), std::sin(angle)};
}

Eigen::Vector2d centroid_of(const std::vector<ControlPointState>& points) {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : points) c += p.position;
  return c / static_cast<double>(points.size());
}

void reflect(double& pos, double& vel, double upper) {
  if (upper <= 0.0) {
    pos = 0.0;
    return;
  }
  if (pos < 0.0) {
    pos = -pos;
    vel = std::abs(vel);
  } else if (pos > upper) {
    pos = 2.0 * upper - pos;
    vel = -std::abs(vel);
  }
  pos = std::clamp(pos, 0.0, upper);
}

void draw_disc(MaskFrame& frame, const Eigen::Vector2d& c, double r) {
  const int h = static_cast<int>(frame.rows());
  const int w = static_cast<int>(frame.cols());
  const int x0 = std::max(0, static_cast<int>(std::floor(c.x() - r)));
  const int x1 = std::min(w - 1, static_cast<int>(std::ceil(c.x() + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(c.y() - r)));
  const int y1 = std::min(h - 1, static_cast<int>(std::ceil(c.y() + r)));
  const double r2 = r * r;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - c.x();
      const double dy = y - c.y();
      if (dx * dx + dy * dy <= r2) frame(y, x) = 1;
    }
  }
}

void draw_segment(MaskFrame& frame, const Eigen::Vector2d& a, const Eigen::Vector2d& b, double r) {
  const Eigen::Vector2d d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) {
    draw_disc(frame, a, r);
    return;
  }
  const int h = static_cast<int>(frame.rows());
  const int w = static_cast<int>(frame.cols());
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x(), b.x()) - r)));
  const int x1 = std::min(w - 1, static_cast<int>(std::ceil(std::max(a.x(), b.x()) + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y(), b.y()) - r)));
  const int y1 = std::min(h - 1, static_cast<int>(std::ceil(std::max(a.y(), b.y()) + r)));
  const double r2 = r * r;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Eigen::Vector2d p(x, y);
      const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
      if ((p - (a + t * d)).squaredNorm() <= r2) frame(y, x) = 1;
    }
  }
}

SampledParameters sample_parameters(const MaskGenConfig& config, const MaskSettings& settings,
                                    Engine& eng) {
  auto draw = [&](const Range& r) { return uniform(eng, r.min, std::nextafter(r.max, r.max + 1.0)); };
  SampledParameters p;
  p.control_points = static_cast<int>(std::floor(draw(config.control_points)));
  p.control_points = std::clamp(p.control_points, static_cast<int>(config.control_points.min),
                                static_cast<int>(config.control_points.max));
  // Width and radius are drawn from the same setting so the pair stays feasible.
  const Target size = settings.fg_size == Target::kFree
                          ? (bernoulli(eng, 0.5) ? Target::kHigh : Target::kLow)
                          : settings.fg_size;
  p.stroke_width = draw(config.stroke_width.pick(size));
  p.max_radius = draw(config.max_radius.pick(size));
  p.initial_speed = draw(config.initial_speed.pick(settings.fg_displacement));
  p.perturb_probability =
      std::min(1.0, draw(config.perturb_probability.pick(settings.fg_pose_motion)));
  p.perturb_magnitude = draw(config.perturb_magnitude.pick(settings.fg_pose_motion));
  return p;
}

std::vector<ControlPointState> initial_shape(const MaskGenConfig& config,
                                             const SampledParameters& p, Engine& eng) {
  const double w = config.width - 1.0;
  const double h = config.height - 1.0;
  const double margin_x = std::min(p.max_radius, w / 2.0);
  const double margin_y = std::min(p.max_radius, h / 2.0);
  Eigen::Vector2d start(uniform(eng, margin_x, std::nextafter(w - margin_x, w)),
                        uniform(eng, margin_y, std::nextafter(h - margin_y, h)));

  // Random walk whose steps lean toward an initial heading by direction_bias.
  const Eigen::Vector2d heading = random_unit(eng);
  std::vector<Eigen::Vector2d> positions{start};
  for (int i = 1; i < p.control_points; ++i) {
    Eigen::Vector2d dir = config.direction_bias * heading + (1.0 - config.direction_bias) * random_unit(eng);
    if (dir.norm() < 1e-9) dir = heading;
    const double step = uniform(eng, 0.4, 1.0) * p.max_radius;
    positions.push_back(positions.back() + step * dir.normalized());
  }

  // Keep the shape within max_radius of its centroid, then recentre on the start.
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& q : positions) c += q;
  c /= static_cast<double>(positions.size());
  for (auto& q : positions) {
    Eigen::Vector2d off = q - c;
    if (off.norm() > p.max_radius) off *= p.max_radius / off.norm();
    q = start + off;
    q.x() = std::clamp(q.x(), 0.0, w);
    q.y() = std::clamp(q.y(), 0.0, h);
  }

  const Eigen::Vector2d velocity = p.initial_speed * random_unit(eng);
  std::vector<ControlPointState> points;
  for (const auto& q : positions) points.push_back({q, velocity});
  return points;
}

MaskFrame render(const std::vector<ControlPointState>& points, double stroke_width, int width,
                 int height) {
  MaskFrame frame = MaskFrame::Zero(height, width);
  std::vector<Eigen::Vector2d> positions;
  positions.reserve(points.size());
  for (const auto& p : points) positions.push_back(p.position);
  draw_stroke(frame, positions, stroke_width);
  return frame;
}

}  // namespace

void draw_stroke(MaskFrame& frame, const std::vector<Eigen::Vector2d>& points, double width) {
  if (points.empty()) return;
  const double r = width / 2.0;
  if (points.size() == 1) {
    draw_disc(frame, points.front(), r);
    return;
  }
  for (std::size_t i = 0; i + 1 < points.size(); ++i) draw_segment(frame, points[i], points[i + 1], r);
}

void step_control_points(std::vector<ControlPointState>& points, const SampledParameters& params,
                         double inward_acceleration, int width, int height, Engine& eng) {
  for (auto& p : points) p.position += p.velocity;
  std::vector<Eigen::Vector2d> force(points.size(), Eigen::Vector2d::Zero());
  for (auto& f : force) {
    if (bernoulli(eng, params.perturb_probability)) f += params.perturb_magnitude * random_unit(eng);
  }
  const Eigen::Vector2d c = centroid_of(points);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::Vector2d to_center = c - points[i].position;
    const double dist = to_center.norm();
    if (dist > params.max_radius && dist > 0.0) force[i] += inward_acceleration * to_center / dist;
  }
  // Internal forces deform the shape without accelerating its centroid.
  Eigen::Vector2d mean_force = Eigen::Vector2d::Zero();
  for (const auto& f : force) mean_force += f;
  mean_force /= static_cast<double>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) points[i].velocity += force[i] - mean_force;
  for (auto& p : points) {
    reflect(p.position.x(), p.velocity.x(), width - 1.0);
    reflect(p.position.y(), p.velocity.y(), height - 1.0);
  }
}

GeneratedMask generate_mask_detailed(const MaskGenConfig& config, const MaskSettings& settings,
                                     std::uint64_t seed) {
  config.validate();
  for (int attempt = 0;; ++attempt) {
    Engine eng = derive_stream(seed, attempt == 0 ? std::string("maskgen")
                                                  : "maskgen-retry-" + std::to_string(attempt));
    GeneratedMask out;
    out.params = sample_parameters(config, settings, eng);
    auto points = initial_shape(config, out.params, eng);

    bool empty_frame = false;
    out.mask.frames.reserve(static_cast<std::size_t>(config.length));
    for (int t = 0; t < config.length; ++t) {
      if (t > 0) {
        step_control_points(points, out.params, config.inward_acceleration, config.width,
                            config.height, eng);
      }
      out.mask.frames.push_back(render(points, out.params.stroke_width, config.width, config.height));
      if (!(out.mask.frames.back() != 0).any()) empty_frame = true;
    }
    if (empty_frame) {
      if (attempt >= 16) throw NumericError("mask generation keeps producing empty frames");
      continue;
    }
    out.params.reversed = bernoulli(eng, config.reversal_probability);
    if (out.params.reversed) std::reverse(out.mask.frames.begin(), out.mask.frames.end());
    out.mask.seed = seed;
    out.mask.labels = settings.intended_labels();
    return out;
  }
}

MaskSequence generate_mask(const MaskGenConfig& config, const MaskSettings& settings,
                           std::uint64_t seed) {
  return generate_mask_detailed(config, settings, seed).mask;
}

}  // namespace vibench::maskgen
