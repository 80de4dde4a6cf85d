#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "vibench/core/image.hpp"
#include "vibench/core/rng.hpp"
#include "vibench/maskgen/config.hpp"

namespace vibench::maskgen {

struct ControlPointState {
  Eigen::Vector2d position;  // (x, y) pixels
  Eigen::Vector2d velocity;  // pixels per frame
};

/// Parameters drawn for one mask from the config ranges.
struct SampledParameters {
  int control_points = 0;
  double stroke_width = 0.0;
  double max_radius = 0.0;
  double initial_speed = 0.0;
  double perturb_probability = 0.0;
  double perturb_magnitude = 0.0;
  bool reversed = false;
};

/// Fills a thick polyline with round caps: every pixel whose center lies
/// within width/2 of some segment is set to 1.
void draw_stroke(MaskFrame& frame, const std::vector<Eigen::Vector2d>& points, double width);

/// One dynamics step: move, perturb, pull toward the centroid, reflect at
/// the frame edges. Perturbation and inward pull are applied with their
/// mean over the control points removed, so only reflections change the
/// centroid velocity.
void step_control_points(std::vector<ControlPointState>& points, const SampledParameters& params,
                         double inward_acceleration, int width, int height, Engine& eng);

struct GeneratedMask {
  MaskSequence mask;
  SampledParameters params;
};

/// Pure function of (config, settings, seed). The returned mask carries the
/// labels implied by the settings.
GeneratedMask generate_mask_detailed(const MaskGenConfig& config, const MaskSettings& settings,
                                     std::uint64_t seed);

MaskSequence generate_mask(const MaskGenConfig& config, const MaskSettings& settings,
                           std::uint64_t seed);

}  // namespace vibench::maskgen
