#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>

#include "vibench/core/labels.hpp"

namespace vibench::maskgen {

/// Requested setting for one mask attribute. kFree samples from the hull of
/// the low and high ranges.
enum class Target { kLow, kHigh, kFree };

std::string to_string(Target t);
Target parse_target(const std::string& s);

struct Range {
  double min = 0.0;
  double max = 0.0;

  bool valid() const { return min <= max && min >= 0.0; }
  double width() const { return max - min; }
  friend bool operator==(const Range&, const Range&) = default;
};

/// A parameter that has one range per attribute setting.
struct SettingRanges {
  Range low;
  Range high;

  Range pick(Target t) const;
  friend bool operator==(const SettingRanges&, const SettingRanges&) = default;
};

/// Disjoint low/high bands on a measured attribute; values strictly between
/// low_ceiling and high_floor receive no label.
struct Band {
  double low_ceiling = 0.0;
  double high_floor = 0.0;
  friend bool operator==(const Band&, const Band&) = default;
};

struct LabelThresholds {
  Band fg_size;
  Band fg_displacement;
  Band fg_pose_motion;

  /// Throws ValidationError when any band has low_ceiling >= high_floor.
  void validate() const;
  friend bool operator==(const LabelThresholds&, const LabelThresholds&) = default;
};

/// Which setting to generate for each of the three mask attributes.
struct MaskSettings {
  Target fg_displacement = Target::kFree;
  Target fg_pose_motion = Target::kFree;
  Target fg_size = Target::kFree;

  /// Labels implied by construction (kFree contributes none).
  LabelSet intended_labels() const;
  friend bool operator==(const MaskSettings&, const MaskSettings&) = default;
};

nlohmann::json to_json(const MaskSettings& s);
MaskSettings settings_from_json(const nlohmann::json& j);

/// Parameters of the procedural blob generator. Lengths are in pixels,
/// speeds in pixels per frame.
struct MaskGenConfig {
  int width = 832;
  int height = 480;
  int length = 60;

  Range control_points{4, 9};

  // fg_size: stroke width and maximum control-point-to-centroid distance.
  SettingRanges stroke_width;
  SettingRanges max_radius;
  // fg_displacement: speed of the whole mask at t = 0.
  SettingRanges initial_speed;
  // fg_pose_motion: per-frame probability and magnitude of a random
  // acceleration on each control point.
  SettingRanges perturb_probability;
  SettingRanges perturb_magnitude;

  double inward_acceleration = 1.0;
  /// Weight of the initial heading in the shape-drawing random walk.
  double direction_bias = 0.2;
  double reversal_probability = 0.5;

  LabelThresholds thresholds;

  /// Throws ValidationError for empty/negative ranges, probabilities outside
  /// [0, 1], radii below the stroke width or frames narrower than a stroke.
  void validate() const;

  friend bool operator==(const MaskGenConfig&, const MaskGenConfig&) = default;
};

nlohmann::json to_json(const MaskGenConfig& c);
MaskGenConfig config_from_json(const nlohmann::json& j);
MaskGenConfig load_config(const std::filesystem::path& path);
void save_config(const MaskGenConfig& config, const std::filesystem::path& path);

/// Built-in calibrated defaults (same values as configs/maskgen_default.json).
MaskGenConfig default_config();

}  // namespace vibench::maskgen
