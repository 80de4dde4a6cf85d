#include "vibench/maskgen/config.hpp"

#include <algorithm>
#include <fstream>

#include "vibench/core/error.hpp"

namespace vibench::maskgen {

using nlohmann::json;

std::string to_string(Target t) {
  switch (t) {
    case Target::kLow: return "low";
    case Target::kHigh: return "high";
    case Target::kFree: return "free";
  }
  return "?";
}

Target parse_target(const std::string& s) {
  if (s == "low") return Target::kLow;
  if (s == "high") return Target::kHigh;
  if (s == "free") return Target::kFree;
  throw ValidationError("unknown mask setting '" + s + "' (expected low, high or free)");
}

Range SettingRanges::pick(Target t) const {
  switch (t) {
    case Target::kLow: return low;
    case Target::kHigh: return high;
    case Target::kFree: return {std::min(low.min, high.min), std::max(low.max, high.max)};
  }
  return low;
}

void LabelThresholds::validate() const {
  auto check = [](const Band& b, const char* name) {
    if (!(b.low_ceiling < b.high_floor)) {
      throw ValidationError(std::string("overlapping label bands for ") + name +
                            ": low ceiling must be below high floor");
    }
  };
  check(fg_size, "fg_size");
  check(fg_displacement, "fg_displacement");
  check(fg_pose_motion, "fg_pose_motion");
}

LabelSet MaskSettings::intended_labels() const {
  LabelSet set;
  auto add = [&](Attribute a, Target t) {
    if (t == Target::kLow) set.add({a, Setting::kLow});
    if (t == Target::kHigh) set.add({a, Setting::kHigh});
  };
  add(Attribute::kFgDisplacement, fg_displacement);
  add(Attribute::kFgPoseMotion, fg_pose_motion);
  add(Attribute::kFgSize, fg_size);
  return set;
}

json to_json(const MaskSettings& s) {
  return {{"fg_displacement", to_string(s.fg_displacement)},
          {"fg_pose_motion", to_string(s.fg_pose_motion)},
          {"fg_size", to_string(s.fg_size)}};
}

MaskSettings settings_from_json(const json& j) {
  MaskSettings s;
  s.fg_displacement = parse_target(j.value("fg_displacement", "free"));
  s.fg_pose_motion = parse_target(j.value("fg_pose_motion", "free"));
  s.fg_size = parse_target(j.value("fg_size", "free"));
  return s;
}

namespace {

json range_json(const Range& r) { return json::array({r.min, r.max}); }

json ranges_json(const SettingRanges& r) {
  return {{"low", range_json(r.low)}, {"high", range_json(r.high)}};
}

json band_json(const Band& b) {
  return {{"low_ceiling", b.low_ceiling}, {"high_floor", b.high_floor}};
}

Range range_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected [min, max]", 0, where);
  return {j[0].get<double>(), j[1].get<double>()};
}

SettingRanges ranges_from(const json& j, const std::string& where) {
  if (!j.contains("low") || !j.contains("high")) throw ParseError("expected low/high", 0, where);
  return {range_from(j.at("low"), where + ".low"), range_from(j.at("high"), where + ".high")};
}

Band band_from(const json& j, const std::string& where) {
  try {
    return {j.at("low_ceiling").get<double>(), j.at("high_floor").get<double>()};
  } catch (const json::exception& e) {
    throw ParseError(e.what(), 0, where);
  }
}

void check_range(const Range& r, const std::string& name) {
  if (!r.valid()) throw ValidationError("range " + name + " is empty or negative");
}

void check_probability(const Range& r, const std::string& name) {
  check_range(r, name);
  if (r.max > 1.0) throw ValidationError("probability range " + name + " exceeds 1");
}

}  // namespace

void MaskGenConfig::validate() const {
  if (width < 1 || height < 1 || length < 1) {
    throw ValidationError("mask dimensions and length must be positive");
  }
  check_range(control_points, "control_points");
  if (control_points.min < 1) throw ValidationError("need at least one control point");
  for (const auto& [r, name] : {std::pair{&stroke_width, "stroke_width"}, {&max_radius, "max_radius"},
                                {&initial_speed, "initial_speed"},
                                {&perturb_magnitude, "perturb_magnitude"}}) {
    check_range(r->low, std::string(name) + ".low");
    check_range(r->high, std::string(name) + ".high");
  }
  check_probability(perturb_probability.low, "perturb_probability.low");
  check_probability(perturb_probability.high, "perturb_probability.high");
  if (stroke_width.low.min < 2.0 || stroke_width.high.min < 2.0) {
    throw ValidationError("stroke width must be at least 2 px so every stroke covers a pixel");
  }
  if (max_radius.low.min < stroke_width.low.max || max_radius.high.min < stroke_width.high.max) {
    throw ValidationError("infeasible config: max radius smaller than stroke width");
  }
  const double widest = std::max(stroke_width.low.max, stroke_width.high.max);
  if (width < widest || height < widest) {
    throw ValidationError("frame smaller than the stroke width upper bound");
  }
  if (inward_acceleration < 0.0) throw ValidationError("inward acceleration must be non-negative");
  if (direction_bias < 0.0 || direction_bias > 1.0) {
    throw ValidationError("direction bias must lie in [0, 1]");
  }
  if (reversal_probability < 0.0 || reversal_probability > 1.0) {
    throw ValidationError("reversal probability must lie in [0, 1]");
  }
  thresholds.validate();
}

json to_json(const MaskGenConfig& c) {
  return {{"width", c.width},
          {"height", c.height},
          {"length", c.length},
          {"control_points", range_json(c.control_points)},
          {"stroke_width", ranges_json(c.stroke_width)},
          {"max_radius", ranges_json(c.max_radius)},
          {"initial_speed", ranges_json(c.initial_speed)},
          {"perturb_probability", ranges_json(c.perturb_probability)},
          {"perturb_magnitude", ranges_json(c.perturb_magnitude)},
          {"inward_acceleration", c.inward_acceleration},
          {"direction_bias", c.direction_bias},
          {"reversal_probability", c.reversal_probability},
          {"thresholds",
           {{"fg_size", band_json(c.thresholds.fg_size)},
            {"fg_displacement", band_json(c.thresholds.fg_displacement)},
            {"fg_pose_motion", band_json(c.thresholds.fg_pose_motion)}}}};
}

MaskGenConfig config_from_json(const json& j) {
  MaskGenConfig c = default_config();
  try {
    c.width = j.value("width", c.width);
    c.height = j.value("height", c.height);
    c.length = j.value("length", c.length);
    if (j.contains("control_points")) c.control_points = range_from(j.at("control_points"), "control_points");
    if (j.contains("stroke_width")) c.stroke_width = ranges_from(j.at("stroke_width"), "stroke_width");
    if (j.contains("max_radius")) c.max_radius = ranges_from(j.at("max_radius"), "max_radius");
    if (j.contains("initial_speed")) c.initial_speed = ranges_from(j.at("initial_speed"), "initial_speed");
    if (j.contains("perturb_probability")) {
      c.perturb_probability = ranges_from(j.at("perturb_probability"), "perturb_probability");
    }
    if (j.contains("perturb_magnitude")) {
      c.perturb_magnitude = ranges_from(j.at("perturb_magnitude"), "perturb_magnitude");
    }
    c.inward_acceleration = j.value("inward_acceleration", c.inward_acceleration);
    c.direction_bias = j.value("direction_bias", c.direction_bias);
    c.reversal_probability = j.value("reversal_probability", c.reversal_probability);
    if (j.contains("thresholds")) {
      const auto& t = j.at("thresholds");
      c.thresholds.fg_size = band_from(t.at("fg_size"), "thresholds.fg_size");
      c.thresholds.fg_displacement = band_from(t.at("fg_displacement"), "thresholds.fg_displacement");
      c.thresholds.fg_pose_motion = band_from(t.at("fg_pose_motion"), "thresholds.fg_pose_motion");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad mask generator config: ") + e.what());
  }
  c.validate();
  return c;
}

MaskGenConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed config: ") + e.what(), 0, path.string());
  }
  return config_from_json(j);
}

void save_config(const MaskGenConfig& config, const std::filesystem::path& path) {
  config.validate();
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(config).dump(2) << "\n";
}

MaskGenConfig default_config() {
  MaskGenConfig c;
  c.stroke_width = {{12, 18}, {36, 60}};
  c.max_radius = {{20, 40}, {110, 170}};
  c.initial_speed = {{0.0, 0.4}, {5.5, 9.0}};
  c.perturb_probability = {{0.0, 0.02}, {0.7, 1.0}};
  c.perturb_magnitude = {{0.0, 0.3}, {1.5, 3.0}};
  c.inward_acceleration = 1.0;
  c.thresholds.fg_size = {0.017895062308026177, 0.02910787989950588};
  c.thresholds.fg_displacement = {0.004232803840915256, 0.004892718860521232};
  c.thresholds.fg_pose_motion = {0.09340892071529164, 0.09953368241035444};
  return c;
}

}  // namespace vibench::maskgen
