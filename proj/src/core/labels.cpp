#include "vibench/core/labels.hpp"

#include "vibench/core/error.hpp"

namespace vibench {

std::string to_string(Attribute a) {
  switch (a) {
    case Attribute::kCameraMotion: return "camera_motion";
    case Attribute::kBgSceneMotion: return "bg_scene_motion";
    case Attribute::kFgDisplacement: return "fg_displacement";
    case Attribute::kFgPoseMotion: return "fg_pose_motion";
    case Attribute::kFgSize: return "fg_size";
  }
  return "?";
}

std::string to_string(Setting s) { return s == Setting::kLow ? "low" : "high"; }

std::string to_string(Modality m) { return m == Modality::kVideo ? "video" : "mask"; }

std::string to_string(const AttributeLabel& label) {
  return to_string(label.attribute) + ":" + to_string(label.setting);
}

Attribute parse_attribute(std::string_view s) {
  for (Attribute a : kAllAttributes) {
    if (to_string(a) == s) return a;
  }
  throw ValidationError("unknown attribute '" + std::string(s) + "'");
}

Setting parse_setting(std::string_view s) {
  if (s == "low") return Setting::kLow;
  if (s == "high") return Setting::kHigh;
  throw ValidationError("unknown setting '" + std::string(s) + "'");
}

AttributeLabel parse_label(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw ValidationError("label '" + std::string(s) + "' is not of the form attribute:setting");
  }
  return {parse_attribute(s.substr(0, colon)), parse_setting(s.substr(colon + 1))};
}

std::vector<AttributeLabel> all_labels() {
  std::vector<AttributeLabel> out;
  for (Attribute a : kAllAttributes) {
    for (Setting s : kAllSettings) out.push_back({a, s});
  }
  return out;
}

void LabelSet::add(const AttributeLabel& label) {
  auto [it, inserted] = labels_.emplace(label.attribute, label.setting);
  if (!inserted && it->second != label.setting) {
    throw ValidationError("conflicting labels for " + to_string(label.attribute) + ": " +
                          to_string(it->second) + " vs " + to_string(label.setting));
  }
}

std::optional<Setting> LabelSet::get(Attribute a) const {
  auto it = labels_.find(a);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

bool LabelSet::contains(const AttributeLabel& label) const {
  auto s = get(label.attribute);
  return s && *s == label.setting;
}

std::vector<AttributeLabel> LabelSet::to_vector() const {
  std::vector<AttributeLabel> out;
  for (const auto& [a, s] : labels_) out.push_back({a, s});
  return out;
}

std::vector<std::string> LabelSet::to_strings() const {
  std::vector<std::string> out;
  for (const auto& l : to_vector()) out.push_back(to_string(l));
  return out;
}

LabelSet LabelSet::from_strings(const std::vector<std::string>& strings) {
  LabelSet set;
  for (const auto& s : strings) set.add(parse_label(s));
  return set;
}

void LabelSet::check_modality(Modality m) const {
  for (const auto& [a, s] : labels_) {
    if (modality_of(a) != m) {
      throw ValidationError("label " + to_string(AttributeLabel{a, s}) + " does not apply to a " +
                            to_string(m));
    }
  }
}

}  // namespace vibench
