#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vibench {

enum class Attribute { kCameraMotion, kBgSceneMotion, kFgDisplacement, kFgPoseMotion, kFgSize };
enum class Setting { kLow, kHigh };
enum class Modality { kVideo, kMask };

inline constexpr std::array<Attribute, 5> kAllAttributes = {
    Attribute::kCameraMotion, Attribute::kBgSceneMotion, Attribute::kFgDisplacement,
    Attribute::kFgPoseMotion, Attribute::kFgSize};
inline constexpr std::array<Setting, 2> kAllSettings = {Setting::kLow, Setting::kHigh};

/// camera_motion and bg_scene_motion describe source videos; fg_* describe masks.
constexpr Modality modality_of(Attribute a) {
  return (a == Attribute::kCameraMotion || a == Attribute::kBgSceneMotion) ? Modality::kVideo
                                                                           : Modality::kMask;
}

struct AttributeLabel {
  Attribute attribute;
  Setting setting;

  friend auto operator<=>(const AttributeLabel&, const AttributeLabel&) = default;
};

std::string to_string(Attribute a);
std::string to_string(Setting s);
std::string to_string(Modality m);
std::string to_string(const AttributeLabel& label);  // "camera_motion:low"

Attribute parse_attribute(std::string_view s);
Setting parse_setting(std::string_view s);
AttributeLabel parse_label(std::string_view s);

/// All ten labels in canonical order (attribute-major, low before high).
std::vector<AttributeLabel> all_labels();

/// At most one setting per attribute, enforced structurally.
class LabelSet {
 public:
  LabelSet() = default;

  /// Adds a label. Re-adding the same label is a no-op; a different setting
  /// for an already-labeled attribute throws ValidationError.
  void add(const AttributeLabel& label);

  std::optional<Setting> get(Attribute a) const;
  bool contains(const AttributeLabel& label) const;
  bool empty() const { return labels_.empty(); }
  std::size_t size() const { return labels_.size(); }

  std::vector<AttributeLabel> to_vector() const;
  std::vector<std::string> to_strings() const;
  static LabelSet from_strings(const std::vector<std::string>& strings);

  /// Throws ValidationError when any label belongs to the other modality.
  void check_modality(Modality m) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::map<Attribute, Setting> labels_;
};

}  // namespace vibench
