#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vibench/core/image.hpp"
#include "vibench/core/labels.hpp"

namespace vibench::corpus {

namespace fs = std::filesystem;

inline constexpr int kManifestVersion = 1;

struct ClipEntry {
  std::string id;
  std::string path;  // frame directory, relative to the manifest file unless absolute
  int length = 0;
  LabelSet labels;

  friend bool operator==(const ClipEntry&, const ClipEntry&) = default;
};

struct MaskEntry {
  std::string id;
  std::string path;  // mask directory or .rle container
  int length = 0;
  std::uint64_t seed = 0;
  LabelSet labels;
  /// Generation settings (maskgen::MaskSettings as JSON) when the mask came
  /// from the procedural generator; null otherwise.
  nlohmann::json generator;

  friend bool operator==(const MaskEntry&, const MaskEntry&) = default;
};

/// Inventory of source clips and masks. Treated as immutable: editing
/// operations return a new manifest.
struct Manifest {
  int version = kManifestVersion;
  std::vector<ClipEntry> clips;
  std::vector<MaskEntry> masks;
  /// Directory used to resolve relative entry paths. Not serialized.
  fs::path root;

  const ClipEntry* find_clip(const std::string& id) const;
  const MaskEntry* find_mask(const std::string& id) const;

  fs::path resolve(const std::string& path) const;

  /// Throws ValidationError on duplicate ids, out-of-modality labels or an
  /// unsupported version.
  void validate() const;

  friend bool operator==(const Manifest& a, const Manifest& b) {
    return a.version == b.version && a.clips == b.clips && a.masks == b.masks;
  }
};

nlohmann::json to_json(const Manifest& manifest);
/// Throws ParseError naming the offending field.
Manifest manifest_from_json(const nlohmann::json& j);

/// Throws ParseError (with line number) for malformed text and
/// ValidationError for semantic problems.
Manifest load_manifest(const fs::path& path);
Manifest parse_manifest(const std::string& text);
void save_manifest(const Manifest& manifest, const fs::path& path);

/// Attaches bg_scene_motion labels. Unknown ids and conflicting settings
/// throw ValidationError; the input manifest is left untouched either way.
Manifest ingest_bg_motion_labels(const Manifest& manifest,
                                 const std::vector<std::pair<std::string, Setting>>& records);

/// Reads "clip-id,setting" lines (blank lines and '#' comments ignored).
std::vector<std::pair<std::string, Setting>> read_label_records(const fs::path& path);

VideoClip load_clip(const Manifest& manifest, const ClipEntry& entry);
MaskSequence load_mask(const Manifest& manifest, const MaskEntry& entry);

/// Line number (1-based) of a byte offset in text.
int line_of_offset(const std::string& text, std::size_t offset);

}  // namespace vibench::corpus
