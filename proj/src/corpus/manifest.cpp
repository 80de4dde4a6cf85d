#include "vibench/corpus/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "vibench/core/image_io.hpp"
#include "vibench/corpus/mask_store.hpp"

namespace vibench::corpus {
namespace {

using nlohmann::json;

template <typename T>
T field(const json& obj, const std::string& key, const std::string& where) {
  const std::string path = where + "." + key;
  if (!obj.is_object() || !obj.contains(key)) throw ParseError("missing field", 0, path);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad value: ") + e.what(), 0, path);
  }
}

LabelSet labels_field(const json& obj, const std::string& where) {
  if (!obj.contains("labels")) return {};
  auto strings = field<std::vector<std::string>>(obj, "labels", where);
  try {
    return LabelSet::from_strings(strings);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ".labels: " + e.what());
  }
}

}  // namespace

const ClipEntry* Manifest::find_clip(const std::string& id) const {
  for (const auto& c : clips) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const MaskEntry* Manifest::find_mask(const std::string& id) const {
  for (const auto& m : masks) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

fs::path Manifest::resolve(const std::string& path) const {
  fs::path p(path);
  if (p.is_absolute() || root.empty()) return p;
  return root / p;
}

void Manifest::validate() const {
  if (version != kManifestVersion) {
    throw ValidationError("unsupported manifest version " + std::to_string(version));
  }
  std::set<std::string> ids;
  for (const auto& c : clips) {
    if (c.id.empty()) throw ValidationError("clip with empty id");
    if (!ids.insert(c.id).second) throw ValidationError("duplicate clip id '" + c.id + "'");
    try {
      c.labels.check_modality(Modality::kVideo);
    } catch (const ValidationError& e) {
      throw ValidationError("clip '" + c.id + "': " + e.what());
    }
  }
  ids.clear();
  for (const auto& m : masks) {
    if (m.id.empty()) throw ValidationError("mask with empty id");
    if (!ids.insert(m.id).second) throw ValidationError("duplicate mask id '" + m.id + "'");
    try {
      m.labels.check_modality(Modality::kMask);
    } catch (const ValidationError& e) {
      throw ValidationError("mask '" + m.id + "': " + e.what());
    }
  }
}

json to_json(const Manifest& manifest) {
  json clips = json::array();
  for (const auto& c : manifest.clips) {
    clips.push_back({{"id", c.id}, {"path", c.path}, {"length", c.length}, {"labels", c.labels.to_strings()}});
  }
  json masks = json::array();
  for (const auto& m : manifest.masks) {
    json entry = {{"id", m.id},
                  {"path", m.path},
                  {"length", m.length},
                  {"seed", m.seed},
                  {"labels", m.labels.to_strings()}};
    if (!m.generator.is_null()) entry["generator"] = m.generator;
    masks.push_back(std::move(entry));
  }
  return {{"version", manifest.version}, {"clips", clips}, {"masks", masks}};
}

Manifest manifest_from_json(const json& j) {
  Manifest m;
  m.version = field<int>(j, "version", "manifest");
  const auto clips = j.contains("clips") ? j.at("clips") : json::array();
  const auto masks = j.contains("masks") ? j.at("masks") : json::array();
  if (!clips.is_array()) throw ParseError("expected a list", 0, "manifest.clips");
  if (!masks.is_array()) throw ParseError("expected a list", 0, "manifest.masks");
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const std::string where = "clips[" + std::to_string(i) + "]";
    ClipEntry c;
    c.id = field<std::string>(clips[i], "id", where);
    c.path = field<std::string>(clips[i], "path", where);
    c.length = field<int>(clips[i], "length", where);
    c.labels = labels_field(clips[i], where);
    m.clips.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const std::string where = "masks[" + std::to_string(i) + "]";
    MaskEntry e;
    e.id = field<std::string>(masks[i], "id", where);
    e.path = field<std::string>(masks[i], "path", where);
    e.length = field<int>(masks[i], "length", where);
    e.seed = masks[i].contains("seed") ? field<std::uint64_t>(masks[i], "seed", where) : 0;
    e.labels = labels_field(masks[i], where);
    if (masks[i].contains("generator")) e.generator = masks[i].at("generator");
    m.masks.push_back(std::move(e));
  }
  m.validate();
  return m;
}

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

Manifest parse_manifest(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte is 1-based and points just past the offending character.
    throw ParseError(std::string("malformed manifest: ") + e.what(),
                     line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  return manifest_from_json(j);
}

Manifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  Manifest m = parse_manifest(ss.str());
  m.root = path.parent_path();
  return m;
}

void save_manifest(const Manifest& manifest, const fs::path& path) {
  manifest.validate();
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write manifest " + path.string());
    out << to_json(manifest).dump(2) << "\n";
  }
  fs::rename(tmp, path);
}

Manifest ingest_bg_motion_labels(const Manifest& manifest,
                                 const std::vector<std::pair<std::string, Setting>>& records) {
  Manifest out = manifest;
  for (const auto& [id, setting] : records) {
    auto it = std::find_if(out.clips.begin(), out.clips.end(),
                           [&](const ClipEntry& c) { return c.id == id; });
    if (it == out.clips.end()) throw ValidationError("unknown clip id '" + id + "'");
    try {
      it->labels.add({Attribute::kBgSceneMotion, setting});
    } catch (const ValidationError& e) {
      throw ValidationError("clip '" + id + "': " + e.what());
    }
  }
  return out;
}

std::vector<std::pair<std::string, Setting>> read_label_records(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::pair<std::string, Setting>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected 'clip-id,setting'", lineno);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    try {
      out.emplace_back(trim(line.substr(0, comma)), parse_setting(trim(line.substr(comma + 1))));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

VideoClip load_clip(const Manifest& manifest, const ClipEntry& entry) {
  VideoClip clip;
  clip.id = entry.id;
  clip.frames = read_frame_dir(manifest.resolve(entry.path));
  clip.check_uniform();
  if (clip.length() != entry.length) {
    throw ValidationError("clip '" + entry.id + "' has " + std::to_string(clip.length()) +
                          " frames on disk, manifest says " + std::to_string(entry.length));
  }
  return clip;
}

MaskSequence load_mask(const Manifest& manifest, const MaskEntry& entry) {
  MaskSequence mask = read_mask_any(manifest.resolve(entry.path));
  mask.id = entry.id;
  mask.seed = entry.seed;
  mask.labels = entry.labels;
  if (mask.length() != entry.length) {
    throw ValidationError("mask '" + entry.id + "' has " + std::to_string(mask.length()) +
                          " frames on disk, manifest says " + std::to_string(entry.length));
  }
  return mask;
}

}  // namespace vibench::corpus
