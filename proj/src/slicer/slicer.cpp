#include "vibench/slicer/slicer.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "vibench/core/error.hpp"

namespace vibench::slicer {

using nlohmann::json;

std::vector<std::string> sample_without_replacement(const std::vector<std::string>& pool, int k,
                                                    Engine& eng) {
  if (k < 0 || static_cast<std::size_t>(k) > pool.size()) {
    throw PreconditionError("cannot sample " + std::to_string(k) + " of " + std::to_string(pool.size()));
  }
  std::vector<std::string> items = pool;
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, items.size() - 1);
    std::swap(items[i], items[pick(eng)]);
  }
  items.resize(static_cast<std::size_t>(k));
  return items;
}

Slice build_slice(const corpus::Manifest& manifest, const AttributeLabel& controlled, std::uint64_t seed,
                  int size) {
  if (size < 1) throw PreconditionError("slice size must be positive");
  const Modality modality = modality_of(controlled.attribute);
  std::vector<std::string> clip_pool, mask_pool;
  for (const auto& c : manifest.clips) {
    if (modality == Modality::kMask || c.labels.contains(controlled)) clip_pool.push_back(c.id);
  }
  for (const auto& m : manifest.masks) {
    if (modality == Modality::kVideo || m.labels.contains(controlled)) mask_pool.push_back(m.id);
  }
  auto check = [&](const std::vector<std::string>& pool, const std::string& what) {
    if (static_cast<int>(pool.size()) < size) {
      throw ValidationError("slice " + to_string(controlled) + ": not enough " + what +
                            " (need=" + std::to_string(size) + " have=" + std::to_string(pool.size()) + ")");
    }
  };
  check(clip_pool, modality == Modality::kVideo ? "labeled clips" : "clips");
  check(mask_pool, modality == Modality::kMask ? "labeled masks" : "masks");

  Engine clip_stream = derive_stream(seed, "slice-clips");
  Engine mask_stream = derive_stream(seed, "slice-masks");
  const auto clips = sample_without_replacement(clip_pool, size, clip_stream);
  const auto masks = sample_without_replacement(mask_pool, size, mask_stream);

  Slice slice;
  slice.name = to_string(controlled);
  slice.controlled = controlled;
  slice.seed = seed;
  for (int i = 0; i < size; ++i) {
    slice.pairs.push_back({clips[static_cast<std::size_t>(i)], masks[static_cast<std::size_t>(i)]});
  }
  return slice;
}

std::vector<Slice> build_all_slices(const corpus::Manifest& manifest, std::uint64_t seed, int size) {
  std::vector<Slice> slices;
  for (const auto& label : all_labels()) {
    slices.push_back(build_slice(manifest, label, derive_seed(seed, to_string(label)), size));
  }
  return slices;
}

void validate_slice(const Slice& slice, const corpus::Manifest& manifest, int size) {
  if (static_cast<int>(slice.pairs.size()) != size) {
    throw ValidationError("slice " + slice.name + " has " + std::to_string(slice.pairs.size()) +
                          " pairs, expected " + std::to_string(size));
  }
  std::set<SlicePair> seen;
  const Modality modality = modality_of(slice.controlled.attribute);
  for (const auto& p : slice.pairs) {
    if (!seen.insert(p).second) {
      throw ValidationError("slice " + slice.name + " repeats pair (" + p.clip_id + ", " + p.mask_id + ")");
    }
    const auto* clip = manifest.find_clip(p.clip_id);
    const auto* mask = manifest.find_mask(p.mask_id);
    if (!clip || !mask) throw ValidationError("slice " + slice.name + " references unknown ids");
    const LabelSet& labels = modality == Modality::kVideo ? clip->labels : mask->labels;
    if (!labels.contains(slice.controlled)) {
      throw ValidationError("slice " + slice.name + " contains an element without the controlled label");
    }
  }
}

json to_json(const Slice& slice) {
  json pairs = json::array();
  for (const auto& p : slice.pairs) pairs.push_back(json::array({p.clip_id, p.mask_id}));
  return {{"version", 1},
          {"name", slice.name},
          {"controlled", to_string(slice.controlled)},
          {"seed", slice.seed},
          {"pairs", pairs}};
}

Slice slice_from_json(const json& j) {
  Slice s;
  try {
    s.controlled = parse_label(j.at("controlled").get<std::string>());
    s.name = j.value("name", to_string(s.controlled));
    s.seed = j.value("seed", std::uint64_t{0});
    for (const auto& p : j.at("pairs")) {
      if (!p.is_array() || p.size() != 2) throw ParseError("pair must be [clip-id, mask-id]", 0, "pairs");
      s.pairs.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad slice file: ") + e.what());
  }
  return s;
}

void save_slice(const Slice& slice, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(slice).dump(2) << "\n";
}

Slice load_slice(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return slice_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed slice file: ") + e.what(), 0, path.string());
  }
}

std::string slice_filename(const Slice& slice) {
  return to_string(slice.controlled.attribute) + "-" + to_string(slice.controlled.setting) + ".json";
}

void save_slices(const std::vector<Slice>& slices, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& s : slices) save_slice(s, dir / slice_filename(s));
}

std::vector<Slice> load_slices(const std::filesystem::path& path) {
  if (!std::filesystem::is_directory(path)) return {load_slice(path)};
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(path)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Slice> slices;
  for (const auto& f : files) slices.push_back(load_slice(f));
  return slices;
}

}  // namespace vibench::slicer
