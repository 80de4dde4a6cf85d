#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "vibench/core/labels.hpp"
#include "vibench/core/rng.hpp"
#include "vibench/corpus/manifest.hpp"

namespace vibench::slicer {

inline constexpr int kSliceSize = 150;

struct SlicePair {
  std::string clip_id;
  std::string mask_id;
  friend auto operator<=>(const SlicePair&, const SlicePair&) = default;
};

/// Video-mask pairs with exactly one attribute setting held fixed.
struct Slice {
  std::string name;  // same as to_string(controlled), e.g. "fg_size:high"
  AttributeLabel controlled{};
  std::uint64_t seed = 0;
  std::vector<SlicePair> pairs;

  friend bool operator==(const Slice&, const Slice&) = default;
};

/// Uniform sample of k distinct items from `pool`, in sampled order
/// (partial Fisher-Yates on a seeded stream).
std::vector<std::string> sample_without_replacement(const std::vector<std::string>& pool, int k,
                                                    Engine& eng);

/// Samples `size` elements carrying the controlled label from its modality
/// and `size` elements of the other modality, then pairs them positionally.
/// Throws ValidationError naming need/have when a pool is too small.
Slice build_slice(const corpus::Manifest& manifest, const AttributeLabel& controlled, std::uint64_t seed,
                  int size = kSliceSize);

/// One slice per attribute setting, in canonical label order; per-slice
/// seeds derived from the master seed and the slice name.
std::vector<Slice> build_all_slices(const corpus::Manifest& manifest, std::uint64_t seed,
                                    int size = kSliceSize);

/// Throws ValidationError unless the slice has `size` unique pairs whose
/// controlled-modality elements all carry the controlled label.
void validate_slice(const Slice& slice, const corpus::Manifest& manifest, int size = kSliceSize);

nlohmann::json to_json(const Slice& slice);
Slice slice_from_json(const nlohmann::json& j);
void save_slice(const Slice& slice, const std::filesystem::path& path);
Slice load_slice(const std::filesystem::path& path);

/// File name used by save_slices: "camera_motion-low.json".
std::string slice_filename(const Slice& slice);
void save_slices(const std::vector<Slice>& slices, const std::filesystem::path& dir);
/// Loads a single slice file or every *.json in a directory (sorted).
std::vector<Slice> load_slices(const std::filesystem::path& path);

}  // namespace vibench::slicer
