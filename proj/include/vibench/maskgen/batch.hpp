#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vibench/corpus/manifest.hpp"
#include "vibench/maskgen/config.hpp"

namespace vibench::maskgen {

struct MaskBatchOptions {
  /// Masks per fg attribute setting (six settings in total).
  int per_setting = 30;
  std::uint64_t first_seed = 1;
  /// Store as .rle containers instead of PNG directories.
  bool rle = true;
  /// Directory under the output root receiving the masks.
  std::string subdir = "masks";
};

/// Generates per_setting masks for each fg attribute setting with that
/// attribute fixed and the other two free, seeds first_seed, first_seed + 1,
/// ... in canonical label order. Each mask is labelled by measuring it
/// (label_mask), so it may also qualify for other slices; a mask whose
/// measured label contradicts the setting it was generated for keeps the
/// measured label and adds a message to `warnings`.
std::vector<corpus::MaskEntry> generate_mask_set(const MaskGenConfig& config, const MaskBatchOptions& options,
                                                 const std::filesystem::path& root,
                                                 std::vector<std::string>* warnings = nullptr);

}  // namespace vibench::maskgen
