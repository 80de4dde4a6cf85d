#pragma once

#include <filesystem>

#include "vibench/core/image.hpp"

namespace vibench::corpus {

namespace fs = std::filesystem;

/// Directory layout: one bilevel PNG per frame (00000.png, ...) plus
/// meta.json holding id, seed, labels and dimensions.
void write_mask_directory(const MaskSequence& mask, const fs::path& dir);
MaskSequence read_mask_directory(const fs::path& dir);

/// Single-file run-length container (.rle). Layout, little endian:
///   magic "VBMRLE1\0" (8 bytes), u32 width, u32 height, u32 frames,
///   u64 seed, u32 meta_len, meta_len bytes of JSON (id, labels),
///   then per frame: u32 run count, runs as u32 lengths alternating
///   0-runs and 1-runs in row-major order, starting with a (possibly empty) 0-run.
void write_mask_rle(const MaskSequence& mask, const fs::path& path);
MaskSequence read_mask_rle(const fs::path& path);

/// Dispatches on extension: ".rle" file or directory.
MaskSequence read_mask_any(const fs::path& path);

}  // namespace vibench::corpus
