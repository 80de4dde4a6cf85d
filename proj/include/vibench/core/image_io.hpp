#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vibench/core/image.hpp"

namespace vibench {

namespace fs = std::filesystem;

/// Frame file name for index i: zero-padded to five digits, PNG.
std::string frame_filename(int index);

RgbFrame read_rgb(const fs::path& path);
void write_rgb(const RgbFrame& frame, const fs::path& path);

/// Bilevel image on disk (0 known, 255 occluded), {0,1} in memory. Any
/// nonzero pixel reads back as occluded.
MaskFrame read_mask_frame(const fs::path& path);
void write_mask_frame(const MaskFrame& frame, const fs::path& path);

/// Reads every *.png / *.jpg in lexicographic order.
std::vector<RgbFrame> read_frame_dir(const fs::path& dir);
void write_frame_dir(const std::vector<RgbFrame>& frames, const fs::path& dir);

std::vector<MaskFrame> read_mask_dir(const fs::path& dir);
void write_mask_dir(const std::vector<MaskFrame>& frames, const fs::path& dir);

/// Bilinear resize (pixel-center aligned).
RgbFrame resize_bilinear(const RgbFrame& frame, int width, int height);
/// Nearest-neighbour resize followed by >0 binarization.
MaskFrame resize_mask_nearest(const MaskFrame& frame, int width, int height);

/// 8-bit luma (ITU-R BT.601 weights).
Plane<std::uint8_t> to_gray(const RgbFrame& frame);

}  // namespace vibench
