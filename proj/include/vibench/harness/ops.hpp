#pragma once

#include <cstdint>

#include "vibench/core/image.hpp"

namespace vibench::harness {

/// Value written into occluded voxels.
inline constexpr std::uint8_t kPlaceholder = 0;

/// Video with every voxel where mask = 1 replaced by `placeholder`.
/// Throws PreconditionError unless video and mask are aligned.
VideoClip corrupt(const VideoClip& video, const MaskSequence& mask, std::uint8_t placeholder = kPlaceholder);

/// Original where mask = 0, prediction where mask = 1. The result carries
/// the prediction's id.
VideoClip composite(const VideoClip& pred, const VideoClip& original, const MaskSequence& mask);

/// True iff every voxel with mask = 0 equals the original exactly.
bool known_region_preserved(const VideoClip& video, const VideoClip& original, const MaskSequence& mask);

/// Padding added on the right and bottom edges.
struct CropRecord {
  int width = 0;   // size before padding
  int height = 0;
  int pad_right = 0;
  int pad_bottom = 0;

  bool empty() const { return pad_right == 0 && pad_bottom == 0; }
  friend bool operator==(const CropRecord&, const CropRecord&) = default;
};

struct PaddedInput {
  VideoClip video;
  MaskSequence mask;
  CropRecord crop;
};

/// Index into [0, n) under mirror reflection without repeating the edge
/// sample (…, 2, 1, 0, 1, 2, …, n-2, n-1, n-2, …).
int reflect_index(int i, int n);

/// Mirror-pads video and mask on the right and bottom up to
/// (target_width, target_height). Throws PreconditionError if the target is
/// smaller than the input.
PaddedInput pad_mirror(const VideoClip& video, const MaskSequence& mask, int target_width, int target_height);
/// Pads to the next multiple of `multiple` in both dimensions.
PaddedInput pad_mirror_to_multiple(const VideoClip& video, const MaskSequence& mask, int multiple);

/// Removes padding described by `record`. Throws PreconditionError if the
/// video does not have the padded size.
VideoClip crop(const VideoClip& padded, const CropRecord& record);

/// Bilinear resize of every frame; a no-op copy at the same size.
VideoClip resize_video(const VideoClip& video, int width, int height);
/// Nearest-neighbour resize of every frame followed by >0 binarization.
MaskSequence resize_mask(const MaskSequence& mask, int width, int height);

/// Mask trimmed or extended to `length` frames. Extension continues the
/// sequence back and forth in time (forward, reversed, forward, ...) so
/// consecutive frames stay consecutive.
MaskSequence fit_mask_length(const MaskSequence& mask, int length);

}  // namespace vibench::harness
