#include "vibench/harness/ops.hpp"

#include "vibench/core/image_io.hpp"

namespace vibench::harness {
namespace {

void check_same_shape(const VideoClip& a, const VideoClip& b) {
  if (a.length() != b.length() || a.width() != b.width() || a.height() != b.height()) {
    throw PreconditionError("videos '" + a.id + "' and '" + b.id + "' differ in shape");
  }
}

template <typename Fn>
void for_each_voxel(const VideoClip& video, Fn&& fn) {
  for (int t = 0; t < video.length(); ++t) {
    for (int y = 0; y < video.height(); ++y) {
      for (int x = 0; x < video.width(); ++x) fn(static_cast<std::size_t>(t), y, x);
    }
  }
}

}  // namespace

VideoClip corrupt(const VideoClip& video, const MaskSequence& mask, std::uint8_t placeholder) {
  check_aligned(video, mask);
  VideoClip out = video;
  for_each_voxel(video, [&](std::size_t t, int y, int x) {
    if (mask.frames[t](y, x)) {
      for (int c = 0; c < 3; ++c) out.frames[t](y, x, c) = placeholder;
    }
  });
  return out;
}

VideoClip composite(const VideoClip& pred, const VideoClip& original, const MaskSequence& mask) {
  check_aligned(original, mask);
  check_same_shape(pred, original);
  VideoClip out = pred;
  for_each_voxel(original, [&](std::size_t t, int y, int x) {
    if (!mask.frames[t](y, x)) {
      for (int c = 0; c < 3; ++c) out.frames[t](y, x, c) = original.frames[t](y, x, c);
    }
  });
  return out;
}

bool known_region_preserved(const VideoClip& video, const VideoClip& original, const MaskSequence& mask) {
  check_aligned(original, mask);
  check_same_shape(video, original);
  bool ok = true;
  for_each_voxel(original, [&](std::size_t t, int y, int x) {
    if (!mask.frames[t](y, x)) {
      for (int c = 0; c < 3; ++c) ok = ok && video.frames[t](y, x, c) == original.frames[t](y, x, c);
    }
  });
  return ok;
}

int reflect_index(int i, int n) {
  if (n <= 0) throw PreconditionError("reflect_index on an empty axis");
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

PaddedInput pad_mirror(const VideoClip& video, const MaskSequence& mask, int target_width, int target_height) {
  check_aligned(video, mask);
  const int w = video.width(), h = video.height();
  if (target_width < w || target_height < h) {
    throw PreconditionError("pad target " + std::to_string(target_width) + "x" + std::to_string(target_height) +
                            " is smaller than " + std::to_string(w) + "x" + std::to_string(h));
  }
  PaddedInput out;
  out.crop = {w, h, target_width - w, target_height - h};
  out.video.id = video.id;
  out.mask = mask;
  out.mask.frames.clear();
  for (int t = 0; t < video.length(); ++t) {
    const auto& f = video.frames[static_cast<std::size_t>(t)];
    const auto& m = mask.frames[static_cast<std::size_t>(t)];
    RgbFrame pf(target_width, target_height);
    MaskFrame pm(target_height, target_width);
    for (int y = 0; y < target_height; ++y) {
      const int sy = reflect_index(y, h);
      for (int x = 0; x < target_width; ++x) {
        const int sx = reflect_index(x, w);
        for (int c = 0; c < 3; ++c) pf(y, x, c) = f(sy, sx, c);
        pm(y, x) = m(sy, sx);
      }
    }
    out.video.frames.push_back(std::move(pf));
    out.mask.frames.push_back(std::move(pm));
  }
  return out;
}

PaddedInput pad_mirror_to_multiple(const VideoClip& video, const MaskSequence& mask, int multiple) {
  if (multiple < 1) throw PreconditionError("pad multiple must be positive");
  auto up = [multiple](int v) { return (v + multiple - 1) / multiple * multiple; };
  return pad_mirror(video, mask, up(video.width()), up(video.height()));
}

VideoClip crop(const VideoClip& padded, const CropRecord& record) {
  if (padded.width() != record.width + record.pad_right || padded.height() != record.height + record.pad_bottom) {
    throw PreconditionError("video " + std::to_string(padded.width()) + "x" + std::to_string(padded.height()) +
                            " does not match the crop record");
  }
  if (record.empty()) return padded;
  VideoClip out;
  out.id = padded.id;
  for (const auto& f : padded.frames) {
    out.frames.emplace_back(Plane<std::uint8_t>(f.interleaved().topLeftCorner(record.height, 3 * record.width)));
  }
  return out;
}

VideoClip resize_video(const VideoClip& video, int width, int height) {
  if (video.width() == width && video.height() == height) return video;
  VideoClip out;
  out.id = video.id;
  for (const auto& f : video.frames) out.frames.push_back(resize_bilinear(f, width, height));
  return out;
}

MaskSequence resize_mask(const MaskSequence& mask, int width, int height) {
  if (mask.width() == width && mask.height() == height) return mask;
  MaskSequence out = mask;
  for (auto& f : out.frames) f = resize_mask_nearest(f, width, height);
  return out;
}

MaskSequence fit_mask_length(const MaskSequence& mask, int length) {
  if (mask.length() == 0) throw PreconditionError("mask '" + mask.id + "' has no frames");
  if (length < 1) throw PreconditionError("target mask length must be positive");
  MaskSequence out = mask;
  out.frames.clear();
  const int n = mask.length();
  for (int t = 0; t < length; ++t) out.frames.push_back(mask.frames[static_cast<std::size_t>(reflect_index(t, n))]);
  return out;
}

}  // namespace vibench::harness
