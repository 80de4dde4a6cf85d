#pragma once

#include <string>
#include <vector>

#include "vibench/core/image.hpp"

namespace vibench::corpus {

inline constexpr int kMinClipLength = 45;
inline constexpr int kMaxClipLength = 90;

/// Segment boundaries [begin, end) produced by the splitting policy.
struct ClipSpan {
  int begin;
  int end;
  int length() const { return end - begin; }
  friend bool operator==(const ClipSpan&, const ClipSpan&) = default;
};

struct SplitResult {
  std::vector<VideoClip> clips;
  std::vector<std::string> warnings;
};

/// Splitting policy: a T-frame video becomes ceil(T / max_len) contiguous
/// segments whose lengths differ by at most one (longer segments first).
/// When min_len > max_len / 2 this can undershoot min_len; then the video is
/// cut into as many max_len segments as fit and a remainder shorter than
/// min_len is dropped. Videos shorter than min_len yield no spans.
std::vector<ClipSpan> plan_clip_spans(int total_frames, int min_len, int max_len);

/// Applies plan_clip_spans. Clip ids are "<video id>-<index>" with a three
/// digit zero-padded index.
SplitResult split_into_clips(const VideoClip& video, int min_len = kMinClipLength,
                             int max_len = kMaxClipLength);

}  // namespace vibench::corpus
