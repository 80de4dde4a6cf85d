#include "vibench/corpus/clips.hpp"

#include <cstdio>

namespace vibench::corpus {

std::vector<ClipSpan> plan_clip_spans(int total_frames, int min_len, int max_len) {
  if (min_len < 1 || min_len > max_len) {
    throw PreconditionError("clip bounds must satisfy 1 <= min_len <= max_len");
  }
  std::vector<ClipSpan> spans;
  if (total_frames < min_len) return spans;

  const int count = (total_frames + max_len - 1) / max_len;
  const int base = total_frames / count;
  const int extra = total_frames % count;
  if (base >= min_len) {
    int begin = 0;
    for (int i = 0; i < count; ++i) {
      const int len = base + (i < extra ? 1 : 0);
      spans.push_back({begin, begin + len});
      begin += len;
    }
    return spans;
  }

  int begin = 0;
  while (total_frames - begin >= max_len) {
    spans.push_back({begin, begin + max_len});
    begin += max_len;
  }
  if (total_frames - begin >= min_len) spans.push_back({begin, total_frames});
  return spans;
}

SplitResult split_into_clips(const VideoClip& video, int min_len, int max_len) {
  SplitResult result;
  const auto spans = plan_clip_spans(video.length(), min_len, max_len);
  if (spans.empty()) {
    result.warnings.push_back("video '" + video.id + "' has " + std::to_string(video.length()) +
                              " frames, fewer than the minimum clip length " +
                              std::to_string(min_len) + "; skipped");
    return result;
  }
  for (std::size_t i = 0; i < spans.size(); ++i) {
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "-%03zu", i);
    VideoClip clip;
    clip.id = video.id + suffix;
    clip.frames.assign(video.frames.begin() + spans[i].begin, video.frames.begin() + spans[i].end);
    result.clips.push_back(std::move(clip));
  }
  const int covered = spans.back().end;
  if (covered < video.length()) {
    result.warnings.push_back("video '" + video.id + "': dropped " +
                              std::to_string(video.length() - covered) + " trailing frames");
  }
  return result;
}

}  // namespace vibench::corpus
