#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "vibench/core/image.hpp"
#include "vibench/corpus/manifest.hpp"

namespace vibench::corpus {

/// Textured still image: smooth colour gradient plus random rectangles,
/// discs and lines, so feature detectors find plenty of corners.
RgbFrame synthesize_texture(int width, int height, std::uint64_t seed);

/// A camera panning across a fixed textured canvas, optionally with small
/// discs moving independently of the camera (background scene motion).
struct SceneSpec {
  int width = 160;
  int height = 96;
  int length = 60;
  /// Camera translation in pixels per frame.
  double pan_x = 0.0;
  double pan_y = 0.0;
  int movers = 0;
  std::uint64_t seed = 0;
};

/// Frame t is the canvas window at offset round(t * pan); identical
/// consecutive frames when pan and movers are zero.
VideoClip synthesize_video(const SceneSpec& spec, const std::string& id);

struct SyntheticCorpusOptions {
  int clips = 20;
  int width = 160;
  int height = 96;
  int min_length = 45;
  int max_length = 90;
  double pan_speed = 4.0;
  int movers = 4;
  std::uint64_t seed = 1;
};

/// Writes `clips` videos under root/clips/<id>/ and returns a manifest whose
/// root is `root`. Labels are assigned by construction: even clips pan
/// (camera_motion:high), odd clips are static (camera_motion:low); clips
/// with (index / 2) even carry movers (bg_scene_motion:high), the rest none
/// (bg_scene_motion:low).
Manifest make_synthetic_corpus(const SyntheticCorpusOptions& options, const std::filesystem::path& root);

}  // namespace vibench::corpus
