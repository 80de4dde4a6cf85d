#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "vibench/features/extractor.hpp"

namespace vibench::features {

/// Input normalization applied before inference: frames are resized
/// bilinearly to (width, height), scaled to [0, 1], then (x - mean) / std
/// per RGB channel.
struct Preprocessing {
  int width = 0;
  int height = 0;
  std::array<float, 3> mean{0.0f, 0.0f, 0.0f};
  std::array<float, 3> std{1.0f, 1.0f, 1.0f};
};

enum class ExtractorKind { kFrame, kClip };

/// One extractor stanza. Relative model paths resolve against the config
/// file's directory.
struct ExtractorConfig {
  std::string name;
  ExtractorKind kind = ExtractorKind::kFrame;
  std::filesystem::path model;
  /// Expected SHA-256 of the model file.
  std::string fingerprint;
  std::string input = "input";
  /// Layer outputs in order, e.g. the five block outputs of the backbone.
  std::vector<std::string> feature_outputs;
  /// Output averaged over all non-channel axes to form the embedding.
  std::string embedding_output;
  /// Per-channel perceptual weights; empty means unit weights.
  LayerWeights layer_weights;
  Preprocessing preprocessing;
  int batch_size = 8;
  int clip_length = 10;
};

ExtractorConfig extractor_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::json to_json(const ExtractorConfig& config);
ExtractorConfig load_extractor_config(const std::filesystem::path& path);

/// Digest of fingerprint plus preprocessing; the cache key component.
std::string config_identity(const ExtractorConfig& config);

/// Resolves an extractor reference: "toy", "toy:<seed>", or a config path.
FrameExtractorPtr open_frame_extractor(const std::string& ref);
ClipExtractorPtr open_clip_extractor(const std::string& ref);

}  // namespace vibench::features
