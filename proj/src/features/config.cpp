#include "vibench/features/config.hpp"

#include <fstream>

#include "vibench/core/error.hpp"
#include "vibench/features/fingerprint.hpp"
#include "vibench/features/onnx_extractor.hpp"
#include "vibench/features/toy_extractor.hpp"

namespace vibench::features {
namespace {

using nlohmann::json;

template <typename T>
T field(const json& obj, const std::string& key, const std::string& where) {
  const std::string path = where + "." + key;
  if (!obj.is_object() || !obj.contains(key)) throw ParseError("missing field", 0, path);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad value: ") + e.what(), 0, path);
  }
}

template <typename T>
T field_or(const json& obj, const std::string& key, const std::string& where, T fallback) {
  return obj.contains(key) ? field<T>(obj, key, where) : fallback;
}

std::uint64_t toy_seed(const std::string& ref, std::uint64_t fallback) {
  if (ref == "toy") return fallback;
  try {
    return std::stoull(ref.substr(4));
  } catch (const std::exception&) {
    throw ParseError("bad toy extractor seed in '" + ref + "'");
  }
}

bool is_toy(const std::string& ref) { return ref == "toy" || ref.rfind("toy:", 0) == 0; }

}  // namespace

ExtractorConfig extractor_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  ExtractorConfig c;
  c.name = field<std::string>(j, "name", "extractor");
  const auto kind = field<std::string>(j, "kind", "extractor");
  if (kind == "frame") {
    c.kind = ExtractorKind::kFrame;
  } else if (kind == "clip") {
    c.kind = ExtractorKind::kClip;
  } else {
    throw ParseError("kind must be 'frame' or 'clip'", 0, "extractor.kind");
  }
  std::filesystem::path model = field<std::string>(j, "model", "extractor");
  c.model = model.is_absolute() ? model : base_dir / model;
  c.fingerprint = field<std::string>(j, "fingerprint", "extractor");
  c.input = field_or<std::string>(j, "input", "extractor", "input");
  c.feature_outputs = field<std::vector<std::string>>(j, "feature_outputs", "extractor");
  c.embedding_output = field<std::string>(j, "embedding_output", "extractor");
  if (j.contains("layer_weights")) {
    for (const auto& w : field<std::vector<std::vector<float>>>(j, "layer_weights", "extractor")) {
      c.layer_weights.push_back(Eigen::Map<const Eigen::VectorXf>(w.data(), static_cast<Eigen::Index>(w.size())));
    }
    if (c.layer_weights.size() != c.feature_outputs.size()) {
      throw ParseError("one weight vector per feature output required", 0, "extractor.layer_weights");
    }
  }
  const json& pre = j.contains("preprocessing") ? j.at("preprocessing") : json::object();
  const json& size = pre.contains("size") ? pre.at("size") : json::object();
  c.preprocessing.width = field<int>(size, "width", "extractor.preprocessing.size");
  c.preprocessing.height = field<int>(size, "height", "extractor.preprocessing.size");
  c.preprocessing.mean = field_or(pre, "mean", "extractor.preprocessing", c.preprocessing.mean);
  c.preprocessing.std = field_or(pre, "std", "extractor.preprocessing", c.preprocessing.std);
  c.batch_size = field_or(j, "batch_size", "extractor", c.batch_size);
  c.clip_length = field_or(j, "clip_length", "extractor", c.clip_length);
  if (c.preprocessing.width < 1 || c.preprocessing.height < 1) {
    throw ParseError("preprocessing size must be positive", 0, "extractor.preprocessing.size");
  }
  for (float s : c.preprocessing.std) {
    if (!(s > 0.0f)) throw ParseError("std must be positive", 0, "extractor.preprocessing.std");
  }
  if (c.feature_outputs.empty()) throw ParseError("no feature outputs", 0, "extractor.feature_outputs");
  if (c.batch_size < 1) throw ParseError("batch_size must be positive", 0, "extractor.batch_size");
  if (c.clip_length < 1) throw ParseError("clip_length must be positive", 0, "extractor.clip_length");
  return c;
}

json to_json(const ExtractorConfig& c) {
  json j;
  j["name"] = c.name;
  j["kind"] = c.kind == ExtractorKind::kFrame ? "frame" : "clip";
  j["model"] = c.model.string();
  j["fingerprint"] = c.fingerprint;
  j["input"] = c.input;
  j["feature_outputs"] = c.feature_outputs;
  j["embedding_output"] = c.embedding_output;
  if (!c.layer_weights.empty()) {
    json w = json::array();
    for (const auto& v : c.layer_weights) w.push_back(std::vector<float>(v.data(), v.data() + v.size()));
    j["layer_weights"] = w;
  }
  j["preprocessing"] = {{"size", {{"width", c.preprocessing.width}, {"height", c.preprocessing.height}}},
                        {"mean", c.preprocessing.mean},
                        {"std", c.preprocessing.std}};
  j["batch_size"] = c.batch_size;
  j["clip_length"] = c.clip_length;
  return j;
}

ExtractorConfig load_extractor_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open extractor config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return extractor_config_from_json(j, path.parent_path());
}

std::string config_identity(const ExtractorConfig& c) {
  json pre = {{"w", c.preprocessing.width},  {"h", c.preprocessing.height},
              {"mean", c.preprocessing.mean}, {"std", c.preprocessing.std},
              {"emb", c.embedding_output},    {"clip", c.clip_length}};
  return sha256_hex(c.fingerprint + "|" + pre.dump());
}

FrameExtractorPtr open_frame_extractor(const std::string& ref) {
  if (is_toy(ref)) return std::make_shared<ToyFrameExtractor>(toy_seed(ref, 7));
  auto config = load_extractor_config(ref);
  if (config.kind != ExtractorKind::kFrame) throw LoadError(ref + " is not a frame extractor config");
  return std::make_shared<OnnxFrameExtractor>(std::move(config));
}

ClipExtractorPtr open_clip_extractor(const std::string& ref) {
  if (is_toy(ref)) return std::make_shared<ToyClipExtractor>(toy_seed(ref, 11));
  auto config = load_extractor_config(ref);
  if (config.kind != ExtractorKind::kClip) throw LoadError(ref + " is not a clip extractor config");
  return std::make_shared<OnnxClipExtractor>(std::move(config));
}

}  // namespace vibench::features
