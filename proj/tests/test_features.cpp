#include <atomic>
#include <fstream>
#include "json.hpp"
#include <thread>
#include <tuple>

#include "doctest.h"
#include "support/testkit.hpp"
#include "vibench/core/error.hpp"
#include "vibench/core/image_io.hpp"
#include "vibench/features/cache.hpp"
#include "vibench/features/config.hpp"
#include "vibench/features/fingerprint.hpp"
#include "vibench/features/onnx_extractor.hpp"
#include "vibench/features/toy_extractor.hpp"

using namespace vibench;
using namespace vibench::features;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json reference_outputs() {
  std::ifstream in(testkit::model_dir() / "reference_outputs.json");
  REQUIRE(in.good());
  return json::parse(in);
}

/// Compares one layer against its torch summary: shape, sum, |sum| and the
/// first 16 values in N x C x ... order.
void check_against_reference(const FeatureTensor& t, const json& ref) {
  auto shape = ref.at("shape").get<std::vector<int>>();
  shape.erase(shape.begin());
  CHECK(t.shape == shape);
  double sum = 0, abs_sum = 0;
  for (Eigen::Index i = 0; i < t.values.size(); ++i) {
    sum += t.values.data()[i];
    abs_sum += std::abs(t.values.data()[i]);
  }
  const double scale = ref.at("abs_sum").get<double>();
  CHECK(std::abs(sum - ref.at("sum").get<double>()) <= 1e-5 * scale);
  CHECK(abs_sum == doctest::Approx(scale).epsilon(1e-5));
  const auto head = ref.at("head").get<std::vector<double>>();
  for (std::size_t i = 0; i < head.size(); ++i) {
    CHECK(t.values(0, Eigen::Index(i)) == doctest::Approx(head[i]).epsilon(1e-4).scale(1e-3));
  }
}

std::vector<RgbFrame> reference_clip() {
  std::vector<RgbFrame> frames;
  for (int t = 0; t < 14; ++t) {
    char name[16];
    std::snprintf(name, sizeof name, "%05d.png", t);
    frames.push_back(read_rgb(testkit::model_dir() / "reference_clip" / name));
  }
  return frames;
}

class CountingFrameExtractor final : public FrameExtractor {
 public:
  mutable std::atomic<int> embeds{0};
  std::string name() const override { return inner.name(); }
  std::string fingerprint() const override { return inner.fingerprint(); }
  FrameFeatureSet extract(const RgbFrame& f) const override { return inner.extract(f); }
  PooledEmbedding embed(const RgbFrame& f) const override {
    ++embeds;
    return inner.embed(f);
  }
  LayerWeights calibration_weights() const override { return inner.calibration_weights(); }
  ToyFrameExtractor inner;
};

class CountingClipExtractor final : public ClipExtractor {
 public:
  mutable std::atomic<int> embeds{0};
  std::string name() const override { return inner.name(); }
  std::string fingerprint() const override { return inner.fingerprint(); }
  ClipFeatureSet extract(std::span<const RgbFrame> f) const override { return inner.extract(f); }
  PooledEmbedding embed(std::span<const RgbFrame> f) const override {
    ++embeds;
    return inner.embed(f);
  }
  ToyClipExtractor inner;
};

}  // namespace

TEST_CASE("SHA-256 matches published test vectors") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  testkit::TempDir dir("sha");
  std::ofstream(dir / "f") << "abc";
  CHECK(sha256_file(dir / "f") == sha256_hex("abc"));
  Sha256 incremental;
  incremental.update("a").update("bc");
  CHECK(incremental.hex() == sha256_hex("abc"));
}

TEST_CASE("toy frame extractor: black frame yields the biases, constant colour the affine embedding") {
  const ToyFrameExtractor ex;
  const RgbFrame black(40, 24, 0);
  const auto f = ex.extract(black);
  REQUIRE(f.layers.size() == 5);
  for (std::size_t l = 0; l < f.layers.size(); ++l) {
    for (Eigen::Index p = 0; p < f.layers[l].positions(); ++p) {
      CHECK(f.layers[l].values.col(p).isApprox(ex.layer_bias(l), 1e-6f));
    }
  }
  RgbFrame colour(40, 24);
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 40; ++x) colour(y, x, 0) = 51, colour(y, x, 1) = 102, colour(y, x, 2) = 255;
  }
  const Eigen::Vector3d rgb(0.2, 0.4, 1.0);
  const Eigen::VectorXd expected =
      ex.embedding_weight().cast<double>() * rgb + ex.embedding_bias().cast<double>();
  const auto e = ex.embed(colour);
  CHECK(e.values.size() == 16);
  CHECK((e.values - expected).norm() < 1e-5);
  CHECK(e.pooling == "global-mean");
  CHECK(e.fingerprint == ex.fingerprint());
}

TEST_CASE("toy extractors are deterministic per seed and fingerprints track weights") {
  const ToyFrameExtractor a(7), b(7), c(8);
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint() != c.fingerprint());
  Engine eng = derive_stream(1, "toy");
  const auto frame = testkit::random_frame(33, 17, eng);
  CHECK(a.extract(frame) == b.extract(frame));
  CHECK(a.embed(frame) == b.embed(frame));
  CHECK(!(a.embed(frame).values.isApprox(c.embed(frame).values)));
  const auto batch = a.embed_batch(std::vector<RgbFrame>{frame, frame});
  CHECK(batch.size() == 2);
  CHECK(batch[1] == a.embed(frame));
  CHECK(ToyClipExtractor(11).fingerprint() != ToyClipExtractor(12).fingerprint());
}

TEST_CASE("toy clip extractor: exact clip length, layer shapes, whole-video embedding") {
  const ToyClipExtractor ex;
  const auto video = testkit::random_video("v", 32, 24, 14, 3);
  CHECK_THROWS_AS(ex.extract(std::span(video.frames).first(9)), PreconditionError);
  CHECK_THROWS_AS(ex.extract(std::span(video.frames).first(11)), PreconditionError);
  const auto f = ex.extract(std::span(video.frames).first(10));
  REQUIRE(f.layers.size() == 5);
  CHECK(f.layers[0].shape.size() == 4);
  CHECK(f.layers[4].shape[1] == 1);
  const auto e = ex.embed(video.frames);
  CHECK(e.values.size() == 16);
  CHECK(e.pooling == "spatiotemporal-mean");
  CHECK_THROWS_AS(ex.embed({}), PreconditionError);
}

TEST_CASE("sliding clip windows equal independent per-window extraction") {
  const ToyClipExtractor toy(5);
  const ClipExtractor& generic = toy;
  for (const auto& [w, h, length] : {std::tuple{37, 23, 10}, std::tuple{80, 48, 14}, std::tuple{131, 70, 17}}) {
    const VideoClip v = testkit::random_video("w", w, h, length, 300 + static_cast<std::uint64_t>(w));
    const std::span<const RgbFrame> frames(v.frames);
    const auto windows = toy.windows(frames);
    const auto fallback = generic.ClipExtractor::windows(frames);
    for (int s = 0; s + toy.clip_length() <= length; ++s) {
      const auto expected = toy.extract(frames.subspan(static_cast<std::size_t>(s), 10));
      const auto got = windows->extract(s);
      const auto via_default = fallback->extract(s);
      REQUIRE(got.layers.size() == expected.layers.size());
      for (std::size_t l = 0; l < expected.layers.size(); ++l) {
        CHECK(got.layers[l].shape == expected.layers[l].shape);
        CHECK(got.layers[l].values == expected.layers[l].values);
        CHECK(via_default.layers[l].values == expected.layers[l].values);
      }
    }
    CHECK_THROWS_AS(windows->extract(length - 9), PreconditionError);
    CHECK_THROWS_AS(fallback->extract(-1), PreconditionError);
  }
}

TEST_CASE("extractor references resolve toy seeds and reject junk") {
  CHECK(open_frame_extractor("toy")->fingerprint() == ToyFrameExtractor(7).fingerprint());
  CHECK(open_frame_extractor("toy:3")->fingerprint() == ToyFrameExtractor(3).fingerprint());
  CHECK(open_clip_extractor("toy")->fingerprint() == ToyClipExtractor(11).fingerprint());
  CHECK_THROWS_AS(open_frame_extractor("toy:x"), ParseError);
  CHECK_THROWS_AS(open_frame_extractor("/nonexistent/extractor.json"), LoadError);
  CHECK_THROWS_AS(open_frame_extractor((testkit::model_dir() / "clip_net.json").string()), LoadError);
}

TEST_CASE("extractor config parsing reports field paths and round-trips") {
  std::ifstream in(testkit::model_dir() / "frame_net.json");
  const json j = json::parse(in);
  const auto c = extractor_config_from_json(j, testkit::model_dir());
  CHECK(c.kind == ExtractorKind::kFrame);
  CHECK(c.model == testkit::model_dir() / "frame_net.onnx");
  CHECK(c.layer_weights.size() == 5);
  CHECK(c.preprocessing.width == 96);
  const auto again = extractor_config_from_json(to_json(c), "/elsewhere");
  CHECK(again.model == c.model);
  CHECK(config_identity(again) == config_identity(c));
  auto shifted = c;
  shifted.preprocessing.mean[1] = 0.4f;
  CHECK(config_identity(shifted) != config_identity(c));

  json missing = j;
  missing.erase("fingerprint");
  try {
    extractor_config_from_json(missing, ".");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.field() == "extractor.fingerprint");
  }
  json bad_kind = j;
  bad_kind["kind"] = "audio";
  CHECK_THROWS_AS(extractor_config_from_json(bad_kind, "."), ParseError);
  json bad_weights = j;
  bad_weights["layer_weights"].erase(0);
  CHECK_THROWS_AS(extractor_config_from_json(bad_weights, "."), ParseError);
}

TEST_CASE("ONNX frame extractor reproduces the torch reference outputs") {
  const auto refs = reference_outputs();
  const auto ex = open_frame_extractor((testkit::model_dir() / "frame_net.json").string());
  const auto frame = read_rgb(testkit::model_dir() / "reference_frame.png");
  const auto f = ex->extract(frame);
  REQUIRE(f.layers.size() == 5);
  for (int l = 0; l < 5; ++l) {
    CAPTURE(l);
    check_against_reference(f.layers[std::size_t(l)], refs["frame"]["l" + std::to_string(l + 1)]);
  }
  const auto& pool = refs["frame"]["pool"];
  const auto e = ex->embed(frame);
  const double positions = pool["shape"][2].get<double>() * pool["shape"][3].get<double>();
  CHECK(e.values.size() == pool["shape"][1].get<int>());
  CHECK(std::abs(e.values.sum() * positions - pool["sum"].get<double>()) <= 1e-5 * pool["abs_sum"].get<double>());

  // Batching and resizing paths agree with single-frame inference.
  Engine eng = derive_stream(2, "onnx");
  std::vector<RgbFrame> frames{frame};
  for (int i = 0; i < 10; ++i) frames.push_back(testkit::random_frame(64 + i, 40, eng));
  const auto batch = ex->embed_batch(frames);
  REQUIRE(batch.size() == frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) CHECK((batch[i].values - ex->embed(frames[i]).values).norm() < 1e-5);
  CHECK(ex->calibration_weights().size() == 5);
}

TEST_CASE("ONNX clip extractor reproduces the torch reference for clips and whole videos") {
  const auto refs = reference_outputs();
  const auto ex = open_clip_extractor((testkit::model_dir() / "clip_net.json").string());
  const auto frames = reference_clip();
  CHECK(ex->clip_length() == 10);
  const auto f = ex->extract(std::span(frames).first(10));
  for (int l = 0; l < 5; ++l) {
    CAPTURE(l);
    check_against_reference(f.layers[std::size_t(l)], refs["clip"]["l" + std::to_string(l + 1)]);
  }
  CHECK_THROWS_AS(ex->extract(frames), PreconditionError);
  const auto& pool = refs["video"]["pool"];
  const auto e = ex->embed(frames);
  double positions = 1;
  for (std::size_t i = 2; i < pool["shape"].size(); ++i) positions *= pool["shape"][i].get<double>();
  CHECK(std::abs(e.values.sum() * positions - pool["sum"].get<double>()) <= 1e-5 * pool["abs_sum"].get<double>());
}

TEST_CASE("ONNX extractors are safe to call concurrently") {
  const auto ex = open_frame_extractor((testkit::model_dir() / "frame_net.json").string());
  const auto video = testkit::random_video("v", 50, 30, 8, 4);
  std::vector<PooledEmbedding> serial;
  for (const auto& f : video.frames) serial.push_back(ex->embed(f));
  std::vector<PooledEmbedding> parallel(video.frames.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < video.frames.size(); ++i) {
    threads.emplace_back([&, i] { parallel[i] = ex->embed(video.frames[i]); });
  }
  for (auto& t : threads) t.join();
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("ONNX weights are verified before use") {
  testkit::TempDir dir("onnx");
  fs::copy_file(testkit::model_dir() / "frame_net.onnx", dir / "frame_net.onnx");
  std::ifstream in(testkit::model_dir() / "frame_net.json");
  json j = json::parse(in);

  auto wrong = j;
  wrong["fingerprint"] = std::string(64, '0');
  std::ofstream(dir / "wrong.json") << wrong.dump();
  try {
    open_frame_extractor((dir / "wrong.json").string());
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    CHECK(std::string(e.what()).find("fingerprint mismatch") != std::string::npos);
  }

  auto missing = j;
  missing["model"] = "absent.onnx";
  std::ofstream(dir / "missing.json") << missing.dump();
  CHECK_THROWS_AS(open_frame_extractor((dir / "missing.json").string()), LoadError);

  {
    std::ofstream(dir / "junk.onnx", std::ios::binary) << "not a network";
  }
  auto junk = j;
  junk["model"] = "junk.onnx";
  junk["fingerprint"] = sha256_file(dir / "junk.onnx");
  std::ofstream(dir / "junk.json") << junk.dump();
  CHECK_THROWS_AS(open_frame_extractor((dir / "junk.json").string()), LoadError);

  std::ofstream(dir / "ok.json") << j.dump();
  CHECK(open_frame_extractor((dir / "ok.json").string())->fingerprint() == j["fingerprint"].get<std::string>());
}

TEST_CASE("content hashes depend on dimensions and bytes") {
  Engine eng = derive_stream(5, "hash");
  const auto a = testkit::random_frame(6, 4, eng);
  auto b = a;
  CHECK(content_hash(a) == content_hash(b));
  b(3, 5, 2) ^= 1;
  CHECK(content_hash(a) != content_hash(b));
  const RgbFrame wide(4, 6, 9), tall(6, 4, 9);
  CHECK(content_hash(wide) != content_hash(tall));
  const std::vector<RgbFrame> ab{a, b}, ba{b, a};
  CHECK(content_hash(ab) != content_hash(ba));
}

TEST_CASE("embedding cache: round trip, corrupt entries and concurrent writers") {
  testkit::TempDir dir("cache");
  const EmbeddingCache cache(dir.path());
  PooledEmbedding e{Eigen::VectorXd::LinSpaced(16, -1.0, 2.0), "global-mean", "fp"};
  CHECK(!cache.get("id", "abcd").has_value());
  cache.put("id", "abcd", e);
  const auto back = cache.get("id", "abcd");
  REQUIRE(back.has_value());
  CHECK(back->values == e.values);
  CHECK(back->pooling == e.pooling);
  CHECK(!cache.get("other", "abcd").has_value());

  const auto path = cache.path_for("id", "abcd");
  fs::resize_file(path, fs::file_size(path) - 3);
  CHECK(!cache.get("id", "abcd").has_value());
  std::ofstream(path, std::ios::binary) << "garbage";
  CHECK(!cache.get("id", "abcd").has_value());

  std::vector<std::thread> writers;
  for (int w = 0; w < 8; ++w) {
    writers.emplace_back([&, w] {
      PooledEmbedding mine{Eigen::VectorXd::Constant(64, double(w)), "global-mean", "fp"};
      for (int i = 0; i < 20; ++i) cache.put("id", "race", mine);
    });
  }
  for (auto& t : writers) t.join();
  const auto winner = cache.get("id", "race");
  REQUIRE(winner.has_value());
  CHECK(winner->values.size() == 64);
  CHECK((winner->values.array() == winner->values[0]).all());
  std::size_t leftovers = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir.path())) {
    if (entry.path().filename().string().find(".tmp") != std::string::npos) ++leftovers;
  }
  CHECK(leftovers == 0);
}

TEST_CASE("caching decorators serve repeated embeddings from disk") {
  testkit::TempDir dir("decorator");
  auto cache = std::make_shared<const EmbeddingCache>(dir.path());
  auto frame_inner = std::make_shared<CountingFrameExtractor>();
  const CachingFrameExtractor frames(frame_inner, cache);
  const auto video = testkit::random_video("v", 20, 12, 5, 8);
  const auto first = frames.embed_batch(video.frames);
  CHECK(frame_inner->embeds == 5);
  const auto second = frames.embed_batch(video.frames);
  CHECK(frame_inner->embeds == 5);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].values == second[i].values);
    CHECK(second[i].values == frame_inner->inner.embed(video.frames[i]).values);
  }

  auto clip_inner = std::make_shared<CountingClipExtractor>();
  const CachingClipExtractor clips(clip_inner, cache);
  const auto e1 = clips.embed(video.frames);
  const auto e2 = clips.embed(video.frames);
  CHECK(clip_inner->embeds == 1);
  CHECK(e1.values == e2.values);
  // A fresh cache object over the same directory sees the stored entries.
  auto other_inner = std::make_shared<CountingClipExtractor>();
  const CachingClipExtractor reopened(other_inner, std::make_shared<const EmbeddingCache>(dir.path()));
  CHECK(reopened.embed(video.frames).values == e1.values);
  CHECK(other_inner->embeds == 0);
}
