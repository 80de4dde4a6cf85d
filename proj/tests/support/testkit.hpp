#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "vibench/core/image.hpp"
#include "vibench/core/rng.hpp"

namespace vibench::testkit {

/// Fresh directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("vibench-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline RgbFrame random_frame(int width, int height, Engine& eng) {
  RgbFrame f(width, height);
  std::uniform_int_distribution<int> byte(0, 255);
  for (Eigen::Index i = 0; i < f.interleaved().size(); ++i) f.data()[i] = static_cast<std::uint8_t>(byte(eng));
  return f;
}

inline VideoClip random_video(const std::string& id, int width, int height, int length, std::uint64_t seed) {
  Engine eng = derive_stream(seed, "test-video");
  VideoClip v{id, {}};
  for (int t = 0; t < length; ++t) v.frames.push_back(random_frame(width, height, eng));
  return v;
}

inline VideoClip constant_video(const std::string& id, int width, int height, int length, std::uint8_t value) {
  VideoClip v{id, {}};
  for (int t = 0; t < length; ++t) v.frames.emplace_back(width, height, value);
  return v;
}

/// Rectangle [x, x + w) x [y, y + h) occluded in every frame.
inline MaskSequence box_mask(const std::string& id, int width, int height, int length, int x, int y, int w, int h) {
  MaskSequence m;
  m.id = id;
  for (int t = 0; t < length; ++t) {
    MaskFrame f = MaskFrame::Zero(height, width);
    f.block(y, x, h, w).setOnes();
    m.frames.push_back(f);
  }
  return m;
}

/// Independent Bernoulli(p) voxels; every frame has at least one set pixel.
inline MaskSequence random_mask(const std::string& id, int width, int height, int length, std::uint64_t seed,
                                double p = 0.3) {
  Engine eng = derive_stream(seed, "test-mask");
  MaskSequence m;
  m.id = id;
  m.seed = seed;
  for (int t = 0; t < length; ++t) {
    MaskFrame f(height, width);
    for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = bernoulli(eng, p) ? 1 : 0;
    f(0, 0) = 1;
    m.frames.push_back(f);
  }
  return m;
}

/// Build-time export directory of the seeded ONNX test models.
inline std::filesystem::path model_dir() { return VIBENCH_TEST_MODEL_DIR; }

}  // namespace vibench::testkit
