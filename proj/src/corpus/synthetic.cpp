#include "vibench/corpus/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <opencv2/imgproc.hpp>

#include "vibench/core/image_io.hpp"
#include "vibench/core/rng.hpp"

namespace vibench::corpus {
namespace {

cv::Scalar random_colour(Engine& eng) {
  std::uniform_int_distribution<int> c(0, 255);
  return cv::Scalar(c(eng), c(eng), c(eng));
}

cv::Mat texture_mat(int width, int height, std::uint64_t seed) {
  Engine eng = derive_stream(seed, "texture");
  cv::Mat img(height, width, CV_8UC3);
  const cv::Scalar a = random_colour(eng), b = random_colour(eng);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double s = 0.5 + 0.5 * std::sin(0.02 * x + 0.03 * y);
      auto& px = img.at<cv::Vec3b>(y, x);
      for (int c = 0; c < 3; ++c) px[c] = cv::saturate_cast<std::uint8_t>(a[c] * s + b[c] * (1 - s));
    }
  }
  std::uniform_int_distribution<int> ux(0, width - 1), uy(0, height - 1), size(3, 18), kind(0, 2);
  const int shapes = std::max(8, width * height / 300);
  for (int i = 0; i < shapes; ++i) {
    const cv::Point p(ux(eng), uy(eng));
    const cv::Scalar colour = random_colour(eng);
    switch (kind(eng)) {
      case 0: cv::rectangle(img, p, p + cv::Point(size(eng), size(eng)), colour, cv::FILLED); break;
      case 1: cv::circle(img, p, size(eng) / 2, colour, cv::FILLED, cv::LINE_AA); break;
      default: cv::line(img, p, cv::Point(ux(eng), uy(eng)), colour, 1 + size(eng) / 8, cv::LINE_AA); break;
    }
  }
  return img;
}

RgbFrame to_frame(const cv::Mat& rgb) {
  RgbFrame out(rgb.cols, rgb.rows);
  cv::Mat dst(rgb.rows, rgb.cols, CV_8UC3, out.data());
  rgb.copyTo(dst);
  return out;
}

}  // namespace

RgbFrame synthesize_texture(int width, int height, std::uint64_t seed) {
  if (width < 1 || height < 1) throw PreconditionError("texture size must be positive");
  return to_frame(texture_mat(width, height, seed));
}

VideoClip synthesize_video(const SceneSpec& spec, const std::string& id) {
  if (spec.width < 1 || spec.height < 1 || spec.length < 1) throw PreconditionError("scene size must be positive");
  const int reach_x = static_cast<int>(std::ceil(std::abs(spec.pan_x) * (spec.length - 1))) + 1;
  const int reach_y = static_cast<int>(std::ceil(std::abs(spec.pan_y) * (spec.length - 1))) + 1;
  const cv::Mat canvas = texture_mat(spec.width + reach_x, spec.height + reach_y, spec.seed);
  const int x0 = spec.pan_x < 0 ? reach_x - 1 : 0;
  const int y0 = spec.pan_y < 0 ? reach_y - 1 : 0;

  struct Mover {
    cv::Point2d position, velocity;
    int radius;
    cv::Scalar colour;
  };
  Engine eng = derive_stream(spec.seed, "movers");
  std::vector<Mover> movers;
  for (int i = 0; i < spec.movers; ++i) {
    movers.push_back({{uniform(eng, 0, spec.width), uniform(eng, 0, spec.height)},
                      {uniform(eng, -3, 3), uniform(eng, -3, 3)},
                      static_cast<int>(uniform(eng, 4, 10)),
                      random_colour(eng)});
  }

  VideoClip clip;
  clip.id = id;
  for (int t = 0; t < spec.length; ++t) {
    const int ox = x0 + static_cast<int>(std::lround(t * spec.pan_x));
    const int oy = y0 + static_cast<int>(std::lround(t * spec.pan_y));
    cv::Mat frame = canvas(cv::Rect(ox, oy, spec.width, spec.height)).clone();
    for (auto& m : movers) {
      cv::circle(frame, cv::Point(static_cast<int>(std::lround(m.position.x)), static_cast<int>(std::lround(m.position.y))),
                 m.radius, m.colour, cv::FILLED, cv::LINE_AA);
      m.position += m.velocity;
      if (m.position.x < 0 || m.position.x >= spec.width) m.velocity.x = -m.velocity.x;
      if (m.position.y < 0 || m.position.y >= spec.height) m.velocity.y = -m.velocity.y;
    }
    clip.frames.push_back(to_frame(frame));
  }
  return clip;
}

Manifest make_synthetic_corpus(const SyntheticCorpusOptions& o, const std::filesystem::path& root) {
  if (o.clips < 1 || o.min_length < 1 || o.max_length < o.min_length) {
    throw PreconditionError("invalid synthetic corpus options");
  }
  Engine eng = derive_stream(o.seed, "synthetic-corpus");
  std::uniform_int_distribution<int> length(o.min_length, o.max_length);
  Manifest manifest;
  manifest.root = root;
  for (int i = 0; i < o.clips; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "synth-%03d", i);
    const bool pans = i % 2 == 0;
    const bool moving = (i / 2) % 2 == 0;
    SceneSpec spec;
    spec.width = o.width;
    spec.height = o.height;
    spec.length = length(eng);
    const double angle = uniform(eng, 0, 2 * M_PI);
    spec.pan_x = pans ? o.pan_speed * std::cos(angle) : 0.0;
    spec.pan_y = pans ? o.pan_speed * std::sin(angle) : 0.0;
    spec.movers = moving ? o.movers : 0;
    spec.seed = derive_seed(o.seed, id);
    const VideoClip clip = synthesize_video(spec, id);
    const std::string rel = std::string("clips/") + id;
    write_frame_dir(clip.frames, root / rel);
    ClipEntry entry{id, rel, clip.length(), {}};
    entry.labels.add({Attribute::kCameraMotion, pans ? Setting::kHigh : Setting::kLow});
    entry.labels.add({Attribute::kBgSceneMotion, moving ? Setting::kHigh : Setting::kLow});
    manifest.clips.push_back(std::move(entry));
  }
  manifest.validate();
  return manifest;
}

}  // namespace vibench::corpus
