#include <cmath>
#include <Eigen/Geometry>
#include <numbers>

#include "doctest.h"
#include "support/testkit.hpp"
#include "vibench/corpus/synthetic.hpp"
#include "vibench/videoattr/affine.hpp"
#include "vibench/videoattr/camera_motion.hpp"
#include "vibench/videoattr/coverage.hpp"

using namespace vibench;
using namespace vibench::videoattr;

namespace {

AffineTransform rotation_about_center(double theta, int w, int h) {
  const Eigen::Matrix2d r = Eigen::Rotation2Dd(theta).toRotationMatrix();
  const Eigen::Vector2d c(w / 2.0, h / 2.0);
  AffineTransform t;
  t.leftCols<2>() = r;
  t.col(2) = c - r * c;
  return t;
}

// Oracle: 4x supersampled coverage of the target canvas by the warped source.
double invalid_fraction_raster(const AffineTransform& t, int w, int h) {
  const Eigen::Matrix2d inv = t.leftCols<2>().inverse();
  long invalid = 0, total = 0;
  for (int y = 0; y < 4 * h; ++y) {
    for (int x = 0; x < 4 * w; ++x) {
      const Eigen::Vector2d p((x + 0.5) / 4.0, (y + 0.5) / 4.0);
      const Eigen::Vector2d s = inv * (p - t.col(2));
      ++total;
      if (s.x() < 0 || s.x() > w || s.y() < 0 || s.y() > h) ++invalid;
    }
  }
  return double(invalid) / double(total);
}

/// Pan across a fixed texture by `step` pixels per frame.
VideoClip pan_clip(int w, int h, int length, double step, std::uint64_t seed) {
  return corpus::synthesize_video({.width = w, .height = h, .length = length, .pan_x = step, .seed = seed}, "pan");
}

}  // namespace

TEST_CASE("least-squares affine fit recovers exact correspondences") {
  Engine eng = derive_stream(1, "fit");
  for (int trial = 0; trial < 20; ++trial) {
    AffineTransform t;
    t << uniform(eng, 0.5, 1.5), uniform(eng, -0.3, 0.3), uniform(eng, -50, 50), uniform(eng, -0.3, 0.3),
        uniform(eng, 0.5, 1.5), uniform(eng, -50, 50);
    std::vector<Eigen::Vector2d> src, dst;
    for (int i = 0; i < 3 + trial; ++i) {
      src.emplace_back(uniform(eng, 0, 300), uniform(eng, 0, 200));
      dst.push_back(apply(t, src.back()));
    }
    CHECK((fit_affine(src, dst) - t).cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK_THROWS_AS(fit_affine({{0, 0}, {1, 1}}, {{0, 0}, {1, 1}}), PreconditionError);
}

TEST_CASE("RANSAC ignores a large fraction of outliers") {
  Engine eng = derive_stream(2, "ransac");
  AffineTransform t;
  t << 0.98, 0.05, 12.0, -0.04, 1.02, -7.0;
  Correspondences c;
  for (int i = 0; i < 120; ++i) {
    const Eigen::Vector2d p(uniform(eng, 0, 400), uniform(eng, 0, 300));
    c.source.push_back(p);
    if (i % 10 < 4) {
      c.target.emplace_back(uniform(eng, 0, 400), uniform(eng, 0, 300));
    } else {
      c.target.push_back(apply(t, p) + Eigen::Vector2d(uniform(eng, -0.5, 0.5), uniform(eng, -0.5, 0.5)));
    }
  }
  Engine stream = derive_stream(3, "ransac");
  const auto est = ransac_affine(c, {}, stream);
  REQUIRE(est.has_value());
  CHECK(est->inliers >= 72);
  CHECK((est->transform - t).leftCols<2>().cwiseAbs().maxCoeff() < 5e-3);
  CHECK((est->transform.col(2) - t.col(2)).norm() < 1.0);

  Correspondences few{{c.source.begin(), c.source.begin() + 5}, {c.target.begin(), c.target.begin() + 5}};
  CHECK(!ransac_affine(few, {}, stream).has_value());
}

TEST_CASE("feature-based alignment: identity, known shift, unrelated noise") {
  const auto texture = corpus::synthesize_texture(360, 200, 5);
  Engine eng = derive_stream(4, "align");
  const auto same = estimate_affine(texture, texture, {}, eng);
  REQUIRE(same.has_value());
  CHECK((same->transform.leftCols<2>() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-2);
  CHECK(same->transform.col(2).norm() < 0.5);

  // b is a shifted 20 px to the right: b(x + 20) = a(x).
  const RgbFrame a(Plane<std::uint8_t>(texture.interleaved().block(0, 3 * 40, 200, 3 * 300)));
  const RgbFrame b(Plane<std::uint8_t>(texture.interleaved().block(0, 3 * 20, 200, 3 * 300)));
  const auto shift = estimate_affine(a, b, {}, eng);
  REQUIRE(shift.has_value());
  CHECK(std::abs(shift->transform(0, 2) - 20.0) < 0.5);
  CHECK(std::abs(shift->transform(1, 2)) < 0.5);
  CHECK((shift->transform.leftCols<2>() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-2);

  const auto n1 = testkit::random_frame(200, 150, eng);
  const auto n2 = testkit::random_frame(200, 150, eng);
  CHECK(!estimate_affine(n1, n2, {}, eng).has_value());
  CHECK(!estimate_affine(RgbFrame(200, 150, 90), RgbFrame(200, 150, 91), {}, eng).has_value());
}

TEST_CASE("polygon area and rectangle clipping") {
  using P = Eigen::Vector2d;
  CHECK(polygon_area<double>({P(0, 0), P(4, 0), P(4, 3), P(0, 3)}) == 12.0);
  CHECK(polygon_area<double>({P(0, 0), P(0, 3), P(4, 3), P(4, 0)}) == 12.0);
  CHECK(polygon_area<double>({P(0, 0), P(4, 0), P(0, 4)}) == 8.0);
  const auto clipped = clip_to_rect<double>({P(-2, -2), P(6, -2), P(6, 6), P(-2, 6)}, 4.0, 3.0);
  CHECK(polygon_area(clipped) == doctest::Approx(12.0));
  CHECK(clip_to_rect<double>({P(10, 10), P(12, 10), P(12, 12)}, 4.0, 3.0).empty());
  const auto diamond = clip_to_rect<double>({P(2, -1), P(5, 1.5), P(2, 4), P(-1, 1.5)}, 4.0, 3.0);
  CHECK(polygon_area(diamond) > 0.0);
  CHECK(polygon_area(diamond) < 12.0);
}

TEST_CASE("invalid fraction: identity, shifts, rotations against raster coverage") {
  AffineTransform identity = AffineTransform::Zero();
  identity.leftCols<2>().setIdentity();
  CHECK(invalid_fraction(identity, 64, 48) == 0.0);
  for (double f : {0.05, 0.2, 0.5, 0.9}) {
    AffineTransform shift = identity;
    shift(0, 2) = f * 64;
    CHECK(invalid_fraction(shift, 64, 48) == doctest::Approx(f).epsilon(1e-12));
    shift(0, 2) = -f * 64;
    CHECK(invalid_fraction(shift, 64, 48) == doctest::Approx(f).epsilon(1e-12));
  }
  AffineTransform gone = identity;
  gone(0, 2) = 100;
  CHECK(invalid_fraction(gone, 64, 48) == 1.0);

  for (double theta : {0.05, 0.3, 0.8, std::numbers::pi / 2, 2.5}) {
    const auto r = rotation_about_center(theta, 64, 48);
    CHECK(std::abs(invalid_fraction(r, 64, 48) - invalid_fraction_raster(r, 64, 48)) < 5e-3);
  }
  Engine eng = derive_stream(6, "invalid");
  for (int trial = 0; trial < 30; ++trial) {
    AffineTransform t;
    t << uniform(eng, 0.3, 2), uniform(eng, -0.6, 0.6), uniform(eng, -40, 40), uniform(eng, -0.6, 0.6),
        uniform(eng, 0.3, 2), uniform(eng, -40, 40);
    if (std::abs(t.leftCols<2>().determinant()) < 0.05) continue;
    const double v = invalid_fraction(t, 50, 40);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(std::abs(v - invalid_fraction_raster(t, 50, 40)) < 1e-2);
  }
  AffineTransform singular = AffineTransform::Zero();
  singular(0, 0) = 1;
  CHECK_THROWS_AS(invalid_fraction(singular, 10, 10), PreconditionError);
}

TEST_CASE("compatibility mappings, labels, sampling") {
  CHECK(compatibility_from_invalid(0.25, CompatibilityMapping::kComplement) == 0.75);
  CHECK(compatibility_from_invalid(0.0, CompatibilityMapping::kReciprocal, 0.01) == 1.0);
  CHECK(compatibility_from_invalid(0.09, CompatibilityMapping::kReciprocal, 0.01) == doctest::Approx(0.1));
  const CameraMotionThresholds t;
  CHECK(label_from_compatibility(0.9, t) == Setting::kLow);
  CHECK(label_from_compatibility(0.85, t) == Setting::kLow);
  CHECK(label_from_compatibility(0.6, t) == Setting::kHigh);
  CHECK(!label_from_compatibility(0.7, t).has_value());
  CameraMotionThresholds bad{0.5, 0.6};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  const auto idx = sample_evenly(60, 10);
  REQUIRE(idx.size() == 10);
  CHECK(idx.front() == 0);
  CHECK(idx.back() == 59);
  CHECK(std::is_sorted(idx.begin(), idx.end()));
  CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
  CHECK(sample_evenly(10, 10) == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("camera motion: still clips are compatible, short clips rejected") {
  const CameraMotionOptions options;
  const auto still = testkit::constant_video("still", 64, 48, 10, 0);
  const VideoClip textured{"tex", std::vector<RgbFrame>(10, corpus::synthesize_texture(160, 96, 2))};
  for (const auto* clip : {&still, &textured}) {
    const auto r = classify_camera_motion(*clip, options);
    CHECK(r.total_compatibility == 1.0);
    CHECK(r.label == Setting::kLow);
    CHECK(r.pairs.size() == 45);
    CHECK(r.sampled_frames.size() == 10);
  }
  VideoClip nine = textured;
  nine.frames.pop_back();
  CHECK_THROWS_AS(classify_camera_motion(nine, options), PreconditionError);
}

TEST_CASE("camera motion on synthetic pans: bound, monotonicity, reversal") {
  const CameraMotionOptions options;
  // 5% of the width per sampled step: the farthest pair is shifted 45%.
  const auto pan = pan_clip(240, 144, 10, 12.0, 7);
  const auto r = classify_camera_motion(pan, options);
  CHECK(r.total_compatibility <= 1 - 0.45 + 1e-2);
  CHECK(r.label == Setting::kHigh);
  for (const auto& p : r.pairs) {
    CHECK(p.compatibility >= 0.0);
    CHECK(p.compatibility <= 1.0);
  }

  double previous = 2.0;
  for (double step : {0.0, 2.0, 5.0, 9.0, 14.0}) {
    const auto clip = pan_clip(240, 144, 19, step, 8);
    const double total = classify_camera_motion(clip, options).total_compatibility;
    CHECK(total <= previous + 1e-2);
    previous = total;
  }

  VideoClip reversed = pan_clip(240, 144, 19, 4.0, 9);
  const double forward = classify_camera_motion(reversed, options).total_compatibility;
  std::reverse(reversed.frames.begin(), reversed.frames.end());
  CHECK(classify_camera_motion(reversed, options).total_compatibility == doctest::Approx(forward).epsilon(1e-2));
}

TEST_CASE("average precision on hand-ranked cases") {
  CHECK(average_precision({0.9, 0.8, 0.7}, {true, true, false}) == 1.0);
  CHECK(average_precision({0.9, 0.8, 0.7}, {true, false, true}) == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0));
  CHECK(average_precision({0.9, 0.8, 0.7}, {false, false, true}) == doctest::Approx(1.0 / 3.0));
  CHECK(average_precision({0.5, 0.5}, {true, false}) == 0.5);
  CHECK(average_precision({0.5, 0.5, 0.1}, {false, true, true}) == doctest::Approx(0.5 * 0.5 + 0.5 * 2.0 / 3.0));
  CHECK_THROWS_AS(average_precision({0.5}, {false}), PreconditionError);
  CHECK_THROWS_AS(average_precision({0.5}, {true, false}), PreconditionError);
}

TEST_CASE("manifest annotation labels clips and refuses conflicts") {
  testkit::TempDir dir("annotate");
  auto m = corpus::make_synthetic_corpus(
      {.clips = 4, .width = 160, .height = 96, .min_length = 45, .max_length = 46, .pan_speed = 6.0, .movers = 0, .seed = 2},
      dir.path());
  for (auto& c : m.clips) c.labels = LabelSet{};
  int seen = 0;
  const auto annotated = annotate_camera_motion(m, {}, [&](const std::string&, const CameraMotionResult&) { ++seen; });
  CHECK(seen == 4);
  CHECK(annotated.clips[0].labels.get(Attribute::kCameraMotion) == Setting::kHigh);
  CHECK(annotated.clips[1].labels.get(Attribute::kCameraMotion) == Setting::kLow);
  CHECK(annotate_camera_motion(annotated, {}) == annotated);
  auto conflicting = annotated;
  conflicting.clips[1].labels = LabelSet::from_strings({"camera_motion:high"});
  CHECK_THROWS_AS(annotate_camera_motion(conflicting, {}), ValidationError);
}
