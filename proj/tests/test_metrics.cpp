#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "support/oracles.hpp"
#include "support/testkit.hpp"
#include "vibench/features/toy_extractor.hpp"
#include "vibench/metrics/gaussian.hpp"
#include "vibench/metrics/metric.hpp"
#include "vibench/metrics/pcons.hpp"
#include "vibench/metrics/perceptual.hpp"
#include "vibench/metrics/realism.hpp"

using namespace vibench;
using namespace vibench::metrics;
using features::FeatureSet;
using features::FeatureTensor;
using testkit::frechet_oracle;
using testkit::pcons_oracle;
using testkit::random_spd;
using testkit::random_vec;
using testkit::translating_video;

namespace {

FeatureSet single(float a) {
  FeatureSet f;
  FeatureTensor t;
  t.shape = {1, 1, 1};
  t.values = Eigen::MatrixXf::Constant(1, 1, a);
  f.layers.push_back(t);
  return f;
}

FeatureSet random_features(Engine& eng, const std::vector<std::pair<int, int>>& layers) {
  std::normal_distribution<float> n(0.0f, 1.0f);
  FeatureSet f;
  for (auto [c, p] : layers) {
    FeatureTensor t;
    t.shape = {c, p};
    t.values.resize(c, p);
    for (Eigen::Index i = 0; i < t.values.size(); ++i) t.values.data()[i] = n(eng);
    f.layers.push_back(t);
  }
  return f;
}

// Oracle: the distance formula written out with scalar loops.
double distance_oracle(const FeatureSet& a, const FeatureSet& b, const features::LayerWeights& w) {
  double total = 0;
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    const auto& x = a.layers[l].values;
    const auto& y = b.layers[l].values;
    double layer = 0;
    for (Eigen::Index p = 0; p < x.cols(); ++p) {
      double nx = 0, ny = 0;
      for (Eigen::Index c = 0; c < x.rows(); ++c) {
        nx += double(x(c, p)) * x(c, p);
        ny += double(y(c, p)) * y(c, p);
      }
      nx = std::sqrt(nx) + 1e-10;
      ny = std::sqrt(ny) + 1e-10;
      for (Eigen::Index c = 0; c < x.rows(); ++c) {
        const double d = x(c, p) / nx - y(c, p) / ny;
        layer += (w.empty() ? 1.0 : double(w[l][c])) * d * d;
      }
    }
    total += layer / double(x.cols());
  }
  return total;
}

// Oracle: toy frame features from direct block averaging.
FeatureSet toy_features_oracle(const features::ToyFrameExtractor& ex, const RgbFrame& f) {
  FeatureSet out;
  const auto specs = features::ToyFrameExtractor::default_layers();
  for (std::size_t l = 0; l < specs.size(); ++l) {
    const int gh = std::max(1, f.height() / specs[l].spatial_stride);
    const int gw = std::max(1, f.width() / specs[l].spatial_stride);
    FeatureTensor t;
    t.shape = {specs[l].channels, gh, gw};
    t.values.resize(specs[l].channels, gh * gw);
    for (int i = 0; i < gh; ++i) {
      for (int j = 0; j < gw; ++j) {
        const int y0 = i * f.height() / gh, y1 = (i + 1) * f.height() / gh;
        const int x0 = j * f.width() / gw, x1 = (j + 1) * f.width() / gw;
        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        for (int y = y0; y < y1; ++y) {
          for (int x = x0; x < x1; ++x) {
            for (int c = 0; c < 3; ++c) mean[c] += f(y, x, c) / 255.0;
          }
        }
        mean /= double(y1 - y0) * (x1 - x0);
        t.values.col(i * gw + j) =
            (ex.layer_weight(l).cast<double>() * mean + ex.layer_bias(l).cast<double>()).cast<float>();
      }
    }
    out.layers.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("metric directions follow the lower/higher-is-better convention") {
  CHECK(direction_of(Metric::kLpips) == Direction::kLowerBetter);
  CHECK(direction_of(Metric::kPvcs) == Direction::kLowerBetter);
  CHECK(direction_of(Metric::kFid) == Direction::kLowerBetter);
  CHECK(direction_of(Metric::kVfid) == Direction::kLowerBetter);
  CHECK(direction_of(Metric::kPcons) == Direction::kHigherBetter);
  CHECK(parse_metric_list("lpips,pcons") == std::vector<Metric>{Metric::kLpips, Metric::kPcons});
  CHECK_THROWS_AS(parse_metric_list("lpips,,fid"), ParseError);
  CHECK_THROWS_AS(parse_metric_list("lpips,lpips"), ParseError);
  CHECK_THROWS_AS(parse_metric("ssim"), ParseError);
  CHECK(MetricScore{Metric::kPcons, 30}.better_than(28));
  CHECK(MetricScore{Metric::kLpips, 0.2}.better_than(0.3));
}

TEST_CASE("perceptual distance: identity, hand-evaluated normalization and symmetry") {
  CHECK(perceptual_distance(single(0.7f), single(0.7f)) == 0.0);
  // a -> 1 / (1 + 1e-10), b -> 0 / (0 + 1e-10) = 0.
  const double expected = 0.99999999980000000003;
  CHECK(perceptual_distance(single(1.0f), single(0.0f), {Eigen::VectorXf::Ones(1)}) ==
        doctest::Approx(expected).epsilon(1e-15));

  Engine eng = derive_stream(3, "perceptual");
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_features(eng, {{4, 9}, {6, 4}, {3, 1}});
    const auto b = random_features(eng, {{4, 9}, {6, 4}, {3, 1}});
    features::LayerWeights w{Eigen::VectorXf::Random(4).cwiseAbs(), Eigen::VectorXf::Random(6).cwiseAbs(),
                             Eigen::VectorXf::Random(3).cwiseAbs()};
    const double dab = perceptual_distance(a, b, w);
    CHECK(dab == doctest::Approx(perceptual_distance(b, a, w)).epsilon(1e-12));
    CHECK(dab == doctest::Approx(distance_oracle(a, b, w)).epsilon(1e-9));
    CHECK(dab >= 0.0);
  }
}

TEST_CASE("perceptual distance rejects schema mismatches") {
  Engine eng = derive_stream(4, "perceptual");
  const auto a = random_features(eng, {{4, 9}});
  const auto b = random_features(eng, {{4, 8}});
  const auto c = random_features(eng, {{4, 9}, {2, 2}});
  CHECK_THROWS_AS(perceptual_distance(a, b), PreconditionError);
  CHECK_THROWS_AS(perceptual_distance(a, c), PreconditionError);
  CHECK_THROWS_AS(perceptual_distance(a, a, {Eigen::VectorXf::Ones(3)}), PreconditionError);
}

TEST_CASE("LPIPS video: zero on equal input, frame mean, toy formula") {
  const features::ToyFrameExtractor ex;
  const auto ref = testkit::random_video("r", 40, 24, 4, 1);
  const auto pred = testkit::random_video("p", 40, 24, 4, 2);
  CHECK(lpips_video(ref, ref, ex) == 0.0);

  double oracle = 0;
  for (int t = 0; t < 4; ++t) {
    oracle += distance_oracle(toy_features_oracle(ex, pred.frames[std::size_t(t)]),
                              toy_features_oracle(ex, ref.frames[std::size_t(t)]), ex.calibration_weights());
  }
  CHECK(lpips_video(pred, ref, ex) == doctest::Approx(oracle / 4).epsilon(1e-5));

  const VideoClip p1{"p", {pred.frames[0]}}, r1{"r", {ref.frames[0]}};
  CHECK(lpips_video(p1, r1, ex) ==
        doctest::Approx(perceptual_distance(ex.extract(pred.frames[0]), ex.extract(ref.frames[0]),
                                            ex.calibration_weights())));
  CHECK_THROWS_AS(lpips_video(p1, ref, ex), PreconditionError);
}

TEST_CASE("PVCS: window enumeration, single window, short videos") {
  const features::ToyClipExtractor ex;
  const auto ref = testkit::random_video("r", 32, 24, 13, 5);
  const auto pred = testkit::random_video("p", 32, 24, 13, 6);
  CHECK(pvcs_video(ref, ref, ex) == 0.0);

  double oracle = 0;
  for (int s = 0; s + 10 <= 13; ++s) {
    std::vector<RgbFrame> wp(pred.frames.begin() + s, pred.frames.begin() + s + 10);
    std::vector<RgbFrame> wr(ref.frames.begin() + s, ref.frames.begin() + s + 10);
    oracle += distance_oracle(ex.extract(wp), ex.extract(wr), {});
  }
  CHECK(pvcs_video(pred, ref, ex) == doctest::Approx(oracle / 4).epsilon(1e-9));

  VideoClip p10 = pred, r10 = ref;
  p10.frames.resize(10);
  r10.frames.resize(10);
  CHECK(pvcs_video(p10, r10, ex) == doctest::Approx(distance_oracle(ex.extract(p10.frames), ex.extract(r10.frames), {})));

  VideoClip p9 = p10, r9 = r10;
  p9.frames.resize(9);
  r9.frames.resize(9);
  CHECK_THROWS_AS(pvcs_video(p9, r9, ex), PreconditionError);
}

TEST_CASE("PVCS has T - 9 windows and dropping the last frame removes only the last window") {
  const features::ToyClipExtractor ex;
  for (int length : {10, 11, 15, 20}) {
    const auto ref = testkit::random_video("r", 24, 16, length, 100 + length);
    const auto pred = testkit::random_video("p", 24, 16, length, 200 + length);
    const double full = pvcs_video(pred, ref, ex) * (length - 9);
    if (length == 10) continue;
    VideoClip ps = pred, rs = ref;
    ps.frames.pop_back();
    rs.frames.pop_back();
    const double shorter = pvcs_video(ps, rs, ex) * (length - 10);
    std::vector<RgbFrame> wp(pred.frames.end() - 10, pred.frames.end());
    std::vector<RgbFrame> wr(ref.frames.end() - 10, ref.frames.end());
    CHECK(full - shorter == doctest::Approx(perceptual_distance(ex.extract(wp), ex.extract(wr))).epsilon(1e-9));
  }
}

TEST_CASE("Frechet distance: identity, 1-D closed form, eigen oracle, symmetry") {
  Engine eng = derive_stream(9, "frechet");
  GaussianSummary<double> g{random_vec(eng, 5), random_spd(eng, 5)};
  CHECK(std::abs(frechet_distance(g, g)) < 1e-6);

  GaussianSummary<double> a{Eigen::VectorXd::Constant(1, 0.0), Eigen::MatrixXd::Constant(1, 1, 1.0)};
  GaussianSummary<double> b{Eigen::VectorXd::Constant(1, 3.0), Eigen::MatrixXd::Constant(1, 1, 1.0)};
  CHECK(std::abs(frechet_distance(a, b) - 9.0) < 1e-9);
  GaussianSummary<double> c{Eigen::VectorXd::Constant(1, 3.0), Eigen::MatrixXd::Constant(1, 1, 4.0)};
  CHECK(frechet_distance(a, c) == doctest::Approx(9.0 + 1.0).epsilon(1e-12));  // (1 - 2)^2

  for (int trial = 0; trial < 25; ++trial) {
    const int d = 1 + trial % 7;
    GaussianSummary<double> g1{random_vec(eng, d), random_spd(eng, d)};
    GaussianSummary<double> g2{random_vec(eng, d), random_spd(eng, d)};
    const double v = frechet_distance(g1, g2);
    CHECK(std::abs(v - frechet_oracle(g1.mean, g1.cov, g2.mean, g2.cov)) < 1e-6);
    CHECK(std::abs(v - frechet_distance(g2, g1)) < 1e-8);
    CHECK(v > -1e-9);
  }
  GaussianSummary<double> d3{random_vec(eng, 3), random_spd(eng, 3)};
  CHECK_THROWS_AS(frechet_distance(g, d3), PreconditionError);
}

TEST_CASE("Gaussian accumulator: shards merge to the single-pass fit") {
  Engine eng = derive_stream(10, "accumulate");
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + trial % 4;
    std::vector<Eigen::VectorXd> xs;
    for (int i = 0; i < 40; ++i) xs.push_back(random_vec(eng, d) * 3.0 + Eigen::VectorXd::Constant(d, 5.0));
    GaussianAccumulator<double> whole;
    for (const auto& x : xs) whole.add(x);
    std::uniform_int_distribution<int> cut(1, 38);
    const int c1 = cut(eng), c2 = std::max(c1, cut(eng));
    GaussianAccumulator<double> s1, s2, s3;
    for (int i = 0; i < 40; ++i) (i < c1 ? s1 : i < c2 ? s2 : s3).add(xs[std::size_t(i)]);
    GaussianAccumulator<double> left = s1, right = s2;
    left.merge(s2);
    left.merge(s3);
    right.merge(s3);
    right.merge(s1);
    // Oracle: two-pass mean and n - 1 covariance.
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (const auto& x : xs) mean += x;
    mean /= 40.0;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (const auto& x : xs) cov += (x - mean) * (x - mean).transpose();
    cov /= 39.0;
    for (const auto* acc : {&whole, &left, &right}) {
      const auto g = acc->summary();
      CHECK((g.mean - mean).norm() < 1e-10);
      CHECK((g.cov - cov).norm() < 1e-9);
      CHECK(acc->count() == 40);
    }
  }
  GaussianAccumulator<double> empty;
  CHECK_THROWS_AS(empty.summary(), PreconditionError);
}

TEST_CASE("FID: identical sets, permutation invariance, degenerate sets") {
  const features::ToyFrameExtractor ex;
  const auto a = testkit::random_video("a", 16, 16, 30, 11);
  const auto b = testkit::random_video("b", 16, 16, 30, 12);
  CHECK(std::abs(fid(a.frames, a.frames, ex)) < 1e-6);
  auto shuffled = b.frames;
  Engine eng = derive_stream(1, "shuffle");
  std::shuffle(shuffled.begin(), shuffled.end(), eng);
  CHECK(fid(a.frames, b.frames, ex) == doctest::Approx(fid(a.frames, shuffled, ex)).epsilon(1e-9));

  std::vector<std::string> warnings;
  const std::vector<RgbFrame> one{a.frames[0]};
  const double v = fid(one, one, ex, &warnings);
  CHECK(std::abs(v) < 1e-6);
  CHECK(warnings.size() == 2);
  CHECK_THROWS_AS(fid({}, one, ex), PreconditionError);
}

TEST_CASE("FID of sampled constant-colour sets approaches the analytic Gaussian value") {
  const features::ToyFrameExtractor ex;
  const Eigen::MatrixXd W = ex.embedding_weight().cast<double>();
  const Eigen::VectorXd bias = ex.embedding_bias().cast<double>();
  const Eigen::Vector3d mu1(100, 120, 140), mu2(130, 110, 150);
  Eigen::Matrix3d s1 = Eigen::Matrix3d::Zero(), s2 = Eigen::Matrix3d::Zero();
  s1.diagonal() << 400, 225, 300;
  s2.diagonal() << 256, 400, 196;
  s2(0, 1) = s2(1, 0) = 80;

  // Embeddings are W rgb / 255 + b, so colours N(mu, S) map to N(W mu / 255 + b, W S W^T / 255^2).
  const auto embed_gauss = [&](const Eigen::Vector3d& mu, const Eigen::Matrix3d& s) {
    return std::make_pair(Eigen::VectorXd(W * mu / 255.0 + bias), Eigen::MatrixXd(W * s * W.transpose() / 65025.0));
  };
  const auto [m1, c1] = embed_gauss(mu1, s1);
  const auto [m2, c2] = embed_gauss(mu2, s2);
  const double analytic = frechet_oracle(m1, c1, m2, c2);

  auto sample = [&](const Eigen::Vector3d& mu, const Eigen::Matrix3d& s, std::uint64_t seed, int n) {
    Engine eng = derive_stream(seed, "colours");
    std::normal_distribution<double> z(0, 1);
    const Eigen::Matrix3d L = s.llt().matrixL();
    std::vector<RgbFrame> frames;
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector3d c = mu + L * Eigen::Vector3d(z(eng), z(eng), z(eng));
      RgbFrame f(4, 4);
      for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) {
          for (int k = 0; k < 3; ++k) f(y, x, k) = static_cast<std::uint8_t>(std::clamp(std::lround(c[k]), 0L, 255L));
        }
      }
      frames.push_back(f);
    }
    return frames;
  };
  double previous_error = 1e300;
  for (int n : {500, 20000}) {
    const double v = fid(sample(mu1, s1, 1, n), sample(mu2, s2, 2, n), ex);
    const double error = std::abs(v - analytic) / analytic;
    MESSAGE("n=" << n << " fid=" << v << " analytic=" << analytic);
    if (n == 20000) CHECK(error < 0.05);
    CHECK(error < previous_error + 0.02);
    previous_error = error;
  }
}

TEST_CASE("VFID: identical sets are zero and set sizes below the dimension warn") {
  const features::ToyClipExtractor ex;
  std::vector<VideoClip> a, b;
  for (int i = 0; i < 3; ++i) a.push_back(testkit::random_video("a", 16, 16, 12, 30 + i));
  std::vector<std::string> warnings;
  CHECK(std::abs(vfid(a, a, ex, &warnings)) < 1e-6);
  CHECK(!warnings.empty());
  CHECK_THROWS_AS(vfid(a, b, ex), PreconditionError);
}

TEST_CASE("PSNR: cap, extremes and direct MSE") {
  Plane<std::uint8_t> a = Plane<std::uint8_t>::Constant(10, 30, 0);
  Plane<std::uint8_t> b = Plane<std::uint8_t>::Constant(10, 30, 255);
  CHECK(psnr(a, a) == 100.0);
  CHECK(psnr(a, a, 60.0) == 60.0);
  CHECK(psnr(a, b) == doctest::Approx(0.0));
  Engine eng = derive_stream(1, "psnr");
  const auto fa = testkit::random_frame(20, 10, eng), fb = testkit::random_frame(20, 10, eng);
  double se = 0;
  for (Eigen::Index i = 0; i < fa.interleaved().size(); ++i) {
    const double d = double(fa.data()[i]) - fb.data()[i];
    se += d * d;
  }
  const double mse = se / double(fa.interleaved().size());
  CHECK(psnr(fa.interleaved(), fb.interleaved()) == doctest::Approx(10 * std::log10(65025.0 / mse)).epsilon(1e-12));
  CHECK_THROWS_AS(psnr(a, Plane<std::uint8_t>(Plane<std::uint8_t>::Zero(10, 29))), PreconditionError);
}

TEST_CASE("PCons: static and small translations hit the cap, large ones match exhaustive search") {
  const auto mask = testkit::box_mask("m", 120, 90, 4, 50, 35, 20, 20);
  const auto still = testkit::constant_video("s", 120, 90, 4, 0);
  Engine eng = derive_stream(5, "pcons");
  VideoClip textured{"t", std::vector<RgbFrame>(4, testkit::random_frame(120, 90, eng))};
  CHECK(pcons_video(textured, mask) == 100.0);
  CHECK(pcons_video(still, mask) == 100.0);

  const auto shifted = translating_video(120, 90, 4, 8, -5, 21);
  CHECK(pcons_video(shifted, mask) == 100.0);
  CHECK(pcons_video(translating_video(120, 90, 4, 20, 20, 22), mask) == 100.0);

  for (auto [dx, dy] : {std::pair{25, 0}, {0, -21}, {30, 30}}) {
    const auto far = translating_video(120, 90, 4, dx, dy, 23);
    const double v = pcons_video(far, mask);
    CHECK(v < 100.0);
    CHECK(std::abs(v - pcons_oracle(far, mask)) < 1e-9);
  }
}

TEST_CASE("PCons clips the source centroid and handles multi-component masks") {
  const auto video = testkit::random_video("v", 100, 70, 3, 40);
  auto corner = testkit::box_mask("m", 100, 70, 3, 0, 0, 3, 3);
  CHECK(pcons_source_corner(corner.frames[0]) == Eigen::Vector2i(0, 0));
  CHECK(std::abs(pcons_video(video, corner) - pcons_oracle(video, corner)) < 1e-9);

  auto two = testkit::box_mask("m", 100, 70, 3, 0, 0, 4, 4);
  for (auto& f : two.frames) f.block(60, 90, 4, 4).setOnes();
  // Joint centroid (46.5, 31.5) rounds half-up to (47, 32).
  CHECK(pcons_source_corner(two.frames[0]) == Eigen::Vector2i(22, 7));
  CHECK(std::abs(pcons_video(video, two) - pcons_oracle(video, two)) < 1e-9);

  const auto random = testkit::random_mask("r", 100, 70, 3, 3, 0.05);
  CHECK(std::abs(pcons_video(video, random) - pcons_oracle(video, random)) < 1e-9);
}

TEST_CASE("PCons preconditions") {
  const auto small = testkit::random_video("v", 40, 60, 3, 1);
  const auto mask = testkit::box_mask("m", 40, 60, 3, 5, 5, 5, 5);
  CHECK_THROWS_AS(pcons_video(small, mask), PreconditionError);
  const auto video = testkit::random_video("v", 60, 60, 3, 1);
  auto empty = testkit::box_mask("m", 60, 60, 3, 5, 5, 5, 5);
  empty.frames[1].setZero();
  CHECK_THROWS_AS(pcons_video(video, empty), NumericError);
  const auto short_mask = testkit::box_mask("m", 60, 60, 2, 5, 5, 5, 5);
  CHECK_THROWS_AS(pcons_video(video, short_mask), PreconditionError);
}

TEST_CASE("PCons: a shared pixel-value bijection keeps exact matches exact") {
  const auto mask = testkit::box_mask("m", 120, 90, 5, 40, 30, 10, 10);
  auto video = translating_video(120, 90, 5, 6, 3, 31);
  CHECK(pcons_video(video, mask) == 100.0);
  Engine eng = derive_stream(2, "bijection");
  std::array<std::uint8_t, 256> table;
  std::iota(table.begin(), table.end(), 0);
  std::shuffle(table.begin(), table.end(), eng);
  for (auto& f : video.frames) {
    for (Eigen::Index i = 0; i < f.interleaved().size(); ++i) f.data()[i] = table[f.data()[i]];
  }
  CHECK(pcons_video(video, mask) == 100.0);
}

TEST_CASE("Increasing noise lowers PCons and raises LPIPS") {
  const features::ToyFrameExtractor ex;
  const auto mask = testkit::box_mask("m", 96, 64, 4, 30, 20, 16, 16);
  const double sigmas[] = {2.0, 8.0, 24.0};
  double pcons_mean[3] = {0, 0, 0}, lpips_mean[3] = {0, 0, 0};
  const int seeds = 6;
  for (int s = 0; s < seeds; ++s) {
    const auto base = translating_video(96, 64, 4, 3, 2, 50 + s);
    for (int k = 0; k < 3; ++k) {
      Engine eng = derive_stream(std::uint64_t(s), "noise" + std::to_string(k));
      std::normal_distribution<double> n(0, sigmas[k]);
      VideoClip noisy = base;
      for (auto& f : noisy.frames) {
        for (Eigen::Index i = 0; i < f.interleaved().size(); ++i) {
          f.data()[i] = static_cast<std::uint8_t>(std::clamp(std::lround(f.data()[i] + n(eng)), 0L, 255L));
        }
      }
      pcons_mean[k] += pcons_video(noisy, mask) / seeds;
      lpips_mean[k] += lpips_video(noisy, base, ex) / seeds;
    }
  }
  CHECK(pcons_mean[0] > pcons_mean[1]);
  CHECK(pcons_mean[1] > pcons_mean[2]);
  CHECK(lpips_mean[0] < lpips_mean[1]);
  CHECK(lpips_mean[1] < lpips_mean[2]);
}
