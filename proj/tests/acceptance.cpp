// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.
//
//   acceptance                 run every criterion
//   acceptance --only 2,3      run a subset
//
// VIBENCH_UPDATE_GOLDEN=1 rewrites the end-to-end report golden files.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "support/oracles.hpp"
#include "support/testkit.hpp"
#include "vibench/corpus/synthetic.hpp"
#include "vibench/features/config.hpp"
#include "vibench/features/toy_extractor.hpp"
#include "vibench/harness/adapter.hpp"
#include "vibench/harness/evaluate.hpp"
#include "vibench/harness/ops.hpp"
#include "vibench/maskgen/batch.hpp"
#include "vibench/maskgen/calibrate.hpp"
#include "vibench/maskgen/config.hpp"
#include "vibench/metrics/gaussian.hpp"
#include "vibench/metrics/pcons.hpp"
#include "vibench/report/aggregate.hpp"
#include "vibench/report/emit.hpp"
#include "vibench/slicer/slicer.hpp"
#include "vibench/videoattr/camera_motion.hpp"

using namespace vibench;
namespace fs = std::filesystem;
using metrics::Metric;
using testkit::TempDir;

namespace {

constexpr int kWidth = 832;
constexpr int kHeight = 480;

/// Outcome of one criterion. `detail` carries the measured values.
struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

fs::path source_dir() { return VIBENCH_SOURCE_DIR; }

maskgen::MaskGenConfig committed_mask_config() {
  return maskgen::load_config(source_dir() / "configs" / "maskgen_default.json");
}

harness::Extractors toy_extractors() {
  return {std::make_shared<features::ToyFrameExtractor>(), std::make_shared<features::ToyClipExtractor>()};
}

harness::Extractors onnx_extractors() {
  return {features::open_frame_extractor((testkit::model_dir() / "frame_net.json").string()),
          features::open_clip_extractor((testkit::model_dir() / "clip_net.json").string())};
}

/// Synthetic clips plus generated masks under `root`, and a slice pairing
/// clip i with mask i.
struct SyntheticPairs {
  corpus::Manifest manifest;
  slicer::Slice slice;
};

SyntheticPairs synthetic_pairs(const fs::path& root, int pairs, std::uint64_t seed) {
  SyntheticPairs out;
  out.manifest = corpus::make_synthetic_corpus({.clips = pairs, .seed = seed}, root);
  maskgen::MaskBatchOptions options;
  options.per_setting = (pairs + 5) / 6;
  options.first_seed = seed * 1000;
  out.manifest.masks = maskgen::generate_mask_set(committed_mask_config(), options, root);
  out.slice.name = "synthetic";
  out.slice.seed = seed;
  for (int i = 0; i < pairs; ++i) {
    out.slice.pairs.push_back({out.manifest.clips[std::size_t(i)].id, out.manifest.masks[std::size_t(i)].id});
  }
  return out;
}

std::map<std::string, double> max_abs_by_metric(const std::vector<harness::EvaluationRecord>& records,
                                                Verdict& v) {
  std::map<std::string, double> out;
  for (const auto& r : records) {
    if (!r.ok()) {
      v.require(false, r.metric + " record " + r.status + ": " + r.message);
      continue;
    }
    out[r.metric] = std::max(out[r.metric], std::abs(*r.score));
  }
  return out;
}

void criterion_oracle_zero(Verdict& v) {
  TempDir dir("acc-oracle");
  const auto data = synthetic_pairs(dir.path(), 10, 11);
  const auto assets = harness::manifest_assets(data.manifest);
  const auto oracle = harness::oracle_adapter();

  harness::RunConfig config;
  config.width = kWidth;
  config.height = kHeight;
  const auto start = std::chrono::steady_clock::now();
  const auto toy = harness::evaluate_slice(*oracle, data.slice, assets, toy_extractors(), config);
  const double toy_seconds = seconds_since(start);
  auto toy_max = max_abs_by_metric(toy.records, v);
  v.require(toy.coverage() == 1.0, "toy coverage");
  v.require(toy_seconds < 300.0, "toy runtime < 5 min");

  config.metrics = {Metric::kLpips, Metric::kPvcs, Metric::kFid, Metric::kVfid};
  const auto onnx = harness::evaluate_slice(*oracle, data.slice, assets, onnx_extractors(), config);
  auto onnx_max = max_abs_by_metric(onnx.records, v);
  v.require(onnx.coverage() == 1.0, "onnx coverage");

  for (const auto* scores : {&toy_max, &onnx_max}) {
    const bool is_toy = scores == &toy_max;
    for (const std::string m : {"lpips", "pvcs", "fid", "vfid"}) {
      const double bound = m == "fid" || m == "vfid" ? 1e-4 : 1e-6;
      v.require(scores->count(m) == 1 && scores->at(m) <= bound, std::string(is_toy ? "toy " : "onnx ") + m);
    }
  }
  v.detail << "10 pairs at " << kWidth << "x" << kHeight << "; toy max |lpips| " << fmt(toy_max["lpips"])
           << " |pvcs| " << fmt(toy_max["pvcs"]) << " |fid| " << fmt(toy_max["fid"]) << " |vfid| "
           << fmt(toy_max["vfid"]) << " in " << fmt(toy_seconds) << " s; onnx max |lpips| " << fmt(onnx_max["lpips"])
           << " |pvcs| " << fmt(onnx_max["pvcs"]) << " |fid| " << fmt(onnx_max["fid"]) << " |vfid| "
           << fmt(onnx_max["vfid"]);
}

void criterion_frechet(Verdict& v) {
  using G = metrics::GaussianSummary<double>;
  Engine eng = derive_stream(2, "acceptance-frechet");
  const G a{testkit::random_vec(eng, 5), testkit::random_spd(eng, 5)};
  const double identical = metrics::frechet_distance(a, a);
  v.require(std::abs(identical) < 1e-6, "identical Gaussians");

  const G p{Eigen::VectorXd::Constant(1, 0.0), Eigen::MatrixXd::Identity(1, 1)};
  const G q{Eigen::VectorXd::Constant(1, 3.0), Eigen::MatrixXd::Identity(1, 1)};
  const double analytic = metrics::frechet_distance(p, q);
  v.require(std::abs(analytic - 9.0) <= 1e-9, "1-D analytic case");

  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const G x{testkit::random_vec(eng, 5), testkit::random_spd(eng, 5)};
    const G y{testkit::random_vec(eng, 5), testkit::random_spd(eng, 5)};
    const double diff =
        std::abs(metrics::frechet_distance(x, y) - testkit::frechet_oracle(x.mean, x.cov, y.mean, y.cov));
    worst = std::max(worst, diff);
  }
  v.require(worst <= 1e-6, "5-D eigendecomposition oracle");
  v.detail << "identical " << fmt(identical) << "; 1-D |d - 9| " << fmt(std::abs(analytic - 9.0))
           << "; 50 random 5-D cases max |d - oracle| " << fmt(worst);
}

void criterion_pcons(Verdict& v) {
  const auto mask = testkit::box_mask("m", 120, 90, 4, 50, 35, 20, 20);
  int capped = 0, small = 0;
  for (int dy : {-20, -13, -5, 0, 5, 13, 20}) {
    for (int dx : {-20, -13, -5, 0, 5, 13, 20}) {
      ++small;
      const auto video = testkit::translating_video(120, 90, 4, dx, dy, 100 + std::uint64_t(small));
      if (metrics::pcons_video(video, mask) == metrics::kPsnrCap) ++capped;
    }
  }
  v.require(capped == small, "shifts within the radius reach the cap");

  double worst = 0.0;
  int large = 0;
  for (auto [dx, dy] : {std::pair{21, 0}, {0, -21}, {-25, 3}, {30, 30}, {-24, -22}, {7, 26}}) {
    const auto video = testkit::translating_video(120, 90, 4, dx, dy, 200 + std::uint64_t(large++));
    const double got = metrics::pcons_video(video, mask);
    v.require(got < metrics::kPsnrCap, "shift beyond the radius stays below the cap");
    worst = std::max(worst, std::abs(got - testkit::pcons_oracle(video, mask)));
  }
  v.require(worst <= 1e-9, "brute-force oracle");
  v.detail << capped << "/" << small << " shifts <= 20 at cap " << metrics::kPsnrCap << " dB; " << large
           << " shifts > 20 max |PCons - oracle| " << fmt(worst) << " dB";
}

void criterion_mask_separation(Verdict& v) {
  const auto config = committed_mask_config();
  const auto start = std::chrono::steady_clock::now();
  const auto report = maskgen::evaluate_separation(config, 500001, 200);
  const double elapsed = seconds_since(start);
  v.require(config.width == kWidth && config.height == kHeight && config.length == 60, "832x480, T=60");
  for (const auto& a : report.attributes) {
    const std::string name = to_string(a.attribute);
    v.require(a.low.q3 < a.high.q1, name + " IQRs disjoint");
    v.require(a.low_label_rate >= 0.95, name + " low label rate");
    v.require(a.high_label_rate >= 0.95, name + " high label rate");
    v.detail << name << " IQR [" << fmt(a.low.q1) << ", " << fmt(a.low.q3) << "] vs [" << fmt(a.high.q1) << ", "
             << fmt(a.high.q3) << "] labels " << a.low_label_rate << "/" << a.high_label_rate << "; ";
  }
  v.require(report.attributes.size() == 3, "three mask attributes");
  v.require(elapsed < 600.0, "runtime < 10 min");
  v.detail << "200 fresh seeds per setting in " << fmt(elapsed) << " s";
}

void criterion_camera_motion(Verdict& v) {
  const videoattr::CameraMotionOptions options;
  std::vector<double> totals;
  for (double step : {0.0, 1.0, 2.0, 3.0, 5.0, 7.0, 9.0, 12.0, 15.0}) {
    const auto clip = corpus::synthesize_video({.width = 240, .height = 144, .length = 19, .pan_x = step, .seed = 8},
                                               "pan");
    totals.push_back(videoattr::classify_camera_motion(clip, options).total_compatibility);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < totals.size(); ++i) monotone = monotone && totals[i] <= totals[i - 1];
  v.require(monotone, "non-increasing in pan step");

  const VideoClip still{"still", std::vector<RgbFrame>(12, corpus::synthesize_texture(160, 96, 3))};
  const auto still_result = videoattr::classify_camera_motion(still, options);
  v.require(still_result.total_compatibility == 1.0, "identical frames score 1.0");
  v.require(still_result.label == Setting::kLow, "identical frames label low");

  // Labeled suite: static cameras (some with moving discs) vs pans of 0.5 to
  // 6 px per frame in random directions.
  Engine eng = derive_stream(5, "acceptance-camera");
  std::vector<double> scores;
  std::vector<bool> moving;
  for (int i = 0; i < 40; ++i) {
    corpus::SceneSpec spec{.width = 160, .height = 96, .length = 60, .seed = 300 + std::uint64_t(i)};
    const bool pans = i % 2 == 0;
    if (pans) {
      const double speed = uniform(eng, 0.5, 6.0), angle = uniform(eng, 0.0, 2.0 * 3.141592653589793);
      spec.pan_x = speed * std::cos(angle);
      spec.pan_y = speed * std::sin(angle);
    }
    spec.movers = (i / 2) % 3;
    scores.push_back(1.0 - videoattr::classify_camera_motion(corpus::synthesize_video(spec, "s"), options)
                               .total_compatibility);
    moving.push_back(pans);
  }
  const double ap = videoattr::average_precision(scores, moving);
  v.require(ap >= 0.95, "synthetic PR-AUC >= 0.95");
  v.detail << "totals over steps {0,1,2,3,5,7,9,12,15}:";
  for (double t : totals) v.detail << " " << fmt(t);
  v.detail << "; identical clip " << still_result.total_compatibility << " -> "
           << (still_result.label ? to_string(*still_result.label) : std::string("none"))
           << "; PR-AUC on 40 labeled clips " << fmt(ap);
}

corpus::Manifest random_manifest(int clips, int masks, std::uint64_t seed) {
  Engine eng = derive_stream(seed, "acceptance-manifest");
  corpus::Manifest m;
  for (int i = 0; i < clips; ++i) {
    corpus::ClipEntry c{"clip-" + std::to_string(i), "clips/" + std::to_string(i), 60, {}};
    for (auto a : {Attribute::kCameraMotion, Attribute::kBgSceneMotion}) {
      const double u = uniform(eng, 0, 1);
      if (u < 0.45) c.labels.add({a, Setting::kLow});
      else if (u < 0.9) c.labels.add({a, Setting::kHigh});
    }
    m.clips.push_back(c);
  }
  for (int i = 0; i < masks; ++i) {
    corpus::MaskEntry k{"mask-" + std::to_string(i), "masks/" + std::to_string(i), 60, std::uint64_t(i), {}, nullptr};
    for (auto a : {Attribute::kFgDisplacement, Attribute::kFgPoseMotion, Attribute::kFgSize}) {
      const double u = uniform(eng, 0, 1);
      if (u < 0.45) k.labels.add({a, Setting::kLow});
      else if (u < 0.9) k.labels.add({a, Setting::kHigh});
    }
    m.masks.push_back(k);
  }
  m.validate();
  return m;
}

void criterion_slices(Verdict& v) {
  const auto manifest = random_manifest(600, 600, 3);
  const auto slices = slicer::build_all_slices(manifest, 42);
  v.require(slices.size() == 10, "ten slices");
  int covered = 0, total = 0;
  for (const auto& s : slices) {
    v.require(s.pairs.size() == 150, s.name + " has 150 pairs");
    slicer::validate_slice(s, manifest);
    for (const auto& p : s.pairs) {
      ++total;
      const auto& labels = modality_of(s.controlled.attribute) == Modality::kVideo
                               ? manifest.find_clip(p.clip_id)->labels
                               : manifest.find_mask(p.mask_id)->labels;
      covered += labels.contains(s.controlled);
    }
  }
  v.require(covered == total, "controlled-label coverage");

  int disjoint = 0;
  for (const auto& lo : slices) {
    if (lo.controlled.setting != Setting::kLow) continue;
    for (const auto& hi : slices) {
      if (hi.controlled.attribute != lo.controlled.attribute || hi.controlled.setting != Setting::kHigh) continue;
      const bool video = modality_of(lo.controlled.attribute) == Modality::kVideo;
      std::set<std::string> ids;
      for (const auto& p : lo.pairs) ids.insert(video ? p.clip_id : p.mask_id);
      bool shared = false;
      for (const auto& p : hi.pairs) shared = shared || ids.count(video ? p.clip_id : p.mask_id);
      v.require(!shared, to_string(lo.controlled.attribute) + " low/high disjoint");
      disjoint += !shared;
    }
  }
  v.require(disjoint == 5, "five attribute pairs checked");
  const bool deterministic = slicer::build_all_slices(manifest, 42) == slices;
  v.require(deterministic, "same seed, same slices");
  v.require(!(slicer::build_all_slices(manifest, 43) == slices), "different seed, different slices");
  v.detail << slices.size() << " slices x 150 pairs; label coverage " << covered << "/" << total << "; "
           << disjoint << "/5 low/high pairs disjoint; deterministic " << (deterministic ? "yes" : "no");
}

void criterion_harness(Verdict& v) {
  int round_trips = 0;
  for (auto [w, h, k] : {std::tuple{kWidth, kHeight, 64}, {kWidth, kHeight, 8}, {97, 61, 16}, {13, 7, 5}}) {
    const auto video = testkit::random_video("v", w, h, 3, std::uint64_t(w * h));
    const auto mask = testkit::random_mask("m", w, h, 3, std::uint64_t(w + h), 0.3);
    const auto corrupted = harness::corrupt(video, mask);
    v.require(harness::composite(video, corrupted, mask).frames == video.frames, "composite/corrupt round trip");
    v.require(harness::known_region_preserved(corrupted, video, mask), "corrupt keeps the known region");
    const auto padded = harness::pad_mirror_to_multiple(video, mask, k);
    v.require(padded.video.width() % k == 0 && padded.video.height() % k == 0, "padded to the multiple");
    v.require(harness::crop(padded.video, padded.crop).frames == video.frames, "pad/crop round trip");
    ++round_trips;
  }

  // Every pair runs through the in-harness known-region assertion; noise
  // predictions make any compositing slip visible.
  TempDir dir("acc-harness");
  const auto data = synthetic_pairs(dir.path(), 10, 13);
  const harness::CallableAdapter noise("noise", "1", [](const harness::AdapterRequest& r) {
    return testkit::random_video(r.corrupted.id, r.corrupted.width(), r.corrupted.height(), r.corrupted.length(),
                                 std::uint64_t(r.corrupted.length()));
  }, {64});
  harness::RunConfig config;
  config.width = kWidth;
  config.height = kHeight;
  const auto result =
      harness::evaluate_slice(noise, data.slice, harness::manifest_assets(data.manifest), toy_extractors(), config);
  for (const auto& r : result.records) {
    if (!r.ok()) v.require(false, r.message);
  }
  v.require(result.coverage() == 1.0, "every pair preserved the known region");
  v.detail << round_trips << " bit-exact corrupt/composite and pad/crop round trips; known region held on "
           << result.pairs_ok << "/" << result.pairs_total << " pairs at " << kWidth << "x" << kHeight
           << " with noise predictions";
}

void criterion_analysis(Verdict& v) {
  const auto improvement = report::relative_change(10, 8, metrics::Direction::kLowerBetter);
  v.require(improvement && *improvement == 0.2, "lo=10 hi=8 lower-better gives +0.2");
  const std::vector<double> values{0, 2};
  const auto se = report::aggregate(values).standard_error;
  v.require(se && *se == 1.0, "SE of {0, 2} is 1");

  std::vector<report::SliceScore> scores;
  for (Metric m : metrics::all_metrics()) {
    scores.push_back({"a", "fg_size:low", m, 1.0, 1, 0});
    scores.push_back({"b", "fg_size:low", m, 2.0, 1, 0});
  }
  const auto table = report::slice_table(scores);
  std::string flags;
  for (std::size_t k = 0; k < table.metrics.size(); ++k) {
    const bool lower = metrics::direction_of(table.metrics[k]) == metrics::Direction::kLowerBetter;
    const std::size_t expected = lower ? 0 : 1;
    v.require(table.cell(expected, 0, k).best && !table.cell(1 - expected, 0, k).best,
              metrics::to_string(table.metrics[k]) + " best flag");
    if (!flags.empty()) flags += " ";
    flags += metrics::to_string(table.metrics[k]) + (lower ? "(lower)->" : "(higher)->") + table.methods[expected];
  }
  v.require(metrics::direction_of(Metric::kPcons) == metrics::Direction::kHigherBetter, "PCons higher-better");
  v.detail << "relative improvement " << (improvement ? fmt(*improvement) : "null") << "; SE " << (se ? fmt(*se) : "null")
           << "; best flags " << flags;
}

std::vector<std::string> compare_dirs(const fs::path& a, const fs::path& b, const std::vector<std::string>& files) {
  std::vector<std::string> differing;
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const auto& f : files) {
    if (!fs::exists(b / f) || read(a / f) != read(b / f)) differing.push_back(f);
  }
  return differing;
}

void criterion_end_to_end(Verdict& v) {
  TempDir dir("acc-e2e");
  const auto start = std::chrono::steady_clock::now();

  // corpus -> maskgen -> slicer
  auto manifest = corpus::make_synthetic_corpus({.clips = 20, .seed = 7}, dir / "corpus");
  maskgen::MaskBatchOptions mask_options;
  mask_options.per_setting = 10;
  mask_options.first_seed = 700;
  std::vector<std::string> mask_warnings;
  manifest.masks = maskgen::generate_mask_set(committed_mask_config(), mask_options, manifest.root, &mask_warnings);
  manifest.validate();
  corpus::save_manifest(manifest, dir / "corpus" / "manifest.json");
  manifest = corpus::load_manifest(dir / "corpus" / "manifest.json");
  const int slice_size = 8;
  const auto slices = slicer::build_all_slices(manifest, 7, slice_size);
  slicer::save_slices(slices, dir / "slices");
  const auto loaded = slicer::load_slices(dir / "slices");
  v.require(loaded.size() == 10, "ten slices");

  // harness -> report
  harness::RunConfig config;
  config.width = kWidth;
  config.height = kHeight;
  config.out_dir = dir / "run";
  config.cache_dir = dir / "cache";
  config.run_id = "e2e";
  const auto assets = harness::manifest_assets(manifest);
  const auto summary = harness::evaluate_run(*harness::identity_adapter(), loaded, assets, toy_extractors(), config);
  v.require(summary.coverage() == 1.0, "record coverage 100%");
  const std::size_t expected_records = loaded.size() * (3 * slice_size + 2);
  const auto records = harness::read_records(config.out_dir / "records.jsonl");
  int ok_records = 0;
  for (const auto& r : records) ok_records += r.ok();
  v.require(records.size() == expected_records && ok_records == int(expected_records), "all records present and ok");
  const auto files = report::emit_report(records, dir / "report");
  const double elapsed = seconds_since(start);
  v.require(elapsed < 900.0, "runtime < 15 min");

  // A rerun served from the cache reproduces the report.
  config.out_dir = dir / "rerun";
  const auto rerun = harness::evaluate_run(*harness::identity_adapter(), loaded, assets, toy_extractors(), config);
  int cached = 0;
  for (const auto& s : rerun.slices) cached += s.pairs_cached;
  report::emit_report(harness::read_records(config.out_dir / "records.jsonl"), dir / "report-rerun");
  const auto rerun_diff = compare_dirs(dir / "report", dir / "report-rerun", files);
  v.require(rerun_diff.empty(), "rerun report identical");

  const fs::path golden = source_dir() / "tests" / "golden" / "e2e";
  const char* update = std::getenv("VIBENCH_UPDATE_GOLDEN");
  if (update && std::string(update) == "1") {
    fs::remove_all(golden);
    for (const auto& f : files) {
      fs::create_directories((golden / f).parent_path());
      fs::copy_file(dir / "report" / f, golden / f);
    }
  }
  const auto golden_diff = compare_dirs(dir / "report", golden, files);
  for (const auto& f : golden_diff) v.require(false, "golden " + f);
  v.detail << "20 clips, " << manifest.masks.size() << " masks, 10 slices x " << slice_size << " pairs at " << kWidth
           << "x" << kHeight << "; coverage " << summary.pairs_ok << "/" << summary.pairs_total << "; "
           << records.size() << " records; " << files.size() << " report files, " << golden_diff.size()
           << " differ from golden; rerun " << cached << " cached pairs, identical report; " << fmt(elapsed) << " s";
}

struct Criterion {
  int id;
  std::string title;
  std::function<void(Verdict&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "Criterion numbers to run")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "oracle adapter scores zero with toy and ONNX extractors", criterion_oracle_zero},
      {2, "Frechet kernel", criterion_frechet},
      {3, "PCons protocol exactness", criterion_pcons},
      {4, "mask attribute separation with the committed config", criterion_mask_separation},
      {5, "camera-motion proxy", criterion_camera_motion},
      {6, "slice protocol", criterion_slices},
      {7, "harness exactness", criterion_harness},
      {8, "analysis arithmetic", criterion_analysis},
      {9, "end-to-end smoke run", criterion_end_to_end},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << ": " << v.detail.str() << " ("
              << fmt(seconds_since(start)) << " s)" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
