// Command-line front end: corpus preparation, mask generation, annotation,
// slicing, evaluation and reporting.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "vibench/core/error.hpp"
#include "vibench/core/image_io.hpp"
#include "vibench/corpus/clips.hpp"
#include "vibench/corpus/manifest.hpp"
#include "vibench/corpus/synthetic.hpp"
#include "vibench/features/config.hpp"
#include "vibench/harness/evaluate.hpp"
#include "vibench/maskgen/batch.hpp"
#include "vibench/maskgen/calibrate.hpp"
#include "vibench/report/emit.hpp"
#include "vibench/slicer/slicer.hpp"
#include "vibench/videoattr/camera_motion.hpp"

namespace fs = std::filesystem;
using namespace vibench;

namespace {

corpus::Manifest load_or_empty(const fs::path& path) {
  if (fs::exists(path)) return corpus::load_manifest(path);
  corpus::Manifest m;
  m.root = path.parent_path();
  return m;
}

std::pair<int, int> parse_resolution(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::exception&) {
    throw ParseError("resolution must look like 832x480, got '" + text + "'");
  }
}

std::string relative_to(const fs::path& path, const fs::path& base) {
  return fs::relative(fs::absolute(path), fs::absolute(base)).generic_string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attribute-controlled diagnostic evaluation for video inpainting"};
  app.require_subcommand(1);

  // split
  auto* split = app.add_subcommand("split", "Split source videos (frame directories) into 45-90 frame clips");
  std::vector<std::string> split_inputs;
  std::string split_out, split_manifest;
  split->add_option("videos", split_inputs, "Frame directories; the directory name is the video id")->required();
  split->add_option("--out", split_out, "Directory receiving clip frame directories")->required();
  split->add_option("--manifest", split_manifest, "Manifest to create or extend")->required();

  // synth-corpus
  auto* synth = app.add_subcommand("synth-corpus", "Write a synthetic labelled clip corpus");
  corpus::SyntheticCorpusOptions synth_opts;
  std::string synth_out;
  synth->add_option("--out", synth_out, "Output directory (manifest.json is written inside)")->required();
  synth->add_option("--clips", synth_opts.clips, "Number of clips")->capture_default_str();
  synth->add_option("--width", synth_opts.width)->capture_default_str();
  synth->add_option("--height", synth_opts.height)->capture_default_str();
  synth->add_option("--seed", synth_opts.seed)->capture_default_str();

  // ingest-bg
  auto* ingest = app.add_subcommand("ingest-bg", "Attach bg_scene_motion labels from a 'clip-id,setting' file");
  std::string ingest_manifest, ingest_labels;
  ingest->add_option("--manifest", ingest_manifest)->required();
  ingest->add_option("--labels", ingest_labels)->required();

  // generate-masks
  auto* gen = app.add_subcommand("generate-masks", "Generate labelled masks and add them to a manifest");
  std::string gen_manifest, gen_config;
  maskgen::MaskBatchOptions gen_opts;
  bool gen_dirs = false;
  gen->add_option("--manifest", gen_manifest)->required();
  gen->add_option("--config", gen_config, "Generator config JSON (built-in calibrated defaults when omitted)");
  gen->add_option("--per-setting", gen_opts.per_setting, "Masks per fg attribute setting")->capture_default_str();
  gen->add_option("--seed", gen_opts.first_seed, "First seed")->capture_default_str();
  gen->add_flag("--png", gen_dirs, "Write PNG directories instead of .rle containers");

  // calibrate-masks
  auto* cal = app.add_subcommand("calibrate-masks", "Measure attribute separation and derive label bands");
  std::string cal_config, cal_out, cal_report;
  int cal_count = 200;
  std::uint64_t cal_seed = 1;
  cal->add_option("--config", cal_config, "Starting config (built-in defaults when omitted)");
  cal->add_option("--count", cal_count, "Seeds per setting")->capture_default_str();
  cal->add_option("--seed", cal_seed, "First seed")->capture_default_str();
  cal->add_option("--out", cal_out, "Calibrated config JSON")->required();
  cal->add_option("--report", cal_report, "Quartiles and label rates JSON");

  // annotate-camera
  auto* cam = app.add_subcommand("annotate-camera", "Label camera motion from pairwise affine compatibility");
  std::string cam_manifest;
  videoattr::CameraMotionOptions cam_opts;
  cam->add_option("--manifest", cam_manifest)->required();
  cam->add_option("--low-min", cam_opts.thresholds.low_motion_min_compatibility)->capture_default_str();
  cam->add_option("--high-max", cam_opts.thresholds.high_motion_max_compatibility)->capture_default_str();
  cam->add_option("--seed", cam_opts.seed)->capture_default_str();

  // build-slices
  auto* slices = app.add_subcommand("build-slices", "Sample one slice per attribute setting");
  std::string slices_manifest, slices_out;
  std::uint64_t slices_seed = 0;
  int slices_size = slicer::kSliceSize;
  slices->add_option("--manifest", slices_manifest)->required();
  slices->add_option("--out", slices_out, "Directory receiving one JSON file per slice")->required();
  slices->add_option("--seed", slices_seed)->capture_default_str();
  slices->add_option("--size", slices_size, "Pairs per slice")->capture_default_str();

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "Run a method over slices and record metric scores");
  std::string eval_manifest, eval_slices, eval_adapter, eval_metrics = "lpips,pvcs,fid,vfid,pcons",
                                                         eval_resolution = "832x480", eval_out, eval_cache,
                                                         eval_frame = "toy", eval_clip = "toy", eval_run_id;
  int eval_parallel = 1;
  bool eval_no_cache = false;
  eval->add_option("--manifest", eval_manifest)->required();
  eval->add_option("--slices", eval_slices, "Slice file or directory")->required();
  eval->add_option("--method-adapter", eval_adapter, "identity, oracle, or an adapter JSON file")->required();
  eval->add_option("--metrics", eval_metrics)->capture_default_str();
  eval->add_option("--resolution", eval_resolution)->capture_default_str();
  eval->add_option("--out", eval_out, "Run output directory")->required();
  eval->add_option("--cache", eval_cache, std::string("Cache root (default: $") + harness::kCacheEnv + ")");
  eval->add_flag("--no-cache", eval_no_cache, "Disable the rerun and embedding caches");
  eval->add_option("--frame-extractor", eval_frame, "toy, toy:<seed>, or an extractor config")->capture_default_str();
  eval->add_option("--clip-extractor", eval_clip, "toy, toy:<seed>, or an extractor config")->capture_default_str();
  eval->add_option("--parallel", eval_parallel)->capture_default_str();
  eval->add_option("--run-id", eval_run_id, "Defaults to the UTC start time");

  // report
  auto* rep = app.add_subcommand("report", "Aggregate records into tables and plots");
  std::string rep_records, rep_out, rep_metrics;
  rep->add_option("--records", rep_records, "records.jsonl or a directory of them")->required();
  rep->add_option("--out", rep_out)->required();
  rep->add_option("--metrics", rep_metrics, "Comma-separated subset (all by default)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*split) {
      corpus::Manifest manifest = load_or_empty(split_manifest);
      for (const auto& dir : split_inputs) {
        const VideoClip video{fs::path(dir).filename().string(), read_frame_dir(dir)};
        const auto result = corpus::split_into_clips(video);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        for (const auto& clip : result.clips) {
          const fs::path target = fs::path(split_out) / clip.id;
          write_frame_dir(clip.frames, target);
          manifest.clips.push_back({clip.id, relative_to(target, manifest.root), clip.length(), {}});
        }
        std::cout << video.id << ": " << result.clips.size() << " clips\n";
      }
      manifest.validate();
      corpus::save_manifest(manifest, split_manifest);
    } else if (*synth) {
      const auto manifest = corpus::make_synthetic_corpus(synth_opts, synth_out);
      corpus::save_manifest(manifest, fs::path(synth_out) / "manifest.json");
      std::cout << manifest.clips.size() << " clips written to " << synth_out << "\n";
    } else if (*ingest) {
      const auto manifest = corpus::load_manifest(ingest_manifest);
      const auto updated = corpus::ingest_bg_motion_labels(manifest, corpus::read_label_records(ingest_labels));
      corpus::save_manifest(updated, ingest_manifest);
    } else if (*gen) {
      corpus::Manifest manifest = load_or_empty(gen_manifest);
      const auto config = gen_config.empty() ? maskgen::default_config() : maskgen::load_config(gen_config);
      gen_opts.rle = !gen_dirs;
      std::vector<std::string> warnings;
      auto entries = maskgen::generate_mask_set(config, gen_opts, manifest.root, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      manifest.masks.insert(manifest.masks.end(), entries.begin(), entries.end());
      manifest.validate();
      corpus::save_manifest(manifest, gen_manifest);
      std::cout << entries.size() << " masks generated\n";
    } else if (*cal) {
      const auto start = cal_config.empty() ? maskgen::default_config() : maskgen::load_config(cal_config);
      maskgen::CalibrationReport report;
      const auto calibrated = maskgen::sweep({start}, cal_seed, cal_count, &report);
      maskgen::save_config(calibrated, cal_out);
      nlohmann::json j = nlohmann::json::array();
      for (const auto& a : report.attributes) {
        j.push_back({{"attribute", to_string(a.attribute)},
                     {"low_iqr", {a.low.q1, a.low.q3}},
                     {"high_iqr", {a.high.q1, a.high.q3}},
                     {"iqr_disjoint", a.iqr_disjoint},
                     {"band", {a.band.low_ceiling, a.band.high_floor}},
                     {"low_label_rate", a.low_label_rate},
                     {"high_label_rate", a.high_label_rate}});
        std::cout << to_string(a.attribute) << ": low IQR [" << a.low.q1 << ", " << a.low.q3 << "] high IQR ["
                  << a.high.q1 << ", " << a.high.q3 << "] label rates " << a.low_label_rate << " / "
                  << a.high_label_rate << "\n";
      }
      if (!cal_report.empty()) std::ofstream(cal_report) << j.dump(2) << "\n";
    } else if (*cam) {
      const auto manifest = corpus::load_manifest(cam_manifest);
      const auto updated = videoattr::annotate_camera_motion(
          manifest, cam_opts, [](const std::string& id, const videoattr::CameraMotionResult& r) {
            std::cout << id << " total_compatibility=" << r.total_compatibility << " label="
                      << (r.label ? to_string(*r.label) : std::string("none")) << "\n";
          });
      corpus::save_manifest(updated, cam_manifest);
    } else if (*slices) {
      const auto manifest = corpus::load_manifest(slices_manifest);
      const auto built = slicer::build_all_slices(manifest, slices_seed, slices_size);
      slicer::save_slices(built, slices_out);
      std::cout << built.size() << " slices of " << slices_size << " pairs written to " << slices_out << "\n";
    } else if (*eval) {
      const auto manifest = corpus::load_manifest(eval_manifest);
      const auto slice_list = slicer::load_slices(eval_slices);
      harness::RunConfig config;
      std::tie(config.width, config.height) = parse_resolution(eval_resolution);
      config.metrics = metrics::parse_metric_list(eval_metrics);
      config.out_dir = eval_out;
      config.parallelism = eval_parallel;
      config.run_id = eval_run_id.empty() ? harness::utc_timestamp() : eval_run_id;
      if (!eval_no_cache) {
        if (eval_cache.empty()) {
          if (const char* env = std::getenv(harness::kCacheEnv)) eval_cache = env;
        }
        config.cache_dir = eval_cache.empty() ? fs::path(eval_out) / "cache" : fs::path(eval_cache);
      }
      harness::Extractors extractors{features::open_frame_extractor(eval_frame),
                                     features::open_clip_extractor(eval_clip)};
      const auto adapter = harness::open_adapter(eval_adapter, fs::path(eval_out) / "work");
      const auto summary =
          harness::evaluate_run(*adapter, slice_list, harness::manifest_assets(manifest), extractors, config);
      for (const auto& s : summary.slices) {
        std::cout << s.slice << ": " << s.pairs_ok << "/" << s.pairs_total << " pairs";
        if (s.pairs_cached) std::cout << " (" << s.pairs_cached << " cached)";
        std::cout << "\n";
        for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
      }
      std::cout << "coverage " << summary.coverage() * 100.0 << "%\n";
      if (summary.coverage() < 1.0) return 3;
    } else if (*rep) {
      const auto records = harness::read_records_any(rep_records);
      const auto ms = rep_metrics.empty() ? std::vector<metrics::Metric>{} : metrics::parse_metric_list(rep_metrics);
      const auto files = report::emit_report(records, rep_out, ms);
      std::cout << files.size() << " files written to " << rep_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
