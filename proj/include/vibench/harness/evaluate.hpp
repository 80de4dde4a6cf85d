#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "vibench/corpus/manifest.hpp"
#include "vibench/features/extractor.hpp"
#include "vibench/harness/adapter.hpp"
#include "vibench/harness/records.hpp"
#include "vibench/metrics/metric.hpp"
#include "vibench/metrics/pcons.hpp"
#include "vibench/slicer/slicer.hpp"

namespace vibench::harness {

/// Environment variable naming the default cache root.
inline constexpr const char* kCacheEnv = "VIBENCH_CACHE";

struct RunConfig {
  int width = 832;
  int height = 480;
  std::vector<metrics::Metric> metrics = metrics::all_metrics();
  /// Receives records.jsonl, records.csv and coverage.json. Empty disables
  /// persistence.
  std::filesystem::path out_dir;
  /// Per-pair results and embeddings; empty disables the rerun cache.
  std::filesystem::path cache_dir;
  int parallelism = 1;
  std::string run_id = "run";
  std::uint8_t placeholder = 0;
  metrics::PconsOptions pcons;

  /// Throws ValidationError on a non-positive resolution or parallelism, or
  /// an empty or duplicated metric list.
  void validate() const;
};

struct Extractors {
  features::FrameExtractorPtr frame;  // LPIPS, FID
  features::ClipExtractorPtr clip;    // PVCS, VFID
};

/// Loads slice assets by id.
struct AssetSource {
  std::function<VideoClip(const std::string&)> clip;
  std::function<MaskSequence(const std::string&)> mask;
};

AssetSource manifest_assets(const corpus::Manifest& manifest);

struct SliceResult {
  std::string slice;
  std::vector<EvaluationRecord> records;
  int pairs_total = 0;
  int pairs_ok = 0;
  int pairs_cached = 0;
  std::vector<std::string> warnings;

  double coverage() const { return pairs_total == 0 ? 1.0 : double(pairs_ok) / pairs_total; }
};

/// Evaluates every pair of a slice.
///
/// Per pair: resize the clip (bilinear) and mask (nearest, re-binarized) to
/// the evaluation resolution, fit the mask length to the clip, corrupt, pad
/// to the adapter's multiple, run the adapter, crop, composite and assert
/// that the known region equals the original. Per-video metrics produce one
/// record per pair; FID and VFID produce one slice-level record each over
/// all successful pairs. A failing pair yields "error" records and lowers
/// coverage. Pairs whose inputs, method and extractors match a cached result
/// are not recomputed. Records are appended to `log` when given.
SliceResult evaluate_slice(const MethodAdapter& adapter, const slicer::Slice& slice, const AssetSource& assets,
                           const Extractors& extractors, const RunConfig& config, RecordLog* log = nullptr);

struct RunSummary {
  std::vector<SliceResult> slices;
  int pairs_total = 0;
  int pairs_ok = 0;

  double coverage() const { return pairs_total == 0 ? 1.0 : double(pairs_ok) / pairs_total; }
  std::vector<EvaluationRecord> records() const;
};

/// Probes the adapter, evaluates each slice and, when config.out_dir is set,
/// writes records.jsonl (appended), records.csv (compacted over the whole
/// log) and coverage.json.
RunSummary evaluate_run(const MethodAdapter& adapter, const std::vector<slicer::Slice>& slices,
                        const AssetSource& assets, const Extractors& extractors, const RunConfig& config);

}  // namespace vibench::harness
