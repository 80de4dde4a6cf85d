#include "vibench/harness/evaluate.hpp"

#include <atomic>
#include <fstream>
#include <set>
#include <thread>

#include "vibench/features/cache.hpp"
#include "vibench/features/fingerprint.hpp"
#include "vibench/harness/ops.hpp"
#include "vibench/metrics/perceptual.hpp"
#include "vibench/metrics/realism.hpp"

namespace vibench::harness {
namespace {

using metrics::Metric;
using nlohmann::json;

struct PairOutcome {
  bool ok = false;
  bool cached = false;
  std::string error;
  std::map<Metric, double> scores;
  std::vector<Eigen::VectorXd> pred_frames;
  std::vector<Eigen::VectorXd> ref_frames;
  Eigen::VectorXd pred_clip;
  Eigen::VectorXd ref_clip;
  std::uint64_t mask_seed = 0;
  std::string started;
  std::string finished;
  std::map<std::string, std::string> fingerprints;
};

bool wants(const RunConfig& c, Metric m) { return std::find(c.metrics.begin(), c.metrics.end(), m) != c.metrics.end(); }

json vectors_to_json(const std::vector<Eigen::VectorXd>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json outcome_to_json(const PairOutcome& o) {
  json j;
  json scores = json::object();
  for (const auto& [m, v] : o.scores) scores[metrics::to_string(m)] = v;
  j["scores"] = scores;
  j["pred_frames"] = vectors_to_json(o.pred_frames);
  j["ref_frames"] = vectors_to_json(o.ref_frames);
  j["pred_clip"] = std::vector<double>(o.pred_clip.data(), o.pred_clip.data() + o.pred_clip.size());
  j["ref_clip"] = std::vector<double>(o.ref_clip.data(), o.ref_clip.data() + o.ref_clip.size());
  return j;
}

bool outcome_from_json(const json& j, PairOutcome& o) {
  try {
    for (const auto& [name, v] : j.at("scores").items()) o.scores[metrics::parse_metric(name)] = v.get<double>();
    for (const auto& v : j.at("pred_frames")) o.pred_frames.push_back(vector_from_json(v));
    for (const auto& v : j.at("ref_frames")) o.ref_frames.push_back(vector_from_json(v));
    o.pred_clip = vector_from_json(j.at("pred_clip"));
    o.ref_clip = vector_from_json(j.at("ref_clip"));
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

std::string mask_hash(const MaskSequence& mask) {
  features::Sha256 h;
  for (const auto& f : mask.frames) {
    const std::int32_t dims[2] = {static_cast<std::int32_t>(f.cols()), static_cast<std::int32_t>(f.rows())};
    h.update_pod(dims, 2);
    h.update_pod(f.data(), static_cast<std::size_t>(f.size()));
  }
  return h.hex();
}

class PairCache {
 public:
  explicit PairCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  bool enabled() const { return !dir_.empty(); }

  bool load(const std::string& key, PairOutcome& o) const {
    if (!enabled()) return false;
    std::ifstream in(path(key));
    if (!in) return false;
    try {
      return outcome_from_json(json::parse(in), o);
    } catch (const json::exception&) {
      return false;
    }
  }

  void store(const std::string& key, const PairOutcome& o) const {
    if (!enabled()) return;
    const auto target = path(key);
    std::filesystem::create_directories(target.parent_path());
    std::ostringstream suffix;
    suffix << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
    const auto tmp = std::filesystem::path(target.string() + suffix.str());
    {
      std::ofstream out(tmp);
      out << outcome_to_json(o).dump();
      if (!out.flush()) throw Error("cannot write pair cache " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
  }

 private:
  std::filesystem::path path(const std::string& key) const { return dir_ / "pairs" / key.substr(0, 2) / (key + ".json"); }
  std::filesystem::path dir_;
};

std::string pair_cache_key(const RunConfig& config, const MethodAdapter& adapter, const Extractors& ex,
                           const std::string& clip_hash, const std::string& mask_digest) {
  json k;
  k["method"] = adapter.fingerprint();
  k["clip"] = clip_hash;
  k["mask"] = mask_digest;
  k["size"] = {config.width, config.height};
  k["placeholder"] = config.placeholder;
  k["frame"] = ex.frame ? ex.frame->identity() : "";
  k["clipx"] = ex.clip ? ex.clip->identity() : "";
  std::vector<std::string> ms;
  for (Metric m : config.metrics) ms.push_back(metrics::to_string(m));
  k["metrics"] = ms;
  k["pcons"] = {config.pcons.patch_size, config.pcons.radius, config.pcons.cap};
  return features::sha256_hex(k.dump());
}

PairOutcome evaluate_pair(const MethodAdapter& adapter, const slicer::SlicePair& pair, const AssetSource& assets,
                          const Extractors& ex, const RunConfig& config, const PairCache& cache) {
  PairOutcome o;
  o.started = utc_timestamp();
  const VideoClip source = assets.clip(pair.clip_id);
  source.check_uniform();
  const MaskSequence raw_mask = assets.mask(pair.mask_id);
  o.mask_seed = raw_mask.seed;
  const VideoClip original = resize_video(source, config.width, config.height);
  MaskSequence mask = resize_mask(fit_mask_length(raw_mask, original.length()), config.width, config.height);
  mask.check_binary();

  const std::string clip_hash = features::content_hash(original.frames);
  const std::string mask_digest = mask_hash(mask);
  o.fingerprints = {{"method", adapter.fingerprint()}, {"clip", clip_hash}, {"mask", mask_digest}};
  if (ex.frame) o.fingerprints["frame_extractor"] = ex.frame->identity();
  if (ex.clip) o.fingerprints["clip_extractor"] = ex.clip->identity();
  const std::string key = pair_cache_key(config, adapter, ex, clip_hash, mask_digest);
  if (cache.load(key, o)) {
    o.ok = true;
    o.cached = true;
    o.finished = utc_timestamp();
    return o;
  }

  const VideoClip corrupted = corrupt(original, mask, config.placeholder);
  const PaddedInput padded = pad_mirror_to_multiple(corrupted, mask, adapter.constraint().pad_multiple);
  const VideoClip padded_reference = pad_mirror(original, mask, padded.video.width(), padded.video.height()).video;
  VideoClip raw_pred = adapter.run({padded.video, padded.mask, &padded_reference});
  if (raw_pred.length() != padded.video.length() || raw_pred.width() != padded.video.width() ||
      raw_pred.height() != padded.video.height()) {
    throw Error("method '" + adapter.name() + "' returned a prediction of the wrong shape");
  }
  const VideoClip pred = composite(crop(raw_pred, padded.crop), original, mask);
  if (!known_region_preserved(pred, original, mask)) {
    throw Error("known region differs from the original after compositing");
  }

  if (wants(config, Metric::kLpips)) o.scores[Metric::kLpips] = metrics::lpips_video(pred, original, *ex.frame);
  if (wants(config, Metric::kPvcs)) o.scores[Metric::kPvcs] = metrics::pvcs_video(pred, original, *ex.clip);
  if (wants(config, Metric::kPcons)) o.scores[Metric::kPcons] = metrics::pcons_video(pred, mask, config.pcons);
  if (wants(config, Metric::kFid)) {
    for (auto& e : ex.frame->embed_batch(pred.frames)) o.pred_frames.push_back(std::move(e.values));
    for (auto& e : ex.frame->embed_batch(original.frames)) o.ref_frames.push_back(std::move(e.values));
  }
  if (wants(config, Metric::kVfid)) {
    o.pred_clip = ex.clip->embed(pred.frames).values;
    o.ref_clip = ex.clip->embed(original.frames).values;
  }
  o.ok = true;
  cache.store(key, o);
  o.finished = utc_timestamp();
  return o;
}

EvaluationRecord base_record(const RunConfig& config, const MethodAdapter& adapter, const slicer::Slice& slice) {
  EvaluationRecord r;
  r.run_id = config.run_id;
  r.method = adapter.name();
  r.slice = slice.name;
  r.slice_seed = slice.seed;
  return r;
}

}  // namespace

void RunConfig::validate() const {
  if (width < 1 || height < 1) throw ValidationError("evaluation resolution must be positive");
  if (parallelism < 1) throw ValidationError("parallelism must be at least 1");
  if (metrics.empty()) throw ValidationError("metric list is empty");
  std::set<Metric> seen(metrics.begin(), metrics.end());
  if (seen.size() != metrics.size()) throw ValidationError("metric list has duplicates");
  if (run_id.empty()) throw ValidationError("run id is empty");
}

AssetSource manifest_assets(const corpus::Manifest& manifest) {
  return {[&manifest](const std::string& id) {
            const auto* e = manifest.find_clip(id);
            if (!e) throw ValidationError("clip '" + id + "' is not in the manifest");
            return corpus::load_clip(manifest, *e);
          },
          [&manifest](const std::string& id) {
            const auto* e = manifest.find_mask(id);
            if (!e) throw ValidationError("mask '" + id + "' is not in the manifest");
            return corpus::load_mask(manifest, *e);
          }};
}

SliceResult evaluate_slice(const MethodAdapter& adapter, const slicer::Slice& slice, const AssetSource& assets,
                           const Extractors& extractors, const RunConfig& config, RecordLog* log) {
  config.validate();
  const bool need_frame = wants(config, Metric::kLpips) || wants(config, Metric::kFid);
  const bool need_clip = wants(config, Metric::kPvcs) || wants(config, Metric::kVfid);
  if (need_frame && !extractors.frame) throw PreconditionError("LPIPS/FID need a frame extractor");
  if (need_clip && !extractors.clip) throw PreconditionError("PVCS/VFID need a clip extractor");

  Extractors ex = extractors;
  if (!config.cache_dir.empty()) {
    auto store = std::make_shared<const features::EmbeddingCache>(config.cache_dir / "embeddings");
    if (ex.frame) ex.frame = std::make_shared<features::CachingFrameExtractor>(ex.frame, store);
    if (ex.clip) ex.clip = std::make_shared<features::CachingClipExtractor>(ex.clip, store);
  }
  const PairCache cache(config.cache_dir);

  const std::size_t n = slice.pairs.size();
  std::vector<PairOutcome> outcomes(n);
  auto pair_records = [&](std::size_t i) {
    const PairOutcome& o = outcomes[i];
    std::vector<EvaluationRecord> rows;
    for (Metric m : config.metrics) {
      if (metrics::is_slice_level(m)) continue;
      EvaluationRecord r = base_record(config, adapter, slice);
      r.pair_index = static_cast<int>(i);
      r.clip_id = slice.pairs[i].clip_id;
      r.mask_id = slice.pairs[i].mask_id;
      r.metric = metrics::to_string(m);
      r.mask_seed = o.mask_seed;
      r.started = o.started;
      r.finished = o.finished;
      r.fingerprints = o.fingerprints;
      if (o.ok) {
        r.score = o.scores.at(m);
      } else {
        r.status = "error";
        r.message = o.error;
      }
      rows.push_back(std::move(r));
    }
    return rows;
  };
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      PairOutcome& o = outcomes[i];
      try {
        o = evaluate_pair(adapter, slice.pairs[i], assets, ex, config, cache);
      } catch (const std::exception& e) {
        o.ok = false;
        o.error = e.what();
        if (o.started.empty()) o.started = utc_timestamp();
        o.finished = utc_timestamp();
      }
      if (log) log->append(pair_records(i));
    }
  };
  const int threads = std::min<int>(config.parallelism, static_cast<int>(std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SliceResult result;
  result.slice = slice.name;
  result.pairs_total = static_cast<int>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PairOutcome& o = outcomes[i];
    if (o.ok) ++result.pairs_ok;
    if (o.cached) ++result.pairs_cached;
    auto rows = pair_records(i);
    result.records.insert(result.records.end(), rows.begin(), rows.end());
  }

  // Merged in pair order so the slice-level scores do not depend on scheduling.
  for (Metric m : config.metrics) {
    if (!metrics::is_slice_level(m)) continue;
    EvaluationRecord r = base_record(config, adapter, slice);
    r.metric = metrics::to_string(m);
    r.started = utc_timestamp();
    metrics::Accumulator pred, ref;
    for (const auto& o : outcomes) {
      if (!o.ok) continue;
      if (m == Metric::kFid) {
        for (const auto& v : o.pred_frames) pred.add(v);
        for (const auto& v : o.ref_frames) ref.add(v);
      } else {
        pred.add(o.pred_clip);
        ref.add(o.ref_clip);
      }
    }
    r.fingerprints = {{"method", adapter.fingerprint()}};
    if (m == Metric::kFid && ex.frame) r.fingerprints["frame_extractor"] = ex.frame->identity();
    if (m == Metric::kVfid && ex.clip) r.fingerprints["clip_extractor"] = ex.clip->identity();
    try {
      std::vector<std::string> warnings;
      r.score = metrics::frechet_from_accumulators(pred, ref, &warnings);
      for (const auto& w : warnings) result.warnings.push_back(slice.name + " " + r.metric + ": " + w);
    } catch (const std::exception& e) {
      r.status = "error";
      r.message = e.what();
    }
    r.finished = utc_timestamp();
    if (log) log->append(r);
    result.records.push_back(std::move(r));
  }
  return result;
}

std::vector<EvaluationRecord> RunSummary::records() const {
  std::vector<EvaluationRecord> out;
  for (const auto& s : slices) out.insert(out.end(), s.records.begin(), s.records.end());
  return out;
}

RunSummary evaluate_run(const MethodAdapter& adapter, const std::vector<slicer::Slice>& slices,
                        const AssetSource& assets, const Extractors& extractors, const RunConfig& config) {
  config.validate();
  adapter.probe();
  std::unique_ptr<RecordLog> log;
  if (!config.out_dir.empty()) log = std::make_unique<RecordLog>(config.out_dir / "records.jsonl");
  RunSummary summary;
  for (const auto& slice : slices) {
    summary.slices.push_back(evaluate_slice(adapter, slice, assets, extractors, config, log.get()));
    summary.pairs_total += summary.slices.back().pairs_total;
    summary.pairs_ok += summary.slices.back().pairs_ok;
  }
  if (log) {
    write_records_csv(compact(read_records(log->path())), config.out_dir / "records.csv");
    json cov;
    cov["run_id"] = config.run_id;
    cov["method"] = adapter.name();
    cov["pairs_total"] = summary.pairs_total;
    cov["pairs_ok"] = summary.pairs_ok;
    cov["coverage"] = summary.coverage();
    json per_slice = json::array();
    for (const auto& s : summary.slices) {
      per_slice.push_back({{"slice", s.slice},
                           {"pairs_total", s.pairs_total},
                           {"pairs_ok", s.pairs_ok},
                           {"pairs_cached", s.pairs_cached},
                           {"warnings", s.warnings}});
    }
    cov["slices"] = per_slice;
    const auto target = config.out_dir / "coverage.json";
    const auto tmp = std::filesystem::path(target.string() + ".tmp");
    {
      std::ofstream out(tmp);
      out << cov.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, target);
  }
  return summary;
}

}  // namespace vibench::harness
