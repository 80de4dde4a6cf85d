#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace vibench::harness {

/// Pair index of slice-level records (FID, VFID).
inline constexpr int kSliceLevel = -1;

/// One persisted score. Failed pairs carry status "error", no score and the
/// failure message.
struct EvaluationRecord {
  std::string run_id;
  std::string method;
  std::string slice;
  int pair_index = kSliceLevel;
  std::string clip_id;  // empty for slice-level records
  std::string mask_id;
  std::string metric;
  std::optional<double> score;
  std::string status = "ok";
  std::string message;
  std::uint64_t slice_seed = 0;
  std::uint64_t mask_seed = 0;
  std::string started;   // UTC, ISO 8601
  std::string finished;
  /// Artifact name -> fingerprint (method, extractors, inputs).
  std::map<std::string, std::string> fingerprints;

  bool ok() const { return status == "ok" && score.has_value(); }
  /// (method, slice, pair, metric) as one string.
  std::string key() const;

  friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

nlohmann::json to_json(const EvaluationRecord& r);
EvaluationRecord record_from_json(const nlohmann::json& j);

/// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

/// Append-only JSON-lines log. Each append writes one complete line and
/// flushes it under a lock, so concurrent appends never interleave.
class RecordLog {
 public:
  explicit RecordLog(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }
  void append(const EvaluationRecord& record);
  void append(const std::vector<EvaluationRecord>& records);

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
  std::ofstream out_;
};

/// Reads a JSON-lines log. A torn final line (crash mid-write) is skipped;
/// any other malformed line throws ParseError with its line number.
std::vector<EvaluationRecord> read_records(const std::filesystem::path& path);
/// Reads a log file, or every *.jsonl under a directory (sorted by path).
std::vector<EvaluationRecord> read_records_any(const std::filesystem::path& path);

/// Last record per key() in log order, sorted by (method, slice, metric, pair).
std::vector<EvaluationRecord> compact(const std::vector<EvaluationRecord>& records);

/// CSV with a fixed header; written to a temporary file and renamed.
void write_records_csv(const std::vector<EvaluationRecord>& records, const std::filesystem::path& path);

/// Minimal CSV field quoting.
std::string csv_field(const std::string& s);

}  // namespace vibench::harness
