#include "vibench/harness/records.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "vibench/core/error.hpp"

namespace vibench::harness {

using nlohmann::json;

std::string EvaluationRecord::key() const {
  return method + "\x1f" + slice + "\x1f" + std::to_string(pair_index) + "\x1f" + metric;
}

json to_json(const EvaluationRecord& r) {
  json j;
  j["run_id"] = r.run_id;
  j["method"] = r.method;
  j["slice"] = r.slice;
  j["pair_index"] = r.pair_index;
  j["clip_id"] = r.clip_id;
  j["mask_id"] = r.mask_id;
  j["metric"] = r.metric;
  j["score"] = r.score ? json(*r.score) : json(nullptr);
  j["status"] = r.status;
  if (!r.message.empty()) j["message"] = r.message;
  j["slice_seed"] = r.slice_seed;
  j["mask_seed"] = r.mask_seed;
  j["started"] = r.started;
  j["finished"] = r.finished;
  j["fingerprints"] = r.fingerprints;
  return j;
}

EvaluationRecord record_from_json(const json& j) {
  EvaluationRecord r;
  try {
    r.run_id = j.at("run_id").get<std::string>();
    r.method = j.at("method").get<std::string>();
    r.slice = j.at("slice").get<std::string>();
    r.pair_index = j.at("pair_index").get<int>();
    r.clip_id = j.value("clip_id", "");
    r.mask_id = j.value("mask_id", "");
    r.metric = j.at("metric").get<std::string>();
    if (j.contains("score") && !j["score"].is_null()) r.score = j["score"].get<double>();
    r.status = j.value("status", "ok");
    r.message = j.value("message", "");
    r.slice_seed = j.value("slice_seed", std::uint64_t{0});
    r.mask_seed = j.value("mask_seed", std::uint64_t{0});
    r.started = j.value("started", "");
    r.finished = j.value("finished", "");
    if (j.contains("fingerprints")) r.fingerprints = j["fingerprints"].get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad evaluation record: ") + e.what());
  }
  if (r.status == "ok" && !r.score) throw ParseError("record with status ok has no score", 0, "score");
  return r;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RecordLog::RecordLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::app);
  if (!out_) throw Error("cannot open record log " + path_.string());
}

void RecordLog::append(const EvaluationRecord& record) { append(std::vector<EvaluationRecord>{record}); }

void RecordLog::append(const std::vector<EvaluationRecord>& records) {
  std::string lines;
  for (const auto& r : records) lines += to_json(r).dump() + "\n";
  std::lock_guard lock(mutex_);
  out_ << lines;
  out_.flush();
  if (!out_) throw Error("write to record log " + path_.string() + " failed");
}

std::vector<EvaluationRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open record log " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  // A final line without its newline is a torn write.
  in.clear();
  in.seekg(0, std::ios::end);
  const bool ends_with_newline = [&] {
    if (in.tellg() == std::streampos(0)) return true;
    in.seekg(-1, std::ios::end);
    return in.get() == '\n';
  }();
  std::vector<EvaluationRecord> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const bool last = i + 1 == lines.size();
    try {
      out.push_back(record_from_json(json::parse(lines[i])));
    } catch (const json::parse_error&) {
      if (last && !ends_with_newline) break;
      throw ParseError("malformed record in " + path.string(), static_cast<int>(i + 1));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": " + e.what(), static_cast<int>(i + 1));
    }
  }
  return out;
}

std::vector<EvaluationRecord> read_records_any(const std::filesystem::path& path) {
  if (!std::filesystem::is_directory(path)) return read_records(path);
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(path)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<EvaluationRecord> out;
  for (const auto& f : files) {
    auto part = read_records(f);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<EvaluationRecord> compact(const std::vector<EvaluationRecord>& records) {
  std::map<std::string, const EvaluationRecord*> latest;
  for (const auto& r : records) latest[r.key()] = &r;
  std::vector<EvaluationRecord> out;
  for (const auto& [key, r] : latest) out.push_back(*r);
  std::sort(out.begin(), out.end(), [](const EvaluationRecord& a, const EvaluationRecord& b) {
    return std::tie(a.method, a.slice, a.metric, a.pair_index) < std::tie(b.method, b.slice, b.metric, b.pair_index);
  });
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void write_records_csv(const std::vector<EvaluationRecord>& records, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write " + tmp.string());
    out << "run_id,method,slice,pair_index,clip_id,mask_id,metric,score,status,message\n";
    for (const auto& r : records) {
      char score[64] = "";
      if (r.score) std::snprintf(score, sizeof score, "%.17g", *r.score);
      out << csv_field(r.run_id) << ',' << csv_field(r.method) << ',' << csv_field(r.slice) << ',' << r.pair_index
          << ',' << csv_field(r.clip_id) << ',' << csv_field(r.mask_id) << ',' << csv_field(r.metric) << ','
          << score << ',' << csv_field(r.status) << ',' << csv_field(r.message) << '\n';
    }
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace vibench::harness
