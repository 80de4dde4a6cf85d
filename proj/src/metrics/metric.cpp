#include "vibench/metrics/metric.hpp"

#include <algorithm>
#include <sstream>

#include "vibench/core/error.hpp"

namespace vibench::metrics {

Direction direction_of(Metric m) {
  return m == Metric::kPcons ? Direction::kHigherBetter : Direction::kLowerBetter;
}

bool is_slice_level(Metric m) { return m == Metric::kFid || m == Metric::kVfid; }

std::string units_of(Metric m) { return m == Metric::kPcons ? "dB" : ""; }

std::string to_string(Metric m) {
  switch (m) {
    case Metric::kLpips: return "lpips";
    case Metric::kPvcs: return "pvcs";
    case Metric::kFid: return "fid";
    case Metric::kVfid: return "vfid";
    case Metric::kPcons: return "pcons";
  }
  return "?";
}

std::string to_string(Direction d) { return d == Direction::kLowerBetter ? "lower_better" : "higher_better"; }

Metric parse_metric(const std::string& text) {
  for (Metric m : all_metrics()) {
    if (to_string(m) == text) return m;
  }
  throw ParseError("unknown metric '" + text + "'");
}

std::vector<Metric> parse_metric_list(const std::string& text) {
  std::vector<Metric> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw ParseError("empty entry in metric list '" + text + "'");
    const Metric m = parse_metric(item);
    if (std::find(out.begin(), out.end(), m) != out.end()) throw ParseError("duplicate metric '" + item + "'");
    out.push_back(m);
  }
  if (out.empty()) throw ParseError("metric list is empty");
  return out;
}

const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> all{Metric::kLpips, Metric::kPvcs, Metric::kFid, Metric::kVfid, Metric::kPcons};
  return all;
}

}  // namespace vibench::metrics
