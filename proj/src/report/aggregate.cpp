#include "vibench/report/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "vibench/core/error.hpp"

namespace vibench::report {
namespace {

using metrics::Metric;

struct PairState {
  std::map<double, std::set<std::string>> ok;  // score -> run ids
  std::set<std::string> error_runs;
};

int slice_rank(const std::string& name) {
  const auto labels = all_labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (to_string(labels[i]) == name) return static_cast<int>(i);
  }
  return static_cast<int>(labels.size());
}

bool slice_less(const std::string& a, const std::string& b) {
  return std::make_tuple(slice_rank(a), a) < std::make_tuple(slice_rank(b), b);
}

const SliceScore* find_score(const std::vector<SliceScore>& scores, const std::string& method,
                             const std::string& slice, Metric metric) {
  for (const auto& s : scores) {
    if (s.method == method && s.slice == slice && s.metric == metric) return &s;
  }
  return nullptr;
}

}  // namespace

AggregateStat aggregate(std::span<const double> values) {
  if (values.empty()) throw PreconditionError("cannot aggregate an empty group");
  AggregateStat s;
  s.n = static_cast<int>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.standard_error = std::sqrt(ss / (s.n - 1)) / std::sqrt(double(s.n));
  }
  return s;
}

std::vector<SliceScore> slice_scores(const std::vector<harness::EvaluationRecord>& records) {
  // (method, slice, metric) -> pair -> state
  std::map<std::tuple<std::string, std::string, Metric>, std::map<int, PairState>> groups;
  for (const auto& r : records) {
    const Metric m = metrics::parse_metric(r.metric);
    if (metrics::is_slice_level(m) != (r.pair_index == harness::kSliceLevel)) {
      throw ValidationError("record for " + r.metric + " on '" + r.slice + "' has pair index " +
                            std::to_string(r.pair_index));
    }
    PairState& p = groups[{r.method, r.slice, m}][r.pair_index];
    if (r.ok()) {
      p.ok[*r.score].insert(r.run_id);
    } else {
      p.error_runs.insert(r.run_id);
    }
  }
  std::vector<SliceScore> out;
  for (const auto& [key, pairs] : groups) {
    const auto& [method, slice, metric] = key;
    SliceScore s{method, slice, metric, std::nullopt, 0, 0};
    double sum = 0.0;
    for (const auto& [index, p] : pairs) {
      if (p.ok.size() > 1) {
        std::set<std::string> runs;
        for (const auto& [score, ids] : p.ok) runs.insert(ids.begin(), ids.end());
        std::string list;
        for (const auto& id : runs) list += (list.empty() ? "" : ", ") + id;
        throw ValidationError("conflicting " + metrics::to_string(metric) + " records for method '" + method +
                              "', slice '" + slice + "', pair " + std::to_string(index) + " from runs: " + list);
      }
      if (p.ok.empty()) {
        ++s.failed_pairs;
      } else {
        ++s.pairs;
        sum += p.ok.begin()->first;
      }
    }
    if (s.failed_pairs == 0 && s.pairs > 0) s.value = sum / s.pairs;
    out.push_back(std::move(s));
  }
  return out;
}

SliceTable slice_table(const std::vector<SliceScore>& scores) {
  SliceTable t;
  std::set<std::string> methods, slices;
  std::set<Metric> ms;
  for (const auto& s : scores) {
    methods.insert(s.method);
    slices.insert(s.slice);
    ms.insert(s.metric);
  }
  t.methods.assign(methods.begin(), methods.end());
  t.slices.assign(slices.begin(), slices.end());
  std::sort(t.slices.begin(), t.slices.end(), slice_less);
  for (Metric m : metrics::all_metrics()) {
    if (ms.count(m)) t.metrics.push_back(m);
  }
  t.cells.resize(t.methods.size() * t.slices.size() * t.metrics.size());
  for (std::size_t si = 0; si < t.slices.size(); ++si) {
    for (std::size_t k = 0; k < t.metrics.size(); ++k) {
      std::optional<double> best;
      for (std::size_t mi = 0; mi < t.methods.size(); ++mi) {
        const SliceScore* s = find_score(scores, t.methods[mi], t.slices[si], t.metrics[k]);
        TableCell& c = t.cell(mi, si, k);
        if (s) c.value = s->value;
        if (!c.value) continue;
        const metrics::MetricScore score{t.metrics[k], *c.value};
        if (!best || score.better_than(*best)) best = *c.value;
      }
      for (std::size_t mi = 0; mi < t.methods.size(); ++mi) {
        TableCell& c = t.cell(mi, si, k);
        c.best = c.value && best && *c.value == *best;
      }
    }
  }
  return t;
}

SliceTable slice_table(const std::vector<harness::EvaluationRecord>& records) {
  return slice_table(slice_scores(records));
}

std::vector<GroupStat> mean_across_slices(const std::vector<SliceScore>& scores) {
  std::map<std::pair<std::string, Metric>, std::vector<double>> groups;
  for (const auto& s : scores) {
    if (s.value) groups[{s.method, s.metric}].push_back(*s.value);
  }
  std::vector<GroupStat> out;
  for (const auto& [key, values] : groups) out.push_back({key.first, key.second, aggregate(values)});
  return out;
}

std::vector<GroupStat> slice_difficulty(const std::vector<SliceScore>& scores, Metric metric) {
  std::map<std::string, std::vector<double>> groups;
  for (const auto& s : scores) {
    if (s.metric == metric && s.value) groups[s.slice].push_back(*s.value);
  }
  std::vector<GroupStat> out;
  for (const auto& [slice, values] : groups) out.push_back({slice, metric, aggregate(values)});
  std::sort(out.begin(), out.end(), [](const GroupStat& a, const GroupStat& b) { return slice_less(a.group, b.group); });
  return out;
}

std::optional<double> relative_change(double lo, double hi, metrics::Direction direction) {
  if (lo == 0.0) return std::nullopt;
  const double r = (hi - lo) / lo;
  if (r == 0.0) return 0.0;  // no negative zero
  return direction == metrics::Direction::kLowerBetter ? -r : r;
}

RelativeImprovement relative_improvement(const std::vector<SliceScore>& scores, const std::string& method,
                                         Attribute attribute, Metric metric) {
  RelativeImprovement ri{method, attribute, metric, std::nullopt, {}};
  const SliceScore* lo = find_score(scores, method, to_string(AttributeLabel{attribute, Setting::kLow}), metric);
  const SliceScore* hi = find_score(scores, method, to_string(AttributeLabel{attribute, Setting::kHigh}), metric);
  if (!lo || !lo->value) {
    ri.note = "missing low";
  } else if (!hi || !hi->value) {
    ri.note = "missing high";
  } else {
    ri.value = relative_change(*lo->value, *hi->value, metrics::direction_of(metric));
    if (!ri.value) ri.note = "zero low score";
  }
  return ri;
}

}  // namespace vibench::report
