#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vibench/core/labels.hpp"
#include "vibench/harness/records.hpp"
#include "vibench/metrics/metric.hpp"

namespace vibench::report {

/// Mean with standard error = sample standard deviation (n - 1) / sqrt(n).
/// The standard error is null when n = 1.
struct AggregateStat {
  double mean = 0.0;
  std::optional<double> standard_error;
  int n = 0;
};

/// Throws PreconditionError on an empty input.
AggregateStat aggregate(std::span<const double> values);

/// Score of one method on one slice for one metric: the slice-level record
/// for FID/VFID, the mean over pairs otherwise. A slice with any failed or
/// missing pair has no score.
struct SliceScore {
  std::string method;
  std::string slice;
  metrics::Metric metric;
  std::optional<double> value;
  int pairs = 0;         // pairs with a successful record
  int failed_pairs = 0;  // pairs whose only records are errors
};

/// Collapses repeated records of one (method, slice, pair, metric). Repeats
/// with equal scores merge; unequal successful scores throw ValidationError
/// naming the run ids involved. Records with unknown metric names are
/// rejected with ParseError.
std::vector<SliceScore> slice_scores(const std::vector<harness::EvaluationRecord>& records);

struct TableCell {
  std::optional<double> value;
  bool best = false;
};

/// Method x slice x metric scores with the best method per (slice, metric)
/// flagged according to the metric's direction. Gaps carry no value and
/// are never flagged; ties flag every tied method.
struct SliceTable {
  std::vector<std::string> methods;  // sorted
  std::vector<std::string> slices;   // canonical label order, then other names sorted
  std::vector<metrics::Metric> metrics;
  /// cells[(m * slices + s) * metrics + k]
  std::vector<TableCell> cells;

  const TableCell& cell(std::size_t method, std::size_t slice, std::size_t metric) const {
    return cells[(method * slices.size() + slice) * metrics.size() + metric];
  }
  TableCell& cell(std::size_t method, std::size_t slice, std::size_t metric) {
    return cells[(method * slices.size() + slice) * metrics.size() + metric];
  }
};

SliceTable slice_table(const std::vector<SliceScore>& scores);
SliceTable slice_table(const std::vector<harness::EvaluationRecord>& records);

struct GroupStat {
  std::string group;  // method for mean_across_slices, slice for slice_difficulty
  metrics::Metric metric;
  AggregateStat stat;
};

/// Per (method, metric): aggregate over that method's slice scores.
std::vector<GroupStat> mean_across_slices(const std::vector<SliceScore>& scores);
/// Per slice: aggregate over the methods' scores for `metric`.
std::vector<GroupStat> slice_difficulty(const std::vector<SliceScore>& scores, metrics::Metric metric);

/// (hi - lo) / lo, negated for lower-better metrics so that a positive
/// value means the high setting scores better. Null when lo = 0.
std::optional<double> relative_change(double lo, double hi, metrics::Direction direction);

struct RelativeImprovement {
  std::string method;
  Attribute attribute;
  metrics::Metric metric;
  std::optional<double> value;
  /// Why value is null: "missing low", "missing high" or "zero low score".
  std::string note;
};

RelativeImprovement relative_improvement(const std::vector<SliceScore>& scores, const std::string& method,
                                         Attribute attribute, metrics::Metric metric);

}  // namespace vibench::report
