#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vibench/harness/records.hpp"
#include "vibench/metrics/metric.hpp"

namespace vibench::report {

/// Writes a deterministic report into `out_dir`:
///
///   slice_table.csv            slice, metric, direction, one column per method, best
///   slice_table.md             the same table, best scores in bold
///   method_means.csv           method, metric, mean, standard_error, n
///   slice_difficulty.csv       slice, metric, mean, standard_error, n
///   relative_improvement.csv   method, attribute, metric, value, note
///   plots/method_means-<metric>.svg
///   plots/slice_difficulty-<metric>.svg
///   plots/relative_improvement-<metric>.svg
///   index.json                 the list of files written
///
/// Only `metrics` are reported (all five when empty). Missing values print
/// as "NA". Returns the written paths relative to out_dir.
std::vector<std::string> emit_report(const std::vector<harness::EvaluationRecord>& records,
                                     const std::filesystem::path& out_dir,
                                     const std::vector<metrics::Metric>& metrics = {});

}  // namespace vibench::report
