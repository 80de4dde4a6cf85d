#pragma once

#include <string>
#include <vector>

namespace vibench::metrics {

enum class Metric { kLpips, kPvcs, kFid, kVfid, kPcons };
enum class Direction { kLowerBetter, kHigherBetter };

/// LPIPS, PVCS, FID and VFID are lower-better; PCons is higher-better.
Direction direction_of(Metric m);
/// FID and VFID score a whole slice; the others score one video pair.
bool is_slice_level(Metric m);
/// Short unit note for reports ("dB" for PCons, empty otherwise).
std::string units_of(Metric m);

std::string to_string(Metric m);
std::string to_string(Direction d);
/// Accepts "lpips", "pvcs", "fid", "vfid", "pcons". Throws ParseError.
Metric parse_metric(const std::string& text);
/// Parses a comma-separated list, rejecting empties and duplicates.
std::vector<Metric> parse_metric_list(const std::string& text);
const std::vector<Metric>& all_metrics();

struct MetricScore {
  Metric metric;
  double value = 0.0;

  Direction direction() const { return direction_of(metric); }
  /// True if this score is strictly better than `other` under the metric's direction.
  bool better_than(double other) const {
    return direction() == Direction::kLowerBetter ? value < other : value > other;
  }
};

}  // namespace vibench::metrics
