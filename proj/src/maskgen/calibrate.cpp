#include "vibench/maskgen/calibrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "vibench/core/error.hpp"
#include "vibench/maskgen/generator.hpp"

namespace vibench::maskgen {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw PreconditionError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Quartiles quartiles(const std::vector<double>& values) {
  return {quantile(values, 0.25), quantile(values, 0.5), quantile(values, 0.75)};
}

double attribute_value(const MaskAttributeMeasurement& m, Attribute a) {
  switch (a) {
    case Attribute::kFgSize: return m.fg_size;
    case Attribute::kFgDisplacement: return m.fg_displacement;
    case Attribute::kFgPoseMotion: return m.fg_pose_motion;
    default: throw PreconditionError(to_string(a) + " is not a mask attribute");
  }
}

bool CalibrationReport::separated() const {
  return std::all_of(attributes.begin(), attributes.end(),
                     [](const AttributeCalibration& a) { return a.iqr_disjoint; });
}

double CalibrationReport::min_normalized_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& a : attributes) g = std::min(g, a.normalized_gap);
  return g;
}

MaskSettings probe_settings(Attribute a, Target t) {
  MaskSettings s;
  if (a == Attribute::kFgDisplacement) s.fg_displacement = t;
  else if (a == Attribute::kFgPoseMotion) s.fg_pose_motion = t;
  else if (a == Attribute::kFgSize) s.fg_size = t;
  else throw PreconditionError(to_string(a) + " is not a mask attribute");
  return s;
}

namespace {

constexpr std::array<Attribute, 3> kMaskAttributes = {Attribute::kFgSize, Attribute::kFgDisplacement,
                                                      Attribute::kFgPoseMotion};

Band& band_of(LabelThresholds& t, Attribute a) {
  if (a == Attribute::kFgSize) return t.fg_size;
  if (a == Attribute::kFgDisplacement) return t.fg_displacement;
  return t.fg_pose_motion;
}

std::vector<double> run(const MaskGenConfig& config, Attribute a, Target t, std::uint64_t first_seed,
                        int count) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const auto mask = generate_mask(config, probe_settings(a, t), first_seed + static_cast<std::uint64_t>(i));
    values.push_back(attribute_value(measure_attributes(mask), a));
  }
  return values;
}

double rate(const std::vector<double>& values, const Band& band, Setting s) {
  if (values.empty()) return 0.0;
  const auto n = std::count_if(values.begin(), values.end(), [&](double v) {
    return s == Setting::kLow ? v <= band.low_ceiling : v >= band.high_floor;
  });
  return static_cast<double>(n) / static_cast<double>(values.size());
}

CalibrationReport measure_all(const MaskGenConfig& config, std::uint64_t first_seed, int count,
                              bool derive_bands) {
  if (count < 1) throw PreconditionError("calibration needs at least one seed");
  CalibrationReport report;
  for (Attribute a : kMaskAttributes) {
    AttributeCalibration c;
    c.attribute = a;
    c.low_values = run(config, a, Target::kLow, first_seed, count);
    c.high_values = run(config, a, Target::kHigh, first_seed, count);
    c.low = quartiles(c.low_values);
    c.high = quartiles(c.high_values);
    c.iqr_disjoint = c.low.q3 < c.high.q1;
    const double denom = c.high.q1 + c.low.q3;
    c.normalized_gap = denom > 0.0 ? (c.high.q1 - c.low.q3) / denom : 0.0;
    if (derive_bands) {
      c.band.low_ceiling = quantile(c.low_values, 0.975);
      c.band.high_floor = quantile(c.high_values, 0.025);
      if (!(c.band.low_ceiling < c.band.high_floor)) {
        const double mid = 0.5 * (c.low.q3 + c.high.q1);
        const double eps = 1e-6 * std::max(1e-12, std::abs(mid));
        c.band = {mid - eps, mid + eps};
      }
    } else {
      LabelThresholds t = config.thresholds;
      c.band = band_of(t, a);
    }
    c.low_label_rate = rate(c.low_values, c.band, Setting::kLow);
    c.high_label_rate = rate(c.high_values, c.band, Setting::kHigh);
    report.attributes.push_back(std::move(c));
  }
  return report;
}

}  // namespace

CalibrationReport calibrate(const MaskGenConfig& config, std::uint64_t first_seed, int count) {
  return measure_all(config, first_seed, count, true);
}

CalibrationReport evaluate_separation(const MaskGenConfig& config, std::uint64_t first_seed, int count) {
  return measure_all(config, first_seed, count, false);
}

MaskGenConfig sweep(const std::vector<MaskGenConfig>& candidates, std::uint64_t first_seed, int count,
                    CalibrationReport* report) {
  const MaskGenConfig* best = nullptr;
  CalibrationReport best_report;
  for (const auto& candidate : candidates) {
    auto r = calibrate(candidate, first_seed, count);
    if (!r.separated()) continue;
    if (best == nullptr || r.min_normalized_gap() > best_report.min_normalized_gap()) {
      best = &candidate;
      best_report = std::move(r);
    }
  }
  if (best == nullptr) throw ValidationError("no candidate config separates all mask attributes");
  MaskGenConfig out = *best;
  for (const auto& a : best_report.attributes) band_of(out.thresholds, a.attribute) = a.band;
  out.validate();
  if (report) *report = std::move(best_report);
  return out;
}

}  // namespace vibench::maskgen
