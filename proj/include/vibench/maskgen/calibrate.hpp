#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vibench/maskgen/config.hpp"
#include "vibench/maskgen/measure.hpp"

namespace vibench::maskgen {

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Linear-interpolated quantile of unsorted values (q in [0, 1]).
double quantile(std::vector<double> values, double q);
Quartiles quartiles(const std::vector<double>& values);

double attribute_value(const MaskAttributeMeasurement& m, Attribute a);

/// Measured distribution of one mask attribute when generated at low and at
/// high, with the other two attributes free.
struct AttributeCalibration {
  Attribute attribute = Attribute::kFgSize;
  std::vector<double> low_values;
  std::vector<double> high_values;
  Quartiles low;
  Quartiles high;
  /// Low Q3 strictly below high Q1.
  bool iqr_disjoint = false;
  /// (high Q1 - low Q3) / (high Q1 + low Q3); negative when IQRs overlap.
  double normalized_gap = 0.0;
  Band band;
  double low_label_rate = 0.0;
  double high_label_rate = 0.0;
};

struct CalibrationReport {
  std::vector<AttributeCalibration> attributes;
  bool separated() const;
  double min_normalized_gap() const;
};

/// Settings used to probe one attribute: that attribute fixed, others free.
MaskSettings probe_settings(Attribute a, Target t);

/// Generates seeds [first_seed, first_seed + count) per setting and
/// attribute, measures them and derives label bands: low ceiling at the
/// 97.5th percentile of the low run, high floor at the 2.5th percentile of
/// the high run; if those cross, both collapse around the midpoint between
/// the low Q3 and the high Q1.
CalibrationReport calibrate(const MaskGenConfig& config, std::uint64_t first_seed, int count);

/// Label-agreement check of a config's thresholds on fresh seeds.
CalibrationReport evaluate_separation(const MaskGenConfig& config, std::uint64_t first_seed, int count);

/// Picks the separated candidate with the widest minimum gap and installs
/// its calibrated bands. Throws ValidationError when no candidate separates.
MaskGenConfig sweep(const std::vector<MaskGenConfig>& candidates, std::uint64_t first_seed, int count,
                    CalibrationReport* report = nullptr);

}  // namespace vibench::maskgen
