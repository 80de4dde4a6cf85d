#include "vibench/maskgen/batch.hpp"

#include <cstdio>

#include "vibench/corpus/mask_store.hpp"
#include "vibench/maskgen/calibrate.hpp"
#include "vibench/maskgen/generator.hpp"
#include "vibench/maskgen/measure.hpp"

namespace vibench::maskgen {

std::vector<corpus::MaskEntry> generate_mask_set(const MaskGenConfig& config, const MaskBatchOptions& options,
                                                 const std::filesystem::path& root,
                                                 std::vector<std::string>* warnings) {
  config.validate();
  if (options.per_setting < 0) throw PreconditionError("per_setting must be non-negative");
  std::filesystem::create_directories(root / options.subdir);
  std::vector<corpus::MaskEntry> out;
  std::uint64_t seed = options.first_seed;
  for (const auto& label : all_labels()) {
    if (modality_of(label.attribute) != Modality::kMask) continue;
    const MaskSettings settings =
        probe_settings(label.attribute, label.setting == Setting::kLow ? Target::kLow : Target::kHigh);
    for (int k = 0; k < options.per_setting; ++k, ++seed) {
      char id[32];
      std::snprintf(id, sizeof id, "mask-%05llu", static_cast<unsigned long long>(seed));
      MaskSequence mask = generate_mask(config, settings, seed);
      mask.id = id;
      mask.labels = label_mask(measure_attributes(mask), config.thresholds);
      const auto measured = mask.labels.get(label.attribute);
      if (measured != label.setting && warnings) {
        warnings->push_back(std::string(id) + " generated for " + to_string(label) + " measured as " +
                            (measured ? to_string(*measured) : std::string("unlabelled")));
      }
      const std::string rel = options.subdir + "/" + id + (options.rle ? ".rle" : "");
      if (options.rle) {
        corpus::write_mask_rle(mask, root / rel);
      } else {
        corpus::write_mask_directory(mask, root / rel);
      }
      corpus::MaskEntry e;
      e.id = id;
      e.path = rel;
      e.length = mask.length();
      e.seed = seed;
      e.labels = mask.labels;
      e.generator = to_json(settings);
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace vibench::maskgen
