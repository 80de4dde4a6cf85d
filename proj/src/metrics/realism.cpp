#include "vibench/metrics/realism.hpp"

namespace vibench::metrics {
namespace {

GaussianSummary<double> fit(const Accumulator& acc, const char* which, std::vector<std::string>* warnings,
                            const FrechetOptions& options) {
  if (acc.count() == 0) throw PreconditionError(std::string(which) + " set is empty");
  GaussianSummary<double> g = acc.summary();
  if (acc.count() <= acc.dim()) {
    g.cov.diagonal().array() += options.regularization;
    if (warnings) {
      warnings->push_back(std::string(which) + " set has " + std::to_string(acc.count()) + " samples for a " +
                          std::to_string(acc.dim()) + "-D embedding; covariance is singular and was regularized");
    }
  }
  return g;
}

}  // namespace

double frechet_from_accumulators(const Accumulator& pred, const Accumulator& ref, std::vector<std::string>* warnings,
                                 const FrechetOptions& options) {
  const auto gp = fit(pred, "prediction", warnings, options);
  const auto gr = fit(ref, "reference", warnings, options);
  return frechet_distance(gp, gr, options);
}

void accumulate_frames(Accumulator& acc, std::span<const RgbFrame> frames, const features::FrameExtractor& extractor) {
  for (const auto& e : extractor.embed_batch(frames)) acc.add(e.values);
}

double fid(std::span<const RgbFrame> pred, std::span<const RgbFrame> ref, const features::FrameExtractor& extractor,
           std::vector<std::string>* warnings) {
  if (pred.empty() || ref.empty()) throw PreconditionError("FID needs non-empty frame sets");
  Accumulator ap, ar;
  accumulate_frames(ap, pred, extractor);
  accumulate_frames(ar, ref, extractor);
  return frechet_from_accumulators(ap, ar, warnings);
}

double vfid(std::span<const VideoClip> pred, std::span<const VideoClip> ref, const features::ClipExtractor& extractor,
            std::vector<std::string>* warnings) {
  if (pred.empty() || ref.empty()) throw PreconditionError("VFID needs non-empty video sets");
  Accumulator ap, ar;
  for (const auto& v : pred) ap.add(extractor.embed(v.frames).values);
  for (const auto& v : ref) ar.add(extractor.embed(v.frames).values);
  return frechet_from_accumulators(ap, ar, warnings);
}

}  // namespace vibench::metrics
