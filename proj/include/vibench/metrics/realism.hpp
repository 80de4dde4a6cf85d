#pragma once

#include <span>
#include <string>
#include <vector>

#include "vibench/core/image.hpp"
#include "vibench/features/extractor.hpp"
#include "vibench/metrics/gaussian.hpp"

namespace vibench::metrics {

using Accumulator = GaussianAccumulator<double>;

/// Fréchet distance between the Gaussian fits of two embedding sets.
///
/// A set with no more samples than embedding dimensions has a singular
/// covariance; it is regularized with regularization * I and a message is
/// appended to `warnings` when given.
double frechet_from_accumulators(const Accumulator& pred, const Accumulator& ref,
                                 std::vector<std::string>* warnings = nullptr,
                                 const FrechetOptions& options = {});

/// Accumulates frame embeddings of every frame of every video.
void accumulate_frames(Accumulator& acc, std::span<const RgbFrame> frames,
                       const features::FrameExtractor& extractor);

/// FID: frame-embedding Fréchet distance between two frame sets.
/// Throws PreconditionError if either set is empty.
double fid(std::span<const RgbFrame> pred, std::span<const RgbFrame> ref, const features::FrameExtractor& extractor,
           std::vector<std::string>* warnings = nullptr);

/// VFID: Fréchet distance between whole-video embeddings.
double vfid(std::span<const VideoClip> pred, std::span<const VideoClip> ref, const features::ClipExtractor& extractor,
            std::vector<std::string>* warnings = nullptr);

}  // namespace vibench::metrics
