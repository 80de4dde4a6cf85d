#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vibench {

using Engine = std::mt19937_64;

/// FNV-1a, used to fold string tags into stream seeds.
std::uint64_t hash_tag(std::string_view tag);

/// Independent deterministic stream for (seed, purpose). Two different tags
/// under the same seed never share a stream prefix in practice.
Engine derive_stream(std::uint64_t seed, std::string_view tag);

/// Child seed for hierarchical derivation (master seed -> per-slice seed).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

inline double uniform(Engine& eng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(eng);
}

inline bool bernoulli(Engine& eng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(eng);
}

}  // namespace vibench
