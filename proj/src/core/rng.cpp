#include "vibench/core/rng.hpp"

namespace vibench {

std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Engine derive_stream(std::uint64_t seed, std::string_view tag) {
  const std::uint64_t t = hash_tag(tag);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
  return Engine(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  Engine eng = derive_stream(seed, tag);
  return eng();
}

}  // namespace vibench
