#include "vibench/features/cache.hpp"

#include <atomic>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "vibench/core/error.hpp"
#include "vibench/features/fingerprint.hpp"

namespace vibench::features {
namespace {

constexpr char kMagic[8] = {'V', 'B', 'E', 'M', 'B', '0', '1', '\0'};

void hash_frame(Sha256& h, const RgbFrame& frame) {
  const std::int32_t dims[2] = {frame.width(), frame.height()};
  h.update_pod(dims, 2);
  h.update_pod(frame.data(), static_cast<std::size_t>(frame.interleaved().size()));
}

std::string unique_suffix() {
  static std::atomic<std::uint64_t> counter{0};
  std::ostringstream s;
  s << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "." << counter++;
  return s.str();
}

}  // namespace

std::string content_hash(const RgbFrame& frame) {
  Sha256 h;
  hash_frame(h, frame);
  return h.hex();
}

std::string content_hash(std::span<const RgbFrame> frames) {
  Sha256 h;
  const auto n = static_cast<std::uint64_t>(frames.size());
  h.update_pod(&n, 1);
  for (const auto& f : frames) hash_frame(h, f);
  return h.hex();
}

EmbeddingCache::EmbeddingCache(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path EmbeddingCache::path_for(const std::string& identity, const std::string& hash) const {
  if (hash.size() < 2) throw PreconditionError("content hash too short");
  return root_ / identity.substr(0, 16) / hash.substr(0, 2) / (hash + ".emb");
}

std::optional<PooledEmbedding> EmbeddingCache::get(const std::string& identity, const std::string& hash) const {
  std::ifstream in(path_for(identity, hash), std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::uint32_t pooling_len = 0;
  std::uint32_t dim = 0;
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(&pooling_len), sizeof pooling_len) || pooling_len > 4096) return std::nullopt;
  PooledEmbedding e;
  e.pooling.resize(pooling_len);
  if (!in.read(e.pooling.data(), pooling_len)) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(&dim), sizeof dim) || dim > (1u << 24)) return std::nullopt;
  e.values.resize(dim);
  if (!in.read(reinterpret_cast<char*>(e.values.data()), static_cast<std::streamsize>(dim * sizeof(double)))) {
    return std::nullopt;
  }
  if (in.peek() != std::char_traits<char>::eof()) return std::nullopt;
  e.fingerprint = identity;
  return e;
}

void EmbeddingCache::put(const std::string& identity, const std::string& hash, const PooledEmbedding& e) const {
  const auto target = path_for(identity, hash);
  std::filesystem::create_directories(target.parent_path());
  const auto tmp = std::filesystem::path(target.string() + unique_suffix());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write cache entry " + tmp.string());
    const auto pooling_len = static_cast<std::uint32_t>(e.pooling.size());
    const auto dim = static_cast<std::uint32_t>(e.values.size());
    out.write(kMagic, 8);
    out.write(reinterpret_cast<const char*>(&pooling_len), sizeof pooling_len);
    out.write(e.pooling.data(), pooling_len);
    out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
    out.write(reinterpret_cast<const char*>(e.values.data()), static_cast<std::streamsize>(dim * sizeof(double)));
    if (!out.flush()) throw Error("cannot write cache entry " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

CachingFrameExtractor::CachingFrameExtractor(FrameExtractorPtr inner, std::shared_ptr<const EmbeddingCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {
  if (!inner_ || !cache_) throw PreconditionError("caching extractor needs an extractor and a cache");
}

PooledEmbedding CachingFrameExtractor::embed(const RgbFrame& frame) const {
  const std::string hash = content_hash(frame);
  if (auto hit = cache_->get(identity(), hash)) {
    hit->fingerprint = inner_->fingerprint();
    return *hit;
  }
  PooledEmbedding e = inner_->embed(frame);
  cache_->put(identity(), hash, e);
  return e;
}

std::vector<PooledEmbedding> CachingFrameExtractor::embed_batch(std::span<const RgbFrame> frames) const {
  std::vector<PooledEmbedding> out(frames.size());
  std::vector<std::string> hashes(frames.size());
  std::vector<RgbFrame> missing;
  std::vector<std::size_t> missing_index;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    hashes[i] = content_hash(frames[i]);
    if (auto hit = cache_->get(identity(), hashes[i])) {
      out[i] = std::move(*hit);
      out[i].fingerprint = inner_->fingerprint();
    } else {
      missing.push_back(frames[i]);
      missing_index.push_back(i);
    }
  }
  if (!missing.empty()) {
    auto computed = inner_->embed_batch(missing);
    for (std::size_t k = 0; k < computed.size(); ++k) {
      cache_->put(identity(), hashes[missing_index[k]], computed[k]);
      out[missing_index[k]] = std::move(computed[k]);
    }
  }
  return out;
}

CachingClipExtractor::CachingClipExtractor(ClipExtractorPtr inner, std::shared_ptr<const EmbeddingCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {
  if (!inner_ || !cache_) throw PreconditionError("caching extractor needs an extractor and a cache");
}

PooledEmbedding CachingClipExtractor::embed(std::span<const RgbFrame> frames) const {
  const std::string hash = content_hash(frames);
  if (auto hit = cache_->get(identity(), hash)) {
    hit->fingerprint = inner_->fingerprint();
    return *hit;
  }
  PooledEmbedding e = inner_->embed(frames);
  cache_->put(identity(), hash, e);
  return e;
}

}  // namespace vibench::features
