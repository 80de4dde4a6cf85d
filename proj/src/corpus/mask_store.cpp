#include "vibench/corpus/mask_store.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "vibench/core/image_io.hpp"

namespace vibench::corpus {
namespace {

using nlohmann::json;

constexpr std::array<char, 8> kMagic = {'V', 'B', 'M', 'R', 'L', 'E', '1', '\0'};

json meta_of(const MaskSequence& mask) {
  return {{"id", mask.id},
          {"seed", mask.seed},
          {"labels", mask.labels.to_strings()},
          {"width", mask.width()},
          {"height", mask.height()},
          {"length", mask.length()}};
}

void apply_meta(const json& meta, MaskSequence& mask) {
  mask.id = meta.value("id", std::string());
  mask.seed = meta.value("seed", std::uint64_t{0});
  mask.labels = LabelSet::from_strings(meta.value("labels", std::vector<std::string>{}));
}

template <typename T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw ParseError("truncated mask container");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void write_mask_directory(const MaskSequence& mask, const fs::path& dir) {
  mask.check_binary();
  write_mask_dir(mask.frames, dir);
  std::ofstream out(dir / "meta.json");
  out << meta_of(mask).dump(2) << "\n";
}

MaskSequence read_mask_directory(const fs::path& dir) {
  MaskSequence mask;
  mask.frames = read_mask_dir(dir);
  const fs::path meta_path = dir / "meta.json";
  if (fs::exists(meta_path)) {
    std::ifstream in(meta_path);
    try {
      apply_meta(json::parse(in), mask);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad mask metadata: ") + e.what(), 0, meta_path.string());
    }
  }
  mask.check_uniform();
  return mask;
}

void write_mask_rle(const MaskSequence& mask, const fs::path& path) {
  mask.check_uniform();
  mask.check_binary();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(mask.width()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(mask.height()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(mask.length()));
  put<std::uint64_t>(out, mask.seed);
  const std::string meta = meta_of(mask).dump();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
  out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  for (const auto& frame : mask.frames) {
    std::vector<std::uint32_t> runs;
    std::uint8_t current = 0;
    std::uint32_t run = 0;
    for (Eigen::Index i = 0; i < frame.size(); ++i) {
      const std::uint8_t v = frame.data()[i];
      if (v != current) {
        runs.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
    runs.push_back(run);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(runs.size()));
    for (auto r : runs) put<std::uint32_t>(out, r);
  }
}

MaskSequence read_mask_rle(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ParseError("not a mask container", 0, path.string());
  const auto width = get<std::uint32_t>(in);
  const auto height = get<std::uint32_t>(in);
  const auto frames = get<std::uint32_t>(in);
  MaskSequence mask;
  const auto seed = get<std::uint64_t>(in);
  const auto meta_len = get<std::uint32_t>(in);
  std::string meta(meta_len, '\0');
  if (!in.read(meta.data(), meta_len)) throw ParseError("truncated mask container");
  try {
    apply_meta(json::parse(meta), mask);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad container metadata: ") + e.what(), 0, path.string());
  }
  mask.seed = seed;
  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  for (std::uint32_t t = 0; t < frames; ++t) {
    MaskFrame frame(height, width);
    const auto count = get<std::uint32_t>(in);
    std::size_t pos = 0;
    std::uint8_t value = 0;
    for (std::uint32_t r = 0; r < count; ++r) {
      const auto len = get<std::uint32_t>(in);
      if (pos + len > pixels) throw ParseError("run overflows frame", 0, path.string());
      std::memset(frame.data() + pos, value, len);
      pos += len;
      value ^= 1;
    }
    if (pos != pixels) throw ParseError("runs do not cover frame", 0, path.string());
    mask.frames.push_back(std::move(frame));
  }
  return mask;
}

MaskSequence read_mask_any(const fs::path& path) {
  if (path.extension() == ".rle") return read_mask_rle(path);
  return read_mask_directory(path);
}

}  // namespace vibench::corpus
