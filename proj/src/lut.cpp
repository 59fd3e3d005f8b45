#include "sphereconv/lut.hpp"

#include <cstring>
#include <string>

#include "binary_io.hpp"
#include "sphereconv/error.hpp"

namespace sphereconv {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'U', 'T'};
constexpr std::uint16_t kVersion = 1;

void append_le32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t lut_checksum(const KernelLut& lut) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::vector<std::uint8_t> buf;
  for (const auto& t : lut.tables) {
    buf.clear();
    buf.reserve(t.size() * 4);
    for (std::uint32_t v : t) append_le32(buf, v);
    h = fnv1a64(buf, h);
  }
  return h;
}

KernelLut compile_lut(const ErpGrid& g) {
  KernelLut lut;
  lut.grid = g;
  const SphericalPattern pattern = base_pattern(g);
  for (auto& t : lut.tables) t.resize(g.size());
  for (int v = 0; v < g.height(); ++v) {
    for (int u = 0; u < g.width(); ++u) {
      const PixelCoord px{v, u};
      const std::uint32_t i = flat_index(px, g);
      const auto points = kernel_at(pixel_to_angles(px, g), pattern);
      lut.tables[0][i] = i;
      for (int k = 1; k < kKernelPoints; ++k) {
        lut.tables[k][i] = flat_index(angles_to_pixel(angles_from_point(points[k]), g), g);
      }
    }
  }
  lut.checksum = lut_checksum(lut);
  return lut;
}

void save_lut(const KernelLut& lut, const std::filesystem::path& path) {
  detail::ByteWriter w;
  w.bytes(kMagic, 4);
  w.le<std::uint16_t>(kVersion);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(lut.grid.height()));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(lut.grid.width()));
  for (const auto& t : lut.tables) {
    for (std::uint32_t v : t) w.le<std::uint32_t>(v);
  }
  w.le<std::uint64_t>(lut_checksum(lut));
  detail::write_file(path.string(), w.data());
}

KernelLut load_lut(const std::filesystem::path& path) {
  const auto data = detail::read_file(path.string());
  detail::ByteReader r(data, "LUT file " + path.string());
  const auto magic = r.bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw FormatError("LUT file " + path.string() + ": bad magic");
  }
  const auto version = r.le<std::uint16_t>();
  if (version != kVersion) {
    throw FormatError("LUT file " + path.string() + ": unsupported version " +
                      std::to_string(version));
  }
  const auto h = r.le<std::uint32_t>();
  const auto wd = r.le<std::uint32_t>();
  if (h < 2 || h > (1u << 15) || wd != 2 * h) {
    throw FormatError("LUT file " + path.string() + ": bad dimensions");
  }
  KernelLut lut;
  lut.grid = ErpGrid(static_cast<int>(h), static_cast<int>(wd));
  const std::size_t n = lut.grid.size();
  const std::size_t payload = kKernelPoints * n * 4;
  if (r.remaining() != payload + 8) {
    throw FormatError("LUT file " + path.string() + ": size does not match header");
  }
  const std::uint64_t actual = fnv1a64(r.bytes(payload));
  const std::uint64_t stored = r.le<std::uint64_t>();
  if (actual != stored) throw ChecksumError("LUT file " + path.string() + ": checksum mismatch");

  detail::ByteReader tables(std::span<const std::uint8_t>(data).subspan(14, payload),
                            "LUT tables");
  for (auto& t : lut.tables) {
    t.resize(n);
    for (auto& v : t) {
      v = tables.le<std::uint32_t>();
      if (v >= n) throw FormatError("LUT file " + path.string() + ": index out of range");
    }
  }
  lut.checksum = stored;
  return lut;
}

std::shared_ptr<const KernelLut> LutCache::get(const ErpGrid& g) {
  std::lock_guard lock(mu_);
  const auto key = std::make_pair(g.height(), g.width());
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;

  std::shared_ptr<const KernelLut> lut;
  if (!dir_.empty()) {
    const auto file = dir_ / ("lut_" + std::to_string(g.height()) + "x" +
                              std::to_string(g.width()) + ".slut");
    if (std::filesystem::exists(file)) {
      lut = std::make_shared<const KernelLut>(load_lut(file));
    } else {
      auto compiled = compile_lut(g);
      std::filesystem::create_directories(dir_);
      save_lut(compiled, file);
      lut = std::make_shared<const KernelLut>(std::move(compiled));
    }
  } else {
    lut = std::make_shared<const KernelLut>(compile_lut(g));
  }
  entries_.emplace(key, lut);
  return lut;
}

}  // namespace sphereconv
