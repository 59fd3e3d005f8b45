#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "sphereconv/geometry.hpp"
#include "sphereconv/kernel.hpp"

namespace sphereconv {

// Nine per-pixel index tables. tables[k][i] is the flat pixel index sampled by
// kernel slot k of the kernel centred at flat pixel i. Table 0 is the identity.
struct KernelLut {
  ErpGrid grid{2, 4};
  std::array<std::vector<std::uint32_t>, kKernelPoints> tables;
  std::uint64_t checksum = 0;

  std::span<const std::uint32_t> table(int k) const { return tables[k]; }
};

// FNV-1a (64 bit) over raw bytes.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

// Hash of the tables serialized as little-endian u32, in table order.
std::uint64_t lut_checksum(const KernelLut& lut);

KernelLut compile_lut(const ErpGrid& g);

// Binary layout: "SLUT", u16 version (1), u32 H, u32 W, 9*H*W u32 indices,
// u64 FNV-1a of the index bytes. All integers little-endian.
void save_lut(const KernelLut& lut, const std::filesystem::path& path);
// Throws IoError, FormatError (bad/truncated header or payload) or
// ChecksumError.
KernelLut load_lut(const std::filesystem::path& path);

// Compiles each resolution once. With a directory, tables are persisted as
// lut_<H>x<W>.slut and reloaded on later runs.
class LutCache {
 public:
  LutCache() = default;
  explicit LutCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::shared_ptr<const KernelLut> get(const ErpGrid& g);

 private:
  std::filesystem::path dir_;
  std::mutex mu_;
  std::map<std::pair<int, int>, std::shared_ptr<const KernelLut>> entries_;
};

}  // namespace sphereconv
