#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sphereconv/tensor.hpp"

namespace sphereconv {

// Checkpoint file layout (all integers little-endian):
//
//   "SCKP"  u16 version (1)
//   u32 metadata entry count, then per entry: u32 len, key bytes, u32 len, value bytes
//   u32 tensor count, then per tensor: u32 len, name bytes, u32 C, u32 H, u32 W,
//       C*H*W f64 values
//   u64 FNV-1a over every preceding byte
struct Checkpoint {
  std::map<std::string, std::string> meta;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor* find(const std::string& name) const;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
// Throws IoError, FormatError (truncation/bad header) or ChecksumError.
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Snapshot of parameter values (not gradients).
Checkpoint make_checkpoint(const ParameterList& params, std::map<std::string, std::string> meta = {});
// Copies values by name. Throws ShapeError on a missing name or shape mismatch.
void restore_parameters(const Checkpoint& ckpt, const ParameterList& params);

}  // namespace sphereconv
