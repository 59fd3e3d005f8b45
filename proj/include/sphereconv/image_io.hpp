#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sphereconv/tensor.hpp"

namespace sphereconv {

// Interleaved 8-bit RGB, row-major from the top row.
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// Interleaved float image with 1 or 3 channels, row-major from the top row.
struct FloatImage {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<float> data;

  friend bool operator==(const FloatImage&, const FloatImage&) = default;
};

// Binary PPM (P6). Only maxval 255 is accepted.
void write_ppm(const RgbImage& img, const std::filesystem::path& path);
RgbImage read_ppm(const std::filesystem::path& path);

// PFM, little-endian (negative scale), "Pf" for 1 channel, "PF" for 3.
// Rows are stored bottom-to-top on disk as the format requires.
void write_pfm(const FloatImage& img, const std::filesystem::path& path);
FloatImage read_pfm(const std::filesystem::path& path);

// Conversions to/from C x H x W tensors. RGB values map to [0, 1] via /255
// and back with rounding and clamping.
RgbImage to_rgb_image(const Tensor& t);
Tensor from_rgb_image(const RgbImage& img);
FloatImage to_float_image(const Tensor& t);
Tensor from_float_image(const FloatImage& img);

}  // namespace sphereconv
