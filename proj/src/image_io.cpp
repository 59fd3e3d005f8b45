#include "sphereconv/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <string>

#include "binary_io.hpp"
#include "sphereconv/error.hpp"

namespace sphereconv {

namespace {

// Minimal tokenizer for the ASCII part of netpbm-style headers.
class HeaderParser {
 public:
  HeaderParser(const std::vector<std::uint8_t>& data, std::string what) : data_(data), what_(std::move(what)) {}

  std::string token() {
    skip_space_and_comments();
    std::string t;
    while (pos_ < data_.size() && !std::isspace(data_[pos_])) t.push_back(static_cast<char>(data_[pos_++]));
    if (t.empty()) throw FormatError(what_ + ": truncated header");
    return t;
  }

  long integer() {
    const std::string t = token();
    try {
      std::size_t used = 0;
      const long v = std::stol(t, &used);
      if (used != t.size()) throw FormatError(what_ + ": bad header field '" + t + "'");
      return v;
    } catch (const std::logic_error&) {
      throw FormatError(what_ + ": bad header field '" + t + "'");
    }
  }

  double real() {
    const std::string t = token();
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used != t.size()) throw FormatError(what_ + ": bad header field '" + t + "'");
      return v;
    } catch (const std::logic_error&) {
      throw FormatError(what_ + ": bad header field '" + t + "'");
    }
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_start() {
    if (pos_ >= data_.size() || !std::isspace(data_[pos_])) throw FormatError(what_ + ": truncated header");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (std::isspace(data_[pos_])) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& data_;
  std::string what_;
  std::size_t pos_ = 0;
};

void check_dims(long w, long h, const std::string& what) {
  if (w <= 0 || h <= 0 || w > (1 << 16) || h > (1 << 16)) throw FormatError(what + ": bad dimensions");
}

}  // namespace

void write_ppm(const RgbImage& img, const std::filesystem::path& path) {
  if (img.data.size() != static_cast<std::size_t>(img.height) * img.width * 3) {
    throw ShapeError("write_ppm: pixel buffer does not match dimensions");
  }
  const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data.begin(), img.data.end());
  detail::write_file(path.string(), out);
}

RgbImage read_ppm(const std::filesystem::path& path) {
  const auto data = detail::read_file(path.string());
  const std::string what = "PPM " + path.string();
  HeaderParser hp(data, what);
  if (hp.token() != "P6") throw FormatError(what + ": bad magic (expected P6)");
  const long w = hp.integer();
  const long h = hp.integer();
  check_dims(w, h, what);
  const long maxval = hp.integer();
  if (maxval != 255) throw FormatError(what + ": only maxval 255 is supported");
  const std::size_t start = hp.raster_start();
  const std::size_t n = static_cast<std::size_t>(w) * h * 3;
  if (data.size() < start + n) throw FormatError(what + ": truncated raster");
  RgbImage img{static_cast<int>(h), static_cast<int>(w), {}};
  img.data.assign(data.begin() + static_cast<std::ptrdiff_t>(start),
                  data.begin() + static_cast<std::ptrdiff_t>(start + n));
  return img;
}

void write_pfm(const FloatImage& img, const std::filesystem::path& path) {
  if (img.channels != 1 && img.channels != 3) throw ShapeError("write_pfm: 1 or 3 channels only");
  const std::size_t row = static_cast<std::size_t>(img.width) * img.channels;
  if (img.data.size() != row * img.height) throw ShapeError("write_pfm: pixel buffer does not match dimensions");
  const std::string header = std::string(img.channels == 1 ? "Pf" : "PF") + "\n" + std::to_string(img.width) +
                             " " + std::to_string(img.height) + "\n-1.0\n";
  detail::ByteWriter w;
  w.bytes(header.data(), header.size());
  for (int y = img.height - 1; y >= 0; --y) {
    for (std::size_t i = 0; i < row; ++i) w.le<float>(img.data[static_cast<std::size_t>(y) * row + i]);
  }
  detail::write_file(path.string(), w.data());
}

FloatImage read_pfm(const std::filesystem::path& path) {
  const auto data = detail::read_file(path.string());
  const std::string what = "PFM " + path.string();
  HeaderParser hp(data, what);
  const std::string magic = hp.token();
  int channels = 0;
  if (magic == "Pf") {
    channels = 1;
  } else if (magic == "PF") {
    channels = 3;
  } else {
    throw FormatError(what + ": bad magic (expected Pf or PF)");
  }
  const long w = hp.integer();
  const long h = hp.integer();
  check_dims(w, h, what);
  const double scale = hp.real();
  if (scale == 0.0 || !std::isfinite(scale)) throw FormatError(what + ": bad scale");
  const bool little = scale < 0.0;
  const std::size_t start = hp.raster_start();
  const std::size_t row = static_cast<std::size_t>(w) * channels;
  const std::size_t n = row * h;
  if (data.size() < start + n * 4) throw FormatError(what + ": truncated raster");

  FloatImage img{static_cast<int>(h), static_cast<int>(w), channels, std::vector<float>(n)};
  const std::uint8_t* p = data.data() + start;
  for (long y = h - 1; y >= 0; --y) {
    for (std::size_t i = 0; i < row; ++i, p += 4) {
      std::uint32_t u = little ? (std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
                                  std::uint32_t{p[3]} << 24)
                               : (std::uint32_t{p[3]} | std::uint32_t{p[2]} << 8 | std::uint32_t{p[1]} << 16 |
                                  std::uint32_t{p[0]} << 24);
      img.data[static_cast<std::size_t>(y) * row + i] = std::bit_cast<float>(u);
    }
  }
  return img;
}

RgbImage to_rgb_image(const Tensor& t) {
  if (t.channels() != 3) throw ShapeError("to_rgb_image: tensor must have 3 channels");
  RgbImage img{t.height(), t.width(), std::vector<std::uint8_t>(t.shape().plane() * 3)};
  for (int y = 0; y < t.height(); ++y) {
    for (int x = 0; x < t.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        const double v = std::clamp(std::round(t.at(c, y, x) * 255.0), 0.0, 255.0);
        img.data[(static_cast<std::size_t>(y) * t.width() + x) * 3 + c] = static_cast<std::uint8_t>(v);
      }
    }
  }
  return img;
}

Tensor from_rgb_image(const RgbImage& img) {
  Tensor t(3, img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        t.at(c, y, x) = img.data[(static_cast<std::size_t>(y) * img.width + x) * 3 + c] / 255.0;
      }
    }
  }
  return t;
}

FloatImage to_float_image(const Tensor& t) {
  if (t.channels() != 1 && t.channels() != 3) throw ShapeError("to_float_image: 1 or 3 channels only");
  FloatImage img{t.height(), t.width(), t.channels(), std::vector<float>(t.size())};
  for (int y = 0; y < t.height(); ++y) {
    for (int x = 0; x < t.width(); ++x) {
      for (int c = 0; c < t.channels(); ++c) {
        img.data[(static_cast<std::size_t>(y) * t.width() + x) * t.channels() + c] = static_cast<float>(t.at(c, y, x));
      }
    }
  }
  return img;
}

Tensor from_float_image(const FloatImage& img) {
  Tensor t(img.channels, img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        t.at(c, y, x) = img.data[(static_cast<std::size_t>(y) * img.width + x) * img.channels + c];
      }
    }
  }
  return t;
}

}  // namespace sphereconv
