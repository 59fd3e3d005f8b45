#pragma once

// Differentiable building blocks. Every layer caches what its backward pass
// needs during forward; backward(dy) returns dL/dx and accumulates parameter
// gradients. Spatial padding wraps horizontally (longitude is periodic) and
// replicates edge rows vertically.

#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "sphereconv/tensor.hpp"

namespace sphereconv {

class Conv2d {
 public:
  // kernel must be 1 or 3; in and out must be divisible by groups.
  Conv2d(const std::string& name, int in_channels, int out_channels, int kernel, int groups = 1);

  // He-uniform weights, zero bias.
  void init(std::mt19937_64& rng);

  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy);

  Parameter& weight() { return weight_; }
  Parameter& bias() { return bias_; }
  ParameterList parameters() { return {&weight_, &bias_}; }

  int in_channels() const { return in_; }
  int out_channels() const { return out_; }
  int kernel() const { return k_; }
  int groups() const { return groups_; }

 private:
  int in_, out_, k_, groups_;
  Parameter weight_;  // out x (in / groups) x (k * k)
  Parameter bias_;    // out
  Tensor padded_;
  Shape in_shape_;
};

class Relu {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy) const;

 private:
  Tensor out_;
};

// 2x2 mean pooling; H and W must be even.
class AvgPool2 {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy) const;

 private:
  Shape in_shape_;
};

// Bilinear x2 upsampling with half-pixel centres.
class BilinearUp2 {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy) const;

 private:
  Shape in_shape_;
};

// Channel-to-space rearrangement with factor 2: (4C, H, W) -> (C, 2H, 2W),
// out(c, 2y + i, 2x + j) = in(4c + 2i + j, y, x).
class SubpixelUp2 {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy) const;

 private:
  Shape in_shape_;
};

Tensor relu(const Tensor& x);
Tensor bilinear_upsample_x2(const Tensor& x);
Tensor subpixel_upsample_x2(const Tensor& x);

Tensor concat_channels(const Tensor& a, const Tensor& b);
// Inverse of concat_channels for gradients: first `first_channels` go to .first.
std::pair<Tensor, Tensor> split_channels(const Tensor& t, int first_channels);

}  // namespace sphereconv
