#pragma once

#include <memory>
#include <random>
#include <string>
#include <string_view>

#include "sphereconv/lut.hpp"
#include "sphereconv/tensor.hpp"

namespace sphereconv {

// (N, H, W) -> (9N, H, W): output channel k * N + c at pixel i is
// x(c, lut.tables[k][i]). Throws ShapeError when the spatial size differs
// from the LUT grid.
Tensor lut_gather(const Tensor& x, const KernelLut& lut);
// Adjoint of lut_gather: scatter-adds (9N, H, W) back onto (N, H, W).
Tensor lut_scatter_add(const Tensor& g, const KernelLut& lut);

// Separable spherical convolution: LUT gather, a per-channel nine-tap
// combination (group convolution with kernel size 1, one group per input
// channel), then a 1x1 pointwise convolution N -> N1.
class SphericalConv {
 public:
  SphericalConv(const std::string& name, std::shared_ptr<const KernelLut> lut, int in_channels,
                int out_channels);

  // Group weights 1/9 +- 0.01 (near mean pooling), He-uniform pointwise
  // weights, zero biases.
  void init(std::mt19937_64& rng);

  Tensor forward(const Tensor& x);
  // Throws InvalidArgument if forward has not run.
  Tensor backward(const Tensor& dy);

  Parameter& group_weights() { return group_w_; }
  Parameter& group_bias() { return group_b_; }
  Parameter& pointwise_weights() { return point_w_; }
  Parameter& pointwise_bias() { return point_b_; }
  ParameterList parameters() { return {&group_w_, &group_b_, &point_w_, &point_b_}; }

  const KernelLut& lut() const { return *lut_; }
  int in_channels() const { return in_; }
  int out_channels() const { return out_; }

 private:
  std::shared_ptr<const KernelLut> lut_;
  int in_, out_;
  Parameter group_w_;  // N x 9
  Parameter group_b_;  // N
  Parameter point_w_;  // N1 x N
  Parameter point_b_;  // N1
  Tensor gathered_;    // cached 9N x H x W
  Tensor mixed_;       // cached N x H x W after the group stage
};

// Fixed weight presets used by the CLI. All need in == out; the pointwise
// stage is set to the identity and all biases to zero.
//   average          every tap 1/9
//   center-identity  centre tap 1, ring 0
//   ring-laplacian   centre 1, each ring tap -1/8
void apply_preset(SphericalConv& layer, std::string_view preset);

}  // namespace sphereconv
