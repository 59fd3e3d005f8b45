#pragma once

// Direct per-pixel spherical convolution: for each output pixel, look up the
// nine sample pixels from scratch and evaluate the full weighted sum.

#include "lut_oracle.hpp"
#include "sphereconv/sconv.hpp"

namespace sphereconv::testing {

inline Tensor naive_spherical_conv(const Tensor& x, SphericalConv& layer) {
  const int n = layer.in_channels(), n1 = layer.out_channels();
  const int h = x.height(), w = x.width();
  const auto& gw = layer.group_weights().value;
  const auto& gb = layer.group_bias().value;
  const auto& pw = layer.pointwise_weights().value;
  const auto& pb = layer.pointwise_bias().value;
  Tensor y(n1, h, w);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      std::uint32_t taps[9];
      for (int k = 0; k < 9; ++k) taps[k] = oracle_lut_entry(v, u, k, h, w);
      for (int o = 0; o < n1; ++o) {
        double acc = pb[static_cast<std::size_t>(o)];
        for (int c = 0; c < n; ++c) {
          double s = gb[static_cast<std::size_t>(c)];
          for (int k = 0; k < 9; ++k) {
            const std::uint32_t t = taps[k];
            s += gw[static_cast<std::size_t>(c * 9 + k)] * x.at(c, static_cast<int>(t) / w, static_cast<int>(t) % w);
          }
          acc += pw[static_cast<std::size_t>(o * n + c)] * s;
        }
        y.at(o, v, u) = acc;
      }
    }
  }
  return y;
}

}  // namespace sphereconv::testing
