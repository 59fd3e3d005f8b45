#include "sphereconv/sconv.hpp"

#include <cmath>

#include "sphereconv/error.hpp"

namespace sphereconv {

namespace {

void check_grid(const Tensor& x, const KernelLut& lut, const char* what) {
  if (x.height() != lut.grid.height() || x.width() != lut.grid.width()) {
    throw ShapeError(std::string(what) + ": feature map " + std::to_string(x.height()) + "x" +
                     std::to_string(x.width()) + " does not match LUT grid " +
                     std::to_string(lut.grid.height()) + "x" + std::to_string(lut.grid.width()));
  }
}

}  // namespace

Tensor lut_gather(const Tensor& x, const KernelLut& lut) {
  check_grid(x, lut, "lut_gather");
  const int n = x.channels();
  Tensor out(kKernelPoints * n, x.height(), x.width());
  for (int k = 0; k < kKernelPoints; ++k) {
    const auto table = lut.table(k);
    for (int c = 0; c < n; ++c) {
      const auto src = x.channel(c);
      auto dst = out.channel(k * n + c);
      for (std::size_t i = 0; i < table.size(); ++i) dst[i] = src[table[i]];
    }
  }
  return out;
}

Tensor lut_scatter_add(const Tensor& g, const KernelLut& lut) {
  check_grid(g, lut, "lut_scatter_add");
  if (g.channels() % kKernelPoints != 0) throw ShapeError("lut_scatter_add: channels not a multiple of 9");
  const int n = g.channels() / kKernelPoints;
  Tensor out(n, g.height(), g.width());
  for (int k = 0; k < kKernelPoints; ++k) {
    const auto table = lut.table(k);
    for (int c = 0; c < n; ++c) {
      const auto src = g.channel(k * n + c);
      auto dst = out.channel(c);
      for (std::size_t i = 0; i < table.size(); ++i) dst[table[i]] += src[i];
    }
  }
  return out;
}

SphericalConv::SphericalConv(const std::string& name, std::shared_ptr<const KernelLut> lut,
                             int in_channels, int out_channels)
    : lut_(std::move(lut)),
      in_(in_channels),
      out_(out_channels),
      group_w_(name + ".group_weight", Shape{in_channels, kKernelPoints, 1}),
      group_b_(name + ".group_bias", Shape{in_channels, 1, 1}),
      point_w_(name + ".pointwise_weight", Shape{out_channels, in_channels, 1}),
      point_b_(name + ".pointwise_bias", Shape{out_channels, 1, 1}) {
  if (!lut_) throw InvalidArgument(name + ": null LUT");
  if (in_channels < 1 || out_channels < 1) throw InvalidArgument(name + ": empty channel count");
}

void SphericalConv::init(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> jitter(-0.01, 0.01);
  for (double& w : group_w_.value.values()) w = 1.0 / kKernelPoints + jitter(rng);
  const double bound = std::sqrt(6.0 / in_);
  std::uniform_real_distribution<double> pw(-bound, bound);
  for (double& w : point_w_.value.values()) w = pw(rng);
  group_b_.value.fill(0.0);
  point_b_.value.fill(0.0);
}

Tensor SphericalConv::forward(const Tensor& x) {
  if (x.channels() != in_) throw ShapeError(group_w_.name + ": wrong input channel count");
  gathered_ = lut_gather(x, *lut_);
  const std::size_t plane = x.shape().plane();

  mixed_ = Tensor(in_, x.height(), x.width());
  for (int c = 0; c < in_; ++c) {
    auto dst = mixed_.channel(c);
    std::fill(dst.begin(), dst.end(), group_b_.value[c]);
    for (int k = 0; k < kKernelPoints; ++k) {
      const double w = group_w_.value[static_cast<std::size_t>(c) * kKernelPoints + k];
      const auto src = gathered_.channel(k * in_ + c);
      for (std::size_t i = 0; i < plane; ++i) dst[i] += w * src[i];
    }
  }

  Tensor out(out_, x.height(), x.width());
  for (int o = 0; o < out_; ++o) {
    auto dst = out.channel(o);
    std::fill(dst.begin(), dst.end(), point_b_.value[o]);
    for (int c = 0; c < in_; ++c) {
      const double w = point_w_.value[static_cast<std::size_t>(o) * in_ + c];
      const auto src = mixed_.channel(c);
      for (std::size_t i = 0; i < plane; ++i) dst[i] += w * src[i];
    }
  }
  return out;
}

Tensor SphericalConv::backward(const Tensor& dy) {
  if (gathered_.size() == 0) throw InvalidArgument(group_w_.name + ": backward without cached forward");
  if (dy.shape() != Shape{out_, mixed_.height(), mixed_.width()}) {
    throw ShapeError(group_w_.name + ": bad output gradient shape");
  }
  const std::size_t plane = mixed_.shape().plane();

  Tensor dmixed(mixed_.shape());
  for (int o = 0; o < out_; ++o) {
    const auto d = dy.channel(o);
    double db = 0.0;
    for (double v : d) db += v;
    point_b_.grad[o] += db;
    for (int c = 0; c < in_; ++c) {
      const std::size_t wi = static_cast<std::size_t>(o) * in_ + c;
      const double w = point_w_.value[wi];
      const auto m = mixed_.channel(c);
      auto dm = dmixed.channel(c);
      double dw = 0.0;
      for (std::size_t i = 0; i < plane; ++i) {
        dw += d[i] * m[i];
        dm[i] += w * d[i];
      }
      point_w_.grad[wi] += dw;
    }
  }

  Tensor dgathered(gathered_.shape());
  for (int c = 0; c < in_; ++c) {
    const auto dm = dmixed.channel(c);
    double db = 0.0;
    for (double v : dm) db += v;
    group_b_.grad[c] += db;
    for (int k = 0; k < kKernelPoints; ++k) {
      const std::size_t wi = static_cast<std::size_t>(c) * kKernelPoints + k;
      const double w = group_w_.value[wi];
      const auto g = gathered_.channel(k * in_ + c);
      auto dg = dgathered.channel(k * in_ + c);
      double dw = 0.0;
      for (std::size_t i = 0; i < plane; ++i) {
        dw += dm[i] * g[i];
        dg[i] = w * dm[i];
      }
      group_w_.grad[wi] += dw;
    }
  }
  return lut_scatter_add(dgathered, *lut_);
}

void apply_preset(SphericalConv& layer, std::string_view preset) {
  if (layer.in_channels() != layer.out_channels()) {
    throw InvalidArgument("weight presets need equal input and output channels");
  }
  double centre = 0.0, ring = 0.0;
  if (preset == "average") {
    centre = ring = 1.0 / kKernelPoints;
  } else if (preset == "center-identity") {
    centre = 1.0;
  } else if (preset == "ring-laplacian") {
    centre = 1.0;
    ring = -1.0 / kRingPoints;
  } else {
    throw InvalidArgument("unknown weight preset '" + std::string(preset) + "'");
  }
  const int n = layer.in_channels();
  for (int c = 0; c < n; ++c) {
    for (int k = 0; k < kKernelPoints; ++k) {
      layer.group_weights().value[static_cast<std::size_t>(c) * kKernelPoints + k] = k == 0 ? centre : ring;
    }
    for (int o = 0; o < n; ++o) layer.pointwise_weights().value[static_cast<std::size_t>(o) * n + c] = o == c ? 1.0 : 0.0;
  }
  layer.group_bias().value.fill(0.0);
  layer.pointwise_bias().value.fill(0.0);
}

}  // namespace sphereconv
