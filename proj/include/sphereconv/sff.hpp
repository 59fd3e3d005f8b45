#pragma once

#include <memory>
#include <random>
#include <string>
#include <utility>

#include "sphereconv/ops.hpp"
#include "sphereconv/tensor.hpp"

namespace sphereconv {

// Rows [begin, end) of the central latitude band.
struct RowBand {
  int begin = 0;
  int end = 0;
};

// begin = floor(H * fraction), end = H - begin. fraction = 1/3 splits the
// map into three near-equal parts.
RowBand middle_band(int height, double fraction = 1.0 / 3.0);

// Joins the planar (ERP) branch with the spherical branch at one scale.
class FusionBlock {
 public:
  virtual ~FusionBlock() = default;
  virtual void init(std::mt19937_64& rng) = 0;
  virtual Tensor forward(const Tensor& f_erp, const Tensor& f_sph) = 0;
  // Returns (dL/df_erp, dL/df_sph).
  virtual std::pair<Tensor, Tensor> backward(const Tensor& dy) = 0;
  virtual ParameterList parameters() = 0;
};

// Segmentation feature fusion:
//   f   = w0 * f_erp + w1 * f_sph
//   f'  = f, with the middle band rows taken from f_erp
//   out = relu(conv1x1(concat(f', f_erp)))      (2C -> C)
class SffFusion final : public FusionBlock {
 public:
  SffFusion(const std::string& name, int channels, double band_fraction = 1.0 / 3.0);

  void init(std::mt19937_64& rng) override;
  Tensor forward(const Tensor& f_erp, const Tensor& f_sph) override;
  std::pair<Tensor, Tensor> backward(const Tensor& dy) override;
  ParameterList parameters() override;

  Parameter& w0() { return w0_; }
  Parameter& w1() { return w1_; }
  Conv2d& conv() { return conv_; }
  // f' from the last forward.
  const Tensor& blended() const { return blended_; }

 private:
  int channels_;
  double band_fraction_;
  Parameter w0_, w1_;
  Conv2d conv_;
  Relu act_;
  Tensor f_erp_, f_sph_, blended_;
  RowBand band_;
};

// Plain concatenation fusion, relu(conv1x1(concat(f_erp, f_sph))). Used as the
// no-SFF ablation.
class ConcatFusion final : public FusionBlock {
 public:
  ConcatFusion(const std::string& name, int channels);

  void init(std::mt19937_64& rng) override;
  Tensor forward(const Tensor& f_erp, const Tensor& f_sph) override;
  std::pair<Tensor, Tensor> backward(const Tensor& dy) override;
  ParameterList parameters() override { return conv_.parameters(); }

 private:
  int channels_;
  Conv2d conv_;
  Relu act_;
};

}  // namespace sphereconv
