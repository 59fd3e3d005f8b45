#pragma once

#include "sphereconv/tensor.hpp"

namespace sphereconv {

struct LossResult {
  double value = 0.0;
  Tensor grad;  // dLoss / dpred, same shape as pred
};

// Reverse Huber over the pixels where mask != 0. With e = pred - gt and
// c = 0.2 * max|e|, each pixel contributes |e| when |e| <= c and
// (e^2 + c^2) / (2c) otherwise; the result is the mean. The gradient is exact,
// including the dependence of c on the largest residual. Throws
// InvalidArgument for an empty mask, ShapeError on mismatched shapes.
LossResult berhu_loss(const Tensor& pred, const Tensor& gt, const Tensor& mask);

// mean((a - b)^2) and its gradient with respect to a.
LossResult mse_loss(const Tensor& a, const Tensor& b);

}  // namespace sphereconv
