#include "sphereconv/loss.hpp"

#include <cmath>
#include <vector>

#include "sphereconv/error.hpp"

namespace sphereconv {

LossResult berhu_loss(const Tensor& pred, const Tensor& gt, const Tensor& mask) {
  require_same_shape(pred, gt, "berhu pred/gt");
  require_same_shape(pred, mask, "berhu pred/mask");

  std::size_t n = 0;
  std::size_t argmax = 0;
  double max_abs = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (mask[i] == 0.0) continue;
    ++n;
    const double a = std::abs(pred[i] - gt[i]);
    if (a > max_abs) {
      max_abs = a;
      argmax = i;
    }
  }
  if (n == 0) throw InvalidArgument("berhu: empty mask");

  LossResult r{0.0, Tensor(pred.shape())};
  if (max_abs == 0.0) return r;

  const double c = 0.2 * max_abs;
  const double inv_n = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  double dc = 0.0;  // d(sum) / dc
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (mask[i] == 0.0) continue;
    const double e = pred[i] - gt[i];
    const double a = std::abs(e);
    if (a <= c) {
      sum += a;
      r.grad[i] = (e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0)) * inv_n;
    } else {
      sum += (e * e + c * c) / (2.0 * c);
      r.grad[i] = e / c * inv_n;
      dc += 0.5 - (e * e) / (2.0 * c * c);
    }
  }
  const double e_max = pred[argmax] - gt[argmax];
  r.grad[argmax] += dc * inv_n * 0.2 * (e_max > 0.0 ? 1.0 : -1.0);
  r.value = sum * inv_n;
  return r;
}

LossResult mse_loss(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mse");
  if (a.size() == 0) throw InvalidArgument("mse: empty tensors");
  LossResult r{0.0, Tensor(a.shape())};
  const double inv_n = 1.0 / static_cast<double>(a.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
    r.grad[i] = 2.0 * d * inv_n;
  }
  r.value = sum * inv_n;
  return r;
}

}  // namespace sphereconv
