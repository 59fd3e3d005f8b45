#pragma once

#include <map>
#include <string>
#include <vector>

#include "sphereconv/tensor.hpp"

namespace sphereconv {

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam. Moment buffers are keyed by parameter name, so the
// same optimizer must always see the same parameter set.
class Adam {
 public:
  explicit Adam(AdamOptions opts = {}) : opts_(opts) {}

  // Updates every trainable parameter from its accumulated grad. Does not
  // clear gradients.
  void step(const ParameterList& params);

  long steps() const { return t_; }
  void set_lr(double lr) { opts_.lr = lr; }
  double lr() const { return opts_.lr; }

 private:
  struct Moments {
    std::vector<double> m, v;
  };
  AdamOptions opts_;
  long t_ = 0;
  std::map<std::string, Moments> state_;
};

void zero_grad(const ParameterList& params);

}  // namespace sphereconv
