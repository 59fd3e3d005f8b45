#include "sphereconv/adam.hpp"

#include <cmath>

namespace sphereconv {

void Adam::step(const ParameterList& params) {
  ++t_;
  const double bc1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
  for (Parameter* p : params) {
    if (!p->trainable) continue;
    auto& st = state_[p->name];
    const std::size_t n = p->value.size();
    if (st.m.size() != n) {
      st.m.assign(n, 0.0);
      st.v.assign(n, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double g = p->grad[i];
      st.m[i] = opts_.beta1 * st.m[i] + (1.0 - opts_.beta1) * g;
      st.v[i] = opts_.beta2 * st.v[i] + (1.0 - opts_.beta2) * g * g;
      const double mhat = st.m[i] / bc1;
      const double vhat = st.v[i] / bc2;
      p->value[i] -= opts_.lr * mhat / (std::sqrt(vhat) + opts_.eps);
    }
  }
}

void zero_grad(const ParameterList& params) {
  for (Parameter* p : params) p->zero_grad();
}

}  // namespace sphereconv
