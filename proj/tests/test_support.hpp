#pragma once

// Finite-difference oracle and random tensor helpers shared by the unit and
// acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sphereconv/tensor.hpp"

namespace sphereconv::testing {

inline Tensor random_tensor(Shape s, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Tensor t(s);
  for (double& v : t.values()) v = d(rng);
  return t;
}

inline double dot(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double rel_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

// Central difference of `loss` with respect to one scalar.
inline double central_difference(const std::function<double()>& loss, double& x, double eps = 1e-5) {
  const double orig = x;
  x = orig + eps;
  const double up = loss();
  x = orig - eps;
  const double down = loss();
  x = orig;
  return (up - down) / (2.0 * eps);
}

// Worst relative error between `analytic` and central differences of `loss`
// over `samples` randomly chosen coordinates of `wrt` (every coordinate when
// the tensor is small enough).
inline double check_coordinates(const std::function<double()>& loss, Tensor& wrt, const Tensor& analytic,
                                std::mt19937_64& rng, int samples = 20, double eps = 1e-5) {
  std::vector<std::size_t> idx(wrt.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (static_cast<int>(idx.size()) > samples) {
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(static_cast<std::size_t>(samples));
  }
  double worst = 0.0;
  for (std::size_t i : idx) {
    const double numeric = central_difference(loss, wrt[i], eps);
    worst = std::max(worst, rel_error(analytic[i], numeric));
  }
  return worst;
}

}  // namespace sphereconv::testing
