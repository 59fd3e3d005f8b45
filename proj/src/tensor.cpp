#include "sphereconv/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "sphereconv/error.hpp"

namespace sphereconv {

std::string to_string(const Shape& s) {
  return std::to_string(s.c) + "x" + std::to_string(s.h) + "x" + std::to_string(s.w);
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Tensor& Tensor::operator+=(const Tensor& o) {
  require_same_shape(*this, o, "tensor +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(what) + ": shape " + to_string(a.shape()) + " vs " +
                     to_string(b.shape()));
  }
}

Tensor roll_columns(const Tensor& t, int k) {
  Tensor out(t.shape());
  const int w = t.width();
  const int shift = ((k % w) + w) % w;
  for (int c = 0; c < t.channels(); ++c) {
    for (int y = 0; y < t.height(); ++y) {
      for (int x = 0; x < w; ++x) out.at(c, y, (x + shift) % w) = t.at(c, y, x);
    }
  }
  return out;
}

}  // namespace sphereconv
