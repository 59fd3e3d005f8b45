#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sphereconv {

struct Shape {
  int c = 0;
  int h = 1;
  int w = 1;

  std::size_t numel() const {
    return static_cast<std::size_t>(c) * static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
  }
  std::size_t plane() const { return static_cast<std::size_t>(h) * static_cast<std::size_t>(w); }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

// Dense C x H x W array of doubles (a flat vector is C x 1 x 1).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape s, double fill = 0.0) : shape_(s), data_(s.numel(), fill) {}
  Tensor(int c, int h, int w, double fill = 0.0) : Tensor(Shape{c, h, w}, fill) {}

  const Shape& shape() const { return shape_; }
  int channels() const { return shape_.c; }
  int height() const { return shape_.h; }
  int width() const { return shape_.w; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  double at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<double> channel(int c) {
    return std::span<double>(data_).subspan(static_cast<std::size_t>(c) * shape_.plane(),
                                            shape_.plane());
  }
  std::span<const double> channel(int c) const {
    return std::span<const double>(data_).subspan(static_cast<std::size_t>(c) * shape_.plane(),
                                                  shape_.plane());
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void fill(double v);
  Tensor& operator+=(const Tensor& o);
  bool all_finite() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * shape_.h + y) * shape_.w + x;
  }
  Shape shape_;
  std::vector<double> data_;
};

// Throws ShapeError naming `what` when shapes differ.
void require_same_shape(const Tensor& a, const Tensor& b, const char* what);

// Tensor rolled along the width axis: out(c, y, (x + k) mod W) = in(c, y, x).
Tensor roll_columns(const Tensor& t, int k);

// A trainable tensor with its gradient accumulator (always same shape).
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  bool trainable = true;

  Parameter() = default;
  Parameter(std::string n, Shape s) : name(std::move(n)), value(s), grad(s) {}

  void zero_grad() { grad.fill(0.0); }
};

using ParameterList = std::vector<Parameter*>;

}  // namespace sphereconv
