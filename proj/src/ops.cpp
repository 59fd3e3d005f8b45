#include "sphereconv/ops.hpp"

#include <algorithm>
#include <cmath>

#include "sphereconv/error.hpp"

namespace sphereconv {

namespace {

int wrap(int x, int w) { return ((x % w) + w) % w; }

}  // namespace

Conv2d::Conv2d(const std::string& name, int in_channels, int out_channels, int kernel, int groups)
    : in_(in_channels), out_(out_channels), k_(kernel), groups_(groups) {
  if (kernel != 1 && kernel != 3) throw InvalidArgument(name + ": kernel must be 1 or 3");
  if (groups < 1 || in_channels % groups != 0 || out_channels % groups != 0) {
    throw InvalidArgument(name + ": channels not divisible by groups");
  }
  weight_ = Parameter(name + ".weight", Shape{out_, in_ / groups_, k_ * k_});
  bias_ = Parameter(name + ".bias", Shape{out_, 1, 1});
}

void Conv2d::init(std::mt19937_64& rng) {
  const double fan_in = static_cast<double>(in_ / groups_) * k_ * k_;
  const double bound = std::sqrt(6.0 / fan_in);
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& w : weight_.value.values()) w = dist(rng);
  bias_.value.fill(0.0);
}

Tensor Conv2d::forward(const Tensor& x) {
  if (x.channels() != in_) {
    throw ShapeError(weight_.name + ": expected " + std::to_string(in_) + " input channels, got " +
                     std::to_string(x.channels()));
  }
  in_shape_ = x.shape();
  const int h = x.height(), w = x.width();
  const int p = k_ / 2;
  const int hp = h + 2 * p, wp = w + 2 * p;

  padded_ = Tensor(in_, hp, wp);
  for (int c = 0; c < in_; ++c) {
    for (int yp = 0; yp < hp; ++yp) {
      const int y = std::clamp(yp - p, 0, h - 1);
      for (int xp = 0; xp < wp; ++xp) padded_.at(c, yp, xp) = x.at(c, y, wrap(xp - p, w));
    }
  }

  Tensor out(out_, h, w);
  const int in_per_group = in_ / groups_;
  const int out_per_group = out_ / groups_;
  const int taps = k_ * k_;
  for (int o = 0; o < out_; ++o) {
    const int i0 = (o / out_per_group) * in_per_group;
    double* dst_plane = out.channel(o).data();
    std::fill_n(dst_plane, out.shape().plane(), bias_.value[o]);
    for (int ii = 0; ii < in_per_group; ++ii) {
      const double* wt = weight_.value.data() + (static_cast<std::size_t>(o) * in_per_group + ii) * taps;
      const double* src_plane = padded_.channel(i0 + ii).data();
      for (int ky = 0; ky < k_; ++ky) {
        for (int kx = 0; kx < k_; ++kx) {
          const double wv = wt[ky * k_ + kx];
          for (int y = 0; y < h; ++y) {
            const double* src = src_plane + static_cast<std::size_t>(y + ky) * wp + kx;
            double* dst = dst_plane + static_cast<std::size_t>(y) * w;
            for (int xx = 0; xx < w; ++xx) dst[xx] += wv * src[xx];
          }
        }
      }
    }
  }
  return out;
}

Tensor Conv2d::backward(const Tensor& dy) {
  if (padded_.size() == 0) throw InvalidArgument(weight_.name + ": backward before forward");
  const int h = in_shape_.h, w = in_shape_.w;
  if (dy.shape() != Shape{out_, h, w}) throw ShapeError(weight_.name + ": bad output gradient");
  const int p = k_ / 2;
  const int hp = h + 2 * p, wp = w + 2 * p;
  const int in_per_group = in_ / groups_;
  const int out_per_group = out_ / groups_;
  const int taps = k_ * k_;

  Tensor dpad(in_, hp, wp);
  std::vector<double> acc(static_cast<std::size_t>(w));
  for (int o = 0; o < out_; ++o) {
    const int i0 = (o / out_per_group) * in_per_group;
    const double* dy_plane = dy.channel(o).data();
    double db = 0.0;
    for (double v : dy.channel(o)) db += v;
    bias_.grad[o] += db;
    for (int ii = 0; ii < in_per_group; ++ii) {
      const std::size_t woff = (static_cast<std::size_t>(o) * in_per_group + ii) * taps;
      const double* src_plane = padded_.channel(i0 + ii).data();
      double* dpad_plane = dpad.channel(i0 + ii).data();
      for (int ky = 0; ky < k_; ++ky) {
        for (int kx = 0; kx < k_; ++kx) {
          const double wv = weight_.value[woff + ky * k_ + kx];
          std::fill(acc.begin(), acc.end(), 0.0);
          for (int y = 0; y < h; ++y) {
            const double* src = src_plane + static_cast<std::size_t>(y + ky) * wp + kx;
            double* dsrc = dpad_plane + static_cast<std::size_t>(y + ky) * wp + kx;
            const double* d = dy_plane + static_cast<std::size_t>(y) * w;
            for (int xx = 0; xx < w; ++xx) {
              acc[xx] += d[xx] * src[xx];
              dsrc[xx] += wv * d[xx];
            }
          }
          double s = 0.0;
          for (double v : acc) s += v;
          weight_.grad[woff + ky * k_ + kx] += s;
        }
      }
    }
  }

  Tensor dx(in_shape_);
  for (int c = 0; c < in_; ++c) {
    for (int yp = 0; yp < hp; ++yp) {
      const int y = std::clamp(yp - p, 0, h - 1);
      for (int xp = 0; xp < wp; ++xp) dx.at(c, y, wrap(xp - p, w)) += dpad.at(c, yp, xp);
    }
  }
  return dx;
}

Tensor Relu::forward(const Tensor& x) {
  out_ = Tensor(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out_[i] = x[i] > 0.0 ? x[i] : 0.0;
  return out_;
}

Tensor Relu::backward(const Tensor& dy) const {
  require_same_shape(dy, out_, "relu backward");
  Tensor dx(dy.shape());
  for (std::size_t i = 0; i < dy.size(); ++i) dx[i] = out_[i] > 0.0 ? dy[i] : 0.0;
  return dx;
}

Tensor AvgPool2::forward(const Tensor& x) {
  if (x.height() % 2 != 0 || x.width() % 2 != 0) throw ShapeError("avgpool: odd spatial size");
  in_shape_ = x.shape();
  Tensor out(x.channels(), x.height() / 2, x.width() / 2);
  for (int c = 0; c < out.channels(); ++c) {
    for (int y = 0; y < out.height(); ++y) {
      for (int xx = 0; xx < out.width(); ++xx) {
        out.at(c, y, xx) = 0.25 * (x.at(c, 2 * y, 2 * xx) + x.at(c, 2 * y, 2 * xx + 1) +
                                   x.at(c, 2 * y + 1, 2 * xx) + x.at(c, 2 * y + 1, 2 * xx + 1));
      }
    }
  }
  return out;
}

Tensor AvgPool2::backward(const Tensor& dy) const {
  Tensor dx(in_shape_);
  if (dy.shape() != Shape{in_shape_.c, in_shape_.h / 2, in_shape_.w / 2}) {
    throw ShapeError("avgpool backward: bad gradient shape");
  }
  for (int c = 0; c < dx.channels(); ++c) {
    for (int y = 0; y < dx.height(); ++y) {
      for (int xx = 0; xx < dx.width(); ++xx) dx.at(c, y, xx) = 0.25 * dy.at(c, y / 2, xx / 2);
    }
  }
  return dx;
}

namespace {

// Output index 2i draws from (i - 1, i) with weights (1/4, 3/4); 2i + 1 from
// (i, i + 1) with (3/4, 1/4). `wrap_axis` selects periodic vs clamped edges.
struct UpTap {
  int lo, hi;
  double wlo, whi;
};

UpTap up_tap(int o, int n, bool wrap_axis) {
  const int i = o / 2;
  int lo, hi;
  double wlo, whi;
  if (o % 2 == 0) {
    lo = i - 1, hi = i, wlo = 0.25, whi = 0.75;
  } else {
    lo = i, hi = i + 1, wlo = 0.75, whi = 0.25;
  }
  if (wrap_axis) {
    lo = wrap(lo, n), hi = wrap(hi, n);
  } else {
    lo = std::clamp(lo, 0, n - 1), hi = std::clamp(hi, 0, n - 1);
  }
  return {lo, hi, wlo, whi};
}

}  // namespace

Tensor BilinearUp2::forward(const Tensor& x) {
  in_shape_ = x.shape();
  const int c = x.channels(), h = x.height(), w = x.width();
  Tensor cols(c, h, 2 * w);
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < h; ++y) {
      for (int ox = 0; ox < 2 * w; ++ox) {
        const UpTap t = up_tap(ox, w, true);
        cols.at(ch, y, ox) = t.wlo * x.at(ch, y, t.lo) + t.whi * x.at(ch, y, t.hi);
      }
    }
  }
  Tensor out(c, 2 * h, 2 * w);
  for (int ch = 0; ch < c; ++ch) {
    for (int oy = 0; oy < 2 * h; ++oy) {
      const UpTap t = up_tap(oy, h, false);
      for (int ox = 0; ox < 2 * w; ++ox) {
        out.at(ch, oy, ox) = t.wlo * cols.at(ch, t.lo, ox) + t.whi * cols.at(ch, t.hi, ox);
      }
    }
  }
  return out;
}

Tensor BilinearUp2::backward(const Tensor& dy) const {
  const int c = in_shape_.c, h = in_shape_.h, w = in_shape_.w;
  if (dy.shape() != Shape{c, 2 * h, 2 * w}) throw ShapeError("bilinear backward: bad gradient shape");
  Tensor dcols(c, h, 2 * w);
  for (int ch = 0; ch < c; ++ch) {
    for (int oy = 0; oy < 2 * h; ++oy) {
      const UpTap t = up_tap(oy, h, false);
      for (int ox = 0; ox < 2 * w; ++ox) {
        dcols.at(ch, t.lo, ox) += t.wlo * dy.at(ch, oy, ox);
        dcols.at(ch, t.hi, ox) += t.whi * dy.at(ch, oy, ox);
      }
    }
  }
  Tensor dx(in_shape_);
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < h; ++y) {
      for (int ox = 0; ox < 2 * w; ++ox) {
        const UpTap t = up_tap(ox, w, true);
        dx.at(ch, y, t.lo) += t.wlo * dcols.at(ch, y, ox);
        dx.at(ch, y, t.hi) += t.whi * dcols.at(ch, y, ox);
      }
    }
  }
  return dx;
}

Tensor SubpixelUp2::forward(const Tensor& x) {
  if (x.channels() % 4 != 0) throw ShapeError("subpixel: channels must be divisible by 4");
  in_shape_ = x.shape();
  const int c = x.channels() / 4, h = x.height(), w = x.width();
  Tensor out(c, 2 * h, 2 * w);
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int y = 0; y < h; ++y) {
          for (int xx = 0; xx < w; ++xx) out.at(ch, 2 * y + i, 2 * xx + j) = x.at(4 * ch + 2 * i + j, y, xx);
        }
      }
    }
  }
  return out;
}

Tensor SubpixelUp2::backward(const Tensor& dy) const {
  const int c = in_shape_.c / 4, h = in_shape_.h, w = in_shape_.w;
  if (dy.shape() != Shape{c, 2 * h, 2 * w}) throw ShapeError("subpixel backward: bad gradient shape");
  Tensor dx(in_shape_);
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int y = 0; y < h; ++y) {
          for (int xx = 0; xx < w; ++xx) dx.at(4 * ch + 2 * i + j, y, xx) = dy.at(ch, 2 * y + i, 2 * xx + j);
        }
      }
    }
  }
  return dx;
}

Tensor relu(const Tensor& x) { return Relu().forward(x); }
Tensor bilinear_upsample_x2(const Tensor& x) { return BilinearUp2().forward(x); }
Tensor subpixel_upsample_x2(const Tensor& x) { return SubpixelUp2().forward(x); }

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw ShapeError("concat: spatial size " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  }
  Tensor out(a.channels() + b.channels(), a.height(), a.width());
  std::copy(a.values().begin(), a.values().end(), out.values().begin());
  std::copy(b.values().begin(), b.values().end(), out.values().begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

std::pair<Tensor, Tensor> split_channels(const Tensor& t, int first_channels) {
  if (first_channels < 0 || first_channels > t.channels()) throw ShapeError("split: bad channel count");
  Tensor a(first_channels, t.height(), t.width());
  Tensor b(t.channels() - first_channels, t.height(), t.width());
  std::copy_n(t.values().begin(), a.size(), a.values().begin());
  std::copy_n(t.values().begin() + static_cast<std::ptrdiff_t>(a.size()), b.size(), b.values().begin());
  return {std::move(a), std::move(b)};
}

}  // namespace sphereconv
