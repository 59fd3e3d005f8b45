#include "sphereconv/sff.hpp"

#include <cmath>

#include "sphereconv/error.hpp"

namespace sphereconv {

RowBand middle_band(int height, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 0.5)) throw InvalidArgument("band fraction must be in [0, 0.5]");
  // The epsilon keeps H * (1/3) from flooring one row short when 3 | H.
  const int begin = static_cast<int>(std::floor(height * fraction + 1e-9));
  return {begin, height - begin};
}

SffFusion::SffFusion(const std::string& name, int channels, double band_fraction)
    : channels_(channels),
      band_fraction_(band_fraction),
      w0_(name + ".w0", Shape{1, 1, 1}),
      w1_(name + ".w1", Shape{1, 1, 1}),
      conv_(name + ".fuse", 2 * channels, channels, 1) {
  middle_band(2, band_fraction);
}

void SffFusion::init(std::mt19937_64& rng) {
  w0_.value[0] = 0.5;
  w1_.value[0] = 0.5;
  conv_.init(rng);
}

Tensor SffFusion::forward(const Tensor& f_erp, const Tensor& f_sph) {
  require_same_shape(f_erp, f_sph, "sff");
  if (f_erp.channels() != channels_) throw ShapeError("sff: wrong channel count");
  f_erp_ = f_erp;
  f_sph_ = f_sph;
  band_ = middle_band(f_erp.height(), band_fraction_);

  const double w0 = w0_.value[0], w1 = w1_.value[0];
  blended_ = Tensor(f_erp.shape());
  for (int c = 0; c < f_erp.channels(); ++c) {
    for (int y = 0; y < f_erp.height(); ++y) {
      const bool keep_erp = y >= band_.begin && y < band_.end;
      for (int x = 0; x < f_erp.width(); ++x) {
        blended_.at(c, y, x) = keep_erp ? f_erp.at(c, y, x) : w0 * f_erp.at(c, y, x) + w1 * f_sph.at(c, y, x);
      }
    }
  }
  return act_.forward(conv_.forward(concat_channels(blended_, f_erp)));
}

std::pair<Tensor, Tensor> SffFusion::backward(const Tensor& dy) {
  auto [dblend, derp] = split_channels(conv_.backward(act_.backward(dy)), channels_);
  Tensor dsph(f_sph_.shape());
  const double w0 = w0_.value[0], w1 = w1_.value[0];
  double dw0 = 0.0, dw1 = 0.0;
  for (int c = 0; c < dblend.channels(); ++c) {
    for (int y = 0; y < dblend.height(); ++y) {
      const bool keep_erp = y >= band_.begin && y < band_.end;
      for (int x = 0; x < dblend.width(); ++x) {
        const double g = dblend.at(c, y, x);
        if (keep_erp) {
          derp.at(c, y, x) += g;
        } else {
          derp.at(c, y, x) += w0 * g;
          dsph.at(c, y, x) = w1 * g;
          dw0 += g * f_erp_.at(c, y, x);
          dw1 += g * f_sph_.at(c, y, x);
        }
      }
    }
  }
  w0_.grad[0] += dw0;
  w1_.grad[0] += dw1;
  return {std::move(derp), std::move(dsph)};
}

ParameterList SffFusion::parameters() {
  ParameterList p{&w0_, &w1_};
  for (Parameter* q : conv_.parameters()) p.push_back(q);
  return p;
}

ConcatFusion::ConcatFusion(const std::string& name, int channels)
    : channels_(channels), conv_(name + ".fuse", 2 * channels, channels, 1) {}

void ConcatFusion::init(std::mt19937_64& rng) { conv_.init(rng); }

Tensor ConcatFusion::forward(const Tensor& f_erp, const Tensor& f_sph) {
  require_same_shape(f_erp, f_sph, "concat fusion");
  return act_.forward(conv_.forward(concat_channels(f_erp, f_sph)));
}

std::pair<Tensor, Tensor> ConcatFusion::backward(const Tensor& dy) {
  return split_channels(conv_.backward(act_.backward(dy)), channels_);
}

}  // namespace sphereconv
