#include <gtest/gtest.h>

#include "sconv_oracle.hpp"
#include "sphereconv/error.hpp"
#include "sphereconv/sconv.hpp"
#include "test_support.hpp"

namespace sphereconv {
namespace {

using testing::check_coordinates;
using testing::dot;
using testing::random_tensor;

double max_abs_diff(const Tensor& a, const Tensor& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

std::shared_ptr<const KernelLut> lut_for(int h) { return std::make_shared<KernelLut>(compile_lut(ErpGrid(h, 2 * h))); }

void randomize(SphericalConv& layer, std::mt19937_64& rng) {
  for (auto* p : layer.parameters()) p->value = random_tensor(p->value.shape(), rng);
}

TEST(LutGather, CentreChannelsCopyInput) {
  std::mt19937_64 rng(1);
  const auto lut = lut_for(8);
  const Tensor x = random_tensor({3, 8, 16}, rng);
  const Tensor g = lut_gather(x, *lut);
  ASSERT_EQ(g.shape(), (Shape{27, 8, 16}));
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < x.channel(c).size(); ++i) EXPECT_EQ(g.channel(c)[i], x.channel(c)[i]);
  }
}

TEST(LutGather, ConstantInputGivesConstantOutput) {
  const auto lut = lut_for(8);
  const Tensor g = lut_gather(Tensor(2, 8, 16, 4.5), *lut);
  for (double v : g.values()) EXPECT_EQ(v, 4.5);
}

TEST(LutGather, ShapeMismatch) {
  const auto lut = lut_for(8);
  EXPECT_THROW(lut_gather(Tensor(1, 4, 8), *lut), ShapeError);
  EXPECT_THROW(lut_scatter_add(Tensor(10, 8, 16), *lut), ShapeError);
}

TEST(LutGather, ScatterIsAdjoint) {
  std::mt19937_64 rng(2);
  const auto lut = lut_for(8);
  Tensor x = random_tensor({2, 8, 16}, rng);
  const Tensor r = random_tensor({18, 8, 16}, rng);
  EXPECT_NEAR(dot(lut_gather(x, *lut), r), dot(x, lut_scatter_add(r, *lut)), 1e-10);
  const Tensor dx = lut_scatter_add(r, *lut);
  auto loss = [&] { return dot(lut_gather(x, *lut), r); };
  EXPECT_LT(check_coordinates(loss, x, dx, rng, 40), 1e-6);
}

TEST(SphericalConv, CentreIdentityReproducesInput) {
  std::mt19937_64 rng(3);
  SphericalConv layer("s", lut_for(8), 3, 3);
  apply_preset(layer, "center-identity");
  const Tensor x = random_tensor({3, 8, 16}, rng);
  EXPECT_EQ(layer.forward(x), x);
}

TEST(SphericalConv, ConstantInputClosedForm) {
  std::mt19937_64 rng(4);
  SphericalConv layer("s", lut_for(8), 2, 3);
  randomize(layer, rng);
  const double c = 0.7;
  const Tensor y = layer.forward(Tensor(2, 8, 16, c));
  for (int o = 0; o < 3; ++o) {
    double expect = layer.pointwise_bias().value[static_cast<std::size_t>(o)];
    for (int ch = 0; ch < 2; ++ch) {
      double s = layer.group_bias().value[static_cast<std::size_t>(ch)];
      for (int k = 0; k < 9; ++k) s += layer.group_weights().value[static_cast<std::size_t>(ch * 9 + k)] * c;
      expect += layer.pointwise_weights().value[static_cast<std::size_t>(o * 2 + ch)] * s;
    }
    for (double v : y.channel(o)) EXPECT_NEAR(v, expect, 1e-13);
  }
}

TEST(SphericalConv, MatchesNaiveOracle) {
  std::mt19937_64 rng(5);
  for (int h : {4, 8, 16}) {
    SphericalConv layer("s", lut_for(h), 2, 3);
    randomize(layer, rng);
    const Tensor x = random_tensor({2, h, 2 * h}, rng);
    EXPECT_LT(max_abs_diff(layer.forward(x), testing::naive_spherical_conv(x, layer)), 1e-12) << h;
  }
}

TEST(SphericalConv, Gradients) {
  std::mt19937_64 rng(6);
  SphericalConv layer("s", lut_for(8), 3, 4);
  randomize(layer, rng);
  Tensor x = random_tensor({3, 8, 16}, rng);
  const Tensor r = random_tensor({4, 8, 16}, rng);
  for (auto* p : layer.parameters()) p->zero_grad();
  layer.forward(x);
  const Tensor dx = layer.backward(r);
  auto loss = [&] { return dot(layer.forward(x), r); };
  EXPECT_LT(check_coordinates(loss, x, dx, rng, 60), 1e-6);
  for (auto* p : layer.parameters()) {
    const Tensor g = p->grad;
    EXPECT_LT(check_coordinates(loss, p->value, g, rng, 40), 1e-6) << p->name;
  }
}

TEST(SphericalConv, ZeroUpstreamGradient) {
  std::mt19937_64 rng(7);
  SphericalConv layer("s", lut_for(8), 2, 2);
  randomize(layer, rng);
  for (auto* p : layer.parameters()) p->zero_grad();
  layer.forward(random_tensor({2, 8, 16}, rng));
  const Tensor dx = layer.backward(Tensor(2, 8, 16));
  for (double v : dx.values()) EXPECT_EQ(v, 0.0);
  for (auto* p : layer.parameters())
    for (double v : p->grad.values()) EXPECT_EQ(v, 0.0);
}

TEST(SphericalConv, BackwardWithoutForwardThrows) {
  SphericalConv layer("s", lut_for(8), 2, 2);
  EXPECT_THROW(layer.backward(Tensor(2, 8, 16)), InvalidArgument);
  EXPECT_THROW(layer.forward(Tensor(3, 8, 16)), ShapeError);
  EXPECT_THROW(layer.forward(Tensor(2, 16, 32)), ShapeError);
}

TEST(SphericalConv, RollEquivariance) {
  std::mt19937_64 rng(8);
  for (int h : {8, 32}) {
    const int w = 2 * h;
    SphericalConv layer("s", lut_for(h), 2, 3);
    randomize(layer, rng);
    const Tensor x = random_tensor({2, h, w}, rng);
    const Tensor ref = layer.forward(x);
    for (int k : {1, 5, w / 2}) {
      const Tensor y = roll_columns(layer.forward(roll_columns(x, k)), -k);
      EXPECT_LT(max_abs_diff(y, ref), 1e-9) << "H=" << h << " k=" << k;
    }
  }
}

TEST(SphericalConv, FuzzGridSizes) {
  std::mt19937_64 rng(9);
  for (int h : {2, 3, 5, 7, 12}) {
    SphericalConv layer("s", lut_for(h), 1, 2);
    randomize(layer, rng);
    const Tensor x = random_tensor({1, h, 2 * h}, rng);
    const Tensor y = layer.forward(x);
    EXPECT_TRUE(y.all_finite());
    EXPECT_LT(max_abs_diff(y, testing::naive_spherical_conv(x, layer)), 1e-12);
  }
}

TEST(Presets, AverageAndLaplacian) {
  SphericalConv avg("a", lut_for(8), 2, 2);
  apply_preset(avg, "average");
  const Tensor c(2, 8, 16, 3.0);
  const Tensor ya = avg.forward(c);
  for (double v : ya.values()) EXPECT_NEAR(v, 3.0, 1e-14);
  SphericalConv lap("l", lut_for(8), 2, 2);
  apply_preset(lap, "ring-laplacian");
  const Tensor yl = lap.forward(c);
  for (double v : yl.values()) EXPECT_NEAR(v, 0.0, 1e-14);
  EXPECT_THROW(apply_preset(lap, "sharpen"), InvalidArgument);
  SphericalConv uneven("u", lut_for(8), 2, 3);
  EXPECT_THROW(apply_preset(uneven, "average"), InvalidArgument);
}

}  // namespace
}  // namespace sphereconv
