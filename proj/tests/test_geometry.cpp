#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sphereconv/error.hpp"
#include "sphereconv/geometry.hpp"

namespace sphereconv {
namespace {

TEST(AnglesFromPoint, AxisPoints) {
  auto a = angles_from_point({0, 0, 1});
  EXPECT_EQ(a.theta, 0.0);
  EXPECT_EQ(a.phi, 0.0);

  a = angles_from_point({0, 1, 0});
  EXPECT_DOUBLE_EQ(a.theta, kPi / 2);
  EXPECT_DOUBLE_EQ(a.phi, kPi / 2);

  a = angles_from_point({-1, 0, 0});
  EXPECT_DOUBLE_EQ(a.theta, kPi / 2);
  EXPECT_DOUBLE_EQ(a.phi, kPi);
}

TEST(AnglesFromPoint, NegativeAzimuthIsShiftedIntoRange) {
  const auto a = angles_from_point({0, -1, 0});
  EXPECT_DOUBLE_EQ(a.phi, 1.5 * kPi);
}

TEST(PointFromAngles, Examples) {
  for (double phi : {0.0, 1.0, 4.0}) {
    const auto p = point_from_angles({0.0, phi});
    EXPECT_EQ(p.x, 0.0);
    EXPECT_EQ(p.y, 0.0);
    EXPECT_EQ(p.z, 1.0);
  }
  auto p = point_from_angles({kPi / 2, kPi / 2});
  EXPECT_NEAR(p.x, 0.0, 1e-15);
  EXPECT_NEAR(p.y, 1.0, 1e-15);
  EXPECT_NEAR(p.z, 0.0, 1e-15);

  p = point_from_angles({kPi / 4, 0.0});
  EXPECT_NEAR(p.x, std::sqrt(2.0) / 2, 1e-15);
  EXPECT_EQ(p.y, 0.0);
  EXPECT_NEAR(p.z, std::sqrt(2.0) / 2, 1e-15);
}

TEST(PointFromAngles, RoundTripRandom) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0, 1);
  int tested = 0;
  while (tested < 10000) {
    SpherePoint p{n(rng), n(rng), n(rng)};
    const double r = std::sqrt(dot(p, p));
    p = {p.x / r, p.y / r, p.z / r};
    const auto a = angles_from_point(p);
    if (a.theta < 1e-3 || a.theta > kPi - 1e-3) continue;
    EXPECT_GE(a.phi, 0.0);
    EXPECT_LT(a.phi, kTwoPi);
    const auto q = point_from_angles(a);
    const double err = std::max({std::abs(q.x - p.x), std::abs(q.y - p.y), std::abs(q.z - p.z)});
    ASSERT_LT(err, 1e-10);
    ++tested;
  }
}

TEST(ErpGrid, RejectsBadShapes) {
  EXPECT_THROW(ErpGrid(1, 2), InvalidArgument);
  EXPECT_THROW(ErpGrid(4, 4), InvalidArgument);
  EXPECT_THROW(ErpGrid(8, 15), InvalidArgument);
  EXPECT_NO_THROW(ErpGrid(2, 4));
}

TEST(PixelToAngles, Examples) {
  auto a = pixel_to_angles({0, 0}, ErpGrid(2, 4));
  EXPECT_DOUBLE_EQ(a.theta, kPi / 4);
  EXPECT_DOUBLE_EQ(a.phi, kPi / 4);

  a = pixel_to_angles({32, 0}, ErpGrid(64, 128));
  EXPECT_DOUBLE_EQ(a.theta, kPi / 2 + kPi / 128);
}

TEST(PixelToAngles, OutOfBoundsThrows) {
  const ErpGrid g(8, 16);
  EXPECT_THROW(pixel_to_angles({8, 0}, g), InvalidArgument);
  EXPECT_THROW(pixel_to_angles({0, -1}, g), InvalidArgument);
  EXPECT_THROW(pixel_to_angles({0, 16}, g), InvalidArgument);
}

TEST(AnglesToPixel, Examples) {
  EXPECT_EQ(angles_to_pixel({kPi / 4, kPi / 4}, ErpGrid(2, 4)), (PixelCoord{0, 0}));
  const ErpGrid g(64, 128);
  EXPECT_EQ(angles_to_pixel({kPi - 1e-9, kTwoPi - 1e-9}, g), (PixelCoord{63, 127}));
  EXPECT_EQ(angles_to_pixel({kPi / 2, 0.0}, g), (PixelCoord{32, 0}));
  EXPECT_EQ(angles_to_pixel({kPi, 0.0}, g).row, 63);
}

TEST(AnglesToPixel, ExhaustiveRoundTrip) {
  const ErpGrid g(8, 16);
  for (int v = 0; v < g.height(); ++v) {
    for (int u = 0; u < g.width(); ++u) {
      EXPECT_EQ(angles_to_pixel(pixel_to_angles({v, u}, g), g), (PixelCoord{v, u}));
    }
  }
}

TEST(AnglesToPixel, ColumnWrapsAtSeam) {
  const ErpGrid g(64, 128);
  const double eps = 1e-9;
  EXPECT_EQ(angles_to_pixel({1.0, normalize_azimuth(-eps)}, g).col, 127);
  EXPECT_EQ(angles_to_pixel({1.0, kTwoPi - eps}, g).col, 127);
  EXPECT_EQ(angles_to_pixel({1.0, normalize_azimuth(kTwoPi + eps)}, g).col, 0);
  EXPECT_EQ(normalize_azimuth(-1e-300), 0.0);
}

TEST(AnglesToPixel, Monotone) {
  const ErpGrid g(32, 64);
  int prev_row = 0, prev_col = 0;
  for (int i = 0; i <= 5000; ++i) {
    const double t = i / 5000.0;
    const PixelCoord p = angles_to_pixel({t * kPi, t * (kTwoPi - 1e-12)}, g);
    EXPECT_GE(p.row, prev_row);
    EXPECT_GE(p.col, prev_col);
    prev_row = p.row;
    prev_col = p.col;
  }
}

}  // namespace
}  // namespace sphereconv
