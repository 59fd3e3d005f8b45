#include "sphereconv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphereconv/error.hpp"

namespace sphereconv {

double dot(const SpherePoint& a, const SpherePoint& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

double angle_between(const SpherePoint& a, const SpherePoint& b) {
  // atan2(|a x b|, a.b) keeps full precision for tiny angles.
  const double cx = a.y * b.z - a.z * b.y;
  const double cy = a.z * b.x - a.x * b.z;
  const double cz = a.x * b.y - a.y * b.x;
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot(a, b));
}

ErpGrid::ErpGrid(int height, int width) : height_(height), width_(width) {
  if (height < 2 || width != 2 * height) {
    throw InvalidArgument("ERP grid must be H x 2H with H >= 2, got " +
                          std::to_string(height) + "x" + std::to_string(width));
  }
}

double normalize_azimuth(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a value just below a multiple of 2 pi can round up to 2 pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

SphericalAngles angles_from_point(const SpherePoint& p) {
  const double z = std::clamp(p.z, -1.0, 1.0);
  double phi = std::atan2(p.y, p.x);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  return {std::acos(z), phi};
}

SpherePoint point_from_angles(const SphericalAngles& a) {
  const double s = std::sin(a.theta);
  return {s * std::cos(a.phi), s * std::sin(a.phi), std::cos(a.theta)};
}

SphericalAngles pixel_to_angles(const PixelCoord& px, const ErpGrid& g) {
  if (px.row < 0 || px.row >= g.height() || px.col < 0 || px.col >= g.width()) {
    throw InvalidArgument("pixel (" + std::to_string(px.row) + ", " + std::to_string(px.col) +
                          ") outside " + std::to_string(g.height()) + "x" +
                          std::to_string(g.width()) + " grid");
  }
  return {(px.row + 0.5) * kPi / g.height(), (px.col + 0.5) * kTwoPi / g.width()};
}

PixelCoord angles_to_pixel(const SphericalAngles& a, const ErpGrid& g) {
  const int h = g.height();
  const int w = g.width();
  const int row = std::clamp(static_cast<int>(std::floor(a.theta * h / kPi)), 0, h - 1);
  int col = static_cast<int>(std::floor(a.phi * w / kTwoPi)) % w;
  if (col < 0) col += w;
  return {row, col};
}

}  // namespace sphereconv
