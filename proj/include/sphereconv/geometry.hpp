#pragma once

// Conventions shared by everything that touches the sphere:
//  * theta is the inclination from +Z, in [0, pi].
//  * phi is the azimuth from +X towards +Y, in [0, 2 pi).
//  * ERP row v samples theta = (v + 0.5) pi / H, column u samples
//    phi = (u + 0.5) 2 pi / W (pixel centres, so no pixel sits on a pole).

#include <cstddef>
#include <cstdint>
#include <numbers>

namespace sphereconv {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct SpherePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;
};

double dot(const SpherePoint& a, const SpherePoint& b);
// Great-circle angle between two unit vectors, robust near 0 and pi.
double angle_between(const SpherePoint& a, const SpherePoint& b);

struct SphericalAngles {
  double theta = 0.0;
  double phi = 0.0;
};

// Equirectangular grid. Width is always twice the height.
class ErpGrid {
 public:
  // Throws InvalidArgument unless width == 2 * height and height >= 2.
  ErpGrid(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }

  friend bool operator==(const ErpGrid&, const ErpGrid&) = default;

 private:
  int height_;
  int width_;
};

struct PixelCoord {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

inline std::uint32_t flat_index(const PixelCoord& px, const ErpGrid& g) {
  return static_cast<std::uint32_t>(px.row) * static_cast<std::uint32_t>(g.width()) +
         static_cast<std::uint32_t>(px.col);
}

// Wraps any real azimuth into [0, 2 pi).
double normalize_azimuth(double phi);

SphericalAngles angles_from_point(const SpherePoint& p);
SpherePoint point_from_angles(const SphericalAngles& a);

// Throws InvalidArgument when px is outside the grid.
SphericalAngles pixel_to_angles(const PixelCoord& px, const ErpGrid& g);
// Nearest pixel centre. Columns wrap around the seam, rows clamp at the poles.
PixelCoord angles_to_pixel(const SphericalAngles& a, const ErpGrid& g);

}  // namespace sphereconv
