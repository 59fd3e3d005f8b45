#pragma once

#include <array>
#include <string_view>

#include "sphereconv/geometry.hpp"

namespace sphereconv {

inline constexpr int kKernelPoints = 9;
inline constexpr int kRingPoints = 8;

// Slot order of the nine kernel samples. Slot 0 is the centre; ring slot k
// (1..8) sits at azimuth -(k - 1) pi / 4 around the north pole, which after
// placement on the sphere points in the named image-space direction
// ("Left" = decreasing column, "Up" = decreasing row).
enum class KernelSlot : int {
  kMid = 0,
  kLeft,
  kLeftUp,
  kUp,
  kRightUp,
  kRight,
  kRightDown,
  kDown,
  kLeftDown,
};

std::string_view slot_name(KernelSlot s);

// Centre at the north pole plus an eight point ring of angular radius alpha.
struct SphericalPattern {
  std::array<SpherePoint, kKernelPoints> points;
  double alpha = 0.0;
};

// Yaw about Z, pitch about Y, roll about X (radians).
struct RotationAngles {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
};

// Row-major 3x3 matrix.
struct RotationMatrix {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return m[r * 3 + c]; }
  SpherePoint apply(const SpherePoint& p) const;
  RotationMatrix operator*(const RotationMatrix& o) const;
  RotationMatrix transposed() const;
  double determinant() const;
};

RotationMatrix rotation_x(double roll);
RotationMatrix rotation_y(double pitch);
RotationMatrix rotation_z(double yaw);

// Ring radius alpha = 2 pi / W, one equatorial pixel pitch.
SphericalPattern base_pattern(const ErpGrid& g);

// Four-way case split on phi: phi < pi, phi == pi, phi > pi, phi == 0.
RotationAngles rotation_angles(const SphericalAngles& a);

// R = Rz(yaw) * Ry(pitch) * Rx(roll).
RotationMatrix rotation_matrix(const RotationAngles& ra);

// Cyclic shift applied to ring slots after rotation. The phi > pi branch of
// rotation_angles equals the phi < pi construction preceded by a half turn of
// the pattern about Z, which swaps opposite ring slots; shifting by four
// restores a slot -> image direction mapping that is the same on both sides
// of the phi = pi meridian. The point set is unchanged. The phi == 0 and
// phi == pi branches are left as they are (pixel centres never land there).
int ring_slot_shift(const SphericalAngles& a);

// The nine sphere points sampled by the kernel centred at direction a.
// Slot 0 coincides with point_from_angles(a).
std::array<SpherePoint, kKernelPoints> kernel_at(const SphericalAngles& a,
                                                 const SphericalPattern& pattern);

}  // namespace sphereconv
