#pragma once

// Independent recomputation of a single LUT entry, written from the closed
// forms rather than through the library's kernel code: pixel centre angles,
// the Z-X rotation as an explicit matrix product, the rotated ring point,
// back to angles, nearest pixel.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sphereconv::testing {

inline std::uint32_t oracle_lut_entry(int v, int u, int slot, int h, int w) {
  constexpr double pi = std::numbers::pi;
  const double theta = (v + 0.5) * pi / h;
  const double phi = (u + 0.5) * 2.0 * pi / w;
  if (slot == 0) return static_cast<std::uint32_t>(v * w + u);

  // phi < pi: yaw = phi - pi/2, roll = -theta. phi > pi: yaw = phi - 3pi/2,
  // roll = +theta, which is the same rotation after a half turn of the
  // pattern; the half turn is undone by reading the opposite ring slot.
  const bool upper = phi > pi;
  const double yaw = upper ? (phi - pi) - pi / 2 : phi - pi / 2;
  const double roll = upper ? theta : -theta;
  const int ring = ((slot - 1) + (upper ? 4 : 0)) % 8;

  const double alpha = 2.0 * pi / w;
  const double psi = -ring * pi / 4;
  const double px = std::sin(alpha) * std::cos(psi);
  const double py = std::sin(alpha) * std::sin(psi);
  const double pz = std::cos(alpha);

  const double cy = std::cos(yaw), sy = std::sin(yaw), cr = std::cos(roll), sr = std::sin(roll);
  // Rz(yaw) * Rx(roll) multiplied out.
  const double x = cy * px - sy * cr * py + sy * sr * pz;
  const double y = sy * px + cy * cr * py - cy * sr * pz;
  const double z = sr * py + cr * pz;

  const double t = std::acos(std::fmax(-1.0, std::fmin(1.0, z)));
  double f = std::atan2(y, x);
  if (f < 0) f += 2.0 * pi;
  int row = static_cast<int>(std::floor(t * h / pi));
  row = row < 0 ? 0 : (row > h - 1 ? h - 1 : row);
  int col = static_cast<int>(std::floor(f * w / (2.0 * pi))) % w;
  return static_cast<std::uint32_t>(row * w + col);
}

}  // namespace sphereconv::testing
