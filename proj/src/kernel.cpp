#include "sphereconv/kernel.hpp"

#include <cmath>

#include "sphereconv/error.hpp"

namespace sphereconv {

std::string_view slot_name(KernelSlot s) {
  switch (s) {
    case KernelSlot::kMid: return "Mid";
    case KernelSlot::kLeft: return "Left";
    case KernelSlot::kLeftUp: return "Left_up";
    case KernelSlot::kUp: return "Up";
    case KernelSlot::kRightUp: return "Right_up";
    case KernelSlot::kRight: return "Right";
    case KernelSlot::kRightDown: return "Right_down";
    case KernelSlot::kDown: return "Down";
    case KernelSlot::kLeftDown: return "Left_down";
  }
  return "?";
}

SpherePoint RotationMatrix::apply(const SpherePoint& p) const {
  return {m[0] * p.x + m[1] * p.y + m[2] * p.z,
          m[3] * p.x + m[4] * p.y + m[5] * p.z,
          m[6] * p.x + m[7] * p.y + m[8] * p.z};
}

RotationMatrix RotationMatrix::operator*(const RotationMatrix& o) const {
  RotationMatrix r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m[i * 3 + k] * o.m[k * 3 + j];
      r.m[i * 3 + j] = s;
    }
  }
  return r;
}

RotationMatrix RotationMatrix::transposed() const {
  return {{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
}

double RotationMatrix::determinant() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

RotationMatrix rotation_x(double roll) {
  const double c = std::cos(roll), s = std::sin(roll);
  return {{1, 0, 0, 0, c, -s, 0, s, c}};
}

RotationMatrix rotation_y(double pitch) {
  const double c = std::cos(pitch), s = std::sin(pitch);
  return {{c, 0, s, 0, 1, 0, -s, 0, c}};
}

RotationMatrix rotation_z(double yaw) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  return {{c, -s, 0, s, c, 0, 0, 0, 1}};
}

SphericalPattern base_pattern(const ErpGrid& g) {
  if (g.width() < 4) throw InvalidArgument("spherical pattern needs W >= 4");
  SphericalPattern p;
  p.alpha = kTwoPi / g.width();
  const double s = std::sin(p.alpha);
  const double c = std::cos(p.alpha);
  p.points[0] = {0.0, 0.0, 1.0};
  for (int k = 0; k < kRingPoints; ++k) {
    const double psi = -k * (kPi / 4.0);
    p.points[k + 1] = {s * std::cos(psi), s * std::sin(psi), c};
  }
  return p;
}

RotationAngles rotation_angles(const SphericalAngles& a) {
  const double phi = a.phi;
  if (phi == 0.0) return {0.0, a.theta, 0.0};
  if (phi == kPi) return {0.0, -a.theta, 0.0};
  if (phi < kPi) return {phi - kPi / 2.0, 0.0, -a.theta};
  return {(phi - kPi) - kPi / 2.0, 0.0, a.theta};
}

RotationMatrix rotation_matrix(const RotationAngles& ra) {
  return rotation_z(ra.yaw) * rotation_y(ra.pitch) * rotation_x(ra.roll);
}

int ring_slot_shift(const SphericalAngles& a) {
  return a.phi > kPi ? 4 : 0;
}

std::array<SpherePoint, kKernelPoints> kernel_at(const SphericalAngles& a,
                                                 const SphericalPattern& pattern) {
  const RotationMatrix r = rotation_matrix(rotation_angles(a));
  const int shift = ring_slot_shift(a);
  std::array<SpherePoint, kKernelPoints> out;
  out[0] = r.apply(pattern.points[0]);
  for (int k = 0; k < kRingPoints; ++k) {
    out[k + 1] = r.apply(pattern.points[1 + (k + shift) % kRingPoints]);
  }
  return out;
}

}  // namespace sphereconv
