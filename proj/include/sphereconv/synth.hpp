#pragma once

// Procedural box-room panoramas with exact ground-truth depth.

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "sphereconv/geometry.hpp"
#include "sphereconv/tensor.hpp"

namespace sphereconv {

// Faces of the room box, in this order. Inward normals: +X wall faces -X, ...
enum class RoomFace : int { kPosX = 0, kNegX, kPosY, kNegY, kCeiling, kFloor };

// Axis-aligned box [-hx, hx] x [-hy, hy] x [-hz, hz] viewed from `camera`.
// `yaw` rotates the whole scene about the vertical axis through the camera.
struct RoomScene {
  std::array<double, 3> half_extent{2.0, 2.0, 2.0};
  std::array<double, 3> camera{0.0, 0.0, 0.0};
  std::array<std::array<double, 3>, 6> albedo{};
  SpherePoint light{0.0, 0.0, -1.0};  // direction the light travels (unit)
  double yaw = 0.0;
  std::uint64_t seed = 0;

  // Throws InvalidArgument unless extents lie in [1, 5] and the camera is
  // strictly inside.
  void validate() const;
};

struct RgbdSample {
  Tensor rgb;    // 3 x H x W in [0, 1]
  Tensor depth;  // 1 x H x W, metres
  Tensor mask;   // 1 x H x W, 1 = valid
};

struct RayHit {
  double distance = 0.0;
  RoomFace face = RoomFace::kPosX;
};

// First face hit by the ray camera + t * dir (dir in the room frame).
RayHit cast_room_ray(const RoomScene& scene, const SpherePoint& dir);

RgbdSample render(const RoomScene& scene, const ErpGrid& g);

// Scene drawn from a seeded generator: extents, camera offset, albedos, light.
RoomScene random_scene(std::uint64_t seed);

// SplitMix64 step, used to derive per-scene seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t& state);

std::vector<RgbdSample> make_dataset(int n_scenes, const ErpGrid& g, std::uint64_t seed);

// Writes scene_%04d.ppm / scene_%04d.pfm and manifest.txt into dir.
void save_dataset(const std::vector<RgbdSample>& samples, const std::filesystem::path& dir,
                  std::uint64_t seed);
// Reads a directory written by save_dataset. Throws IoError/FormatError.
std::vector<RgbdSample> load_dataset(const std::filesystem::path& dir);

}  // namespace sphereconv
