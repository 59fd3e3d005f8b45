#include "sphereconv/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "sphereconv/error.hpp"
#include "sphereconv/image_io.hpp"

namespace sphereconv {

namespace {

constexpr double kAmbient = 0.1;

std::array<double, 3> inward_normal(RoomFace f) {
  switch (f) {
    case RoomFace::kPosX: return {-1, 0, 0};
    case RoomFace::kNegX: return {1, 0, 0};
    case RoomFace::kPosY: return {0, -1, 0};
    case RoomFace::kNegY: return {0, 1, 0};
    case RoomFace::kCeiling: return {0, 0, -1};
    case RoomFace::kFloor: return {0, 0, 1};
  }
  return {0, 0, 0};
}

std::string scene_name(int i, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scene_%04d.%s", i, ext);
  return buf;
}

}  // namespace

void RoomScene::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!(half_extent[i] >= 1.0 && half_extent[i] <= 5.0)) throw InvalidArgument("room extent outside [1, 5] m");
    if (!(std::abs(camera[i]) < half_extent[i])) throw InvalidArgument("camera must be strictly inside the room");
  }
  const double n = light.x * light.x + light.y * light.y + light.z * light.z;
  if (std::abs(n - 1.0) > 1e-9) throw InvalidArgument("light direction must be a unit vector");
}

RayHit cast_room_ray(const RoomScene& scene, const SpherePoint& dir) {
  const double d[3] = {dir.x, dir.y, dir.z};
  RayHit hit{std::numeric_limits<double>::infinity(), RoomFace::kPosX};
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == 0.0) continue;
    const bool positive = d[axis] > 0.0;
    const double plane = positive ? scene.half_extent[axis] : -scene.half_extent[axis];
    const double t = (plane - scene.camera[axis]) / d[axis];
    if (t < hit.distance) {
      hit.distance = t;
      hit.face = static_cast<RoomFace>(2 * axis + (positive ? 0 : 1));
    }
  }
  return hit;
}

RgbdSample render(const RoomScene& scene, const ErpGrid& g) {
  scene.validate();
  RgbdSample s{Tensor(3, g.height(), g.width()), Tensor(1, g.height(), g.width()),
               Tensor(1, g.height(), g.width(), 1.0)};
  for (int v = 0; v < g.height(); ++v) {
    for (int u = 0; u < g.width(); ++u) {
      SphericalAngles a = pixel_to_angles({v, u}, g);
      a.phi -= scene.yaw;
      const RayHit hit = cast_room_ray(scene, point_from_angles(a));
      s.depth.at(0, v, u) = hit.distance;
      const auto n = inward_normal(hit.face);
      const double lambert = std::max(0.0, -(n[0] * scene.light.x + n[1] * scene.light.y + n[2] * scene.light.z));
      const auto& albedo = scene.albedo[static_cast<int>(hit.face)];
      for (int c = 0; c < 3; ++c) s.rgb.at(c, v, u) = std::min(1.0, albedo[c] * lambert + kAmbient);
    }
  }
  return s;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RoomScene random_scene(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  RoomScene s;
  s.seed = seed;
  s.half_extent = {uniform(1.5, 5.0), uniform(1.5, 5.0), uniform(1.2, 2.0)};
  s.camera = {uniform(-0.6, 0.6) * s.half_extent[0], uniform(-0.6, 0.6) * s.half_extent[1],
              uniform(-0.3, 0.3) * s.half_extent[2]};
  for (auto& face : s.albedo) {
    for (double& c : face) c = uniform(0.25, 0.85);
  }
  const double azimuth = uniform(0.0, kTwoPi);
  const double tilt = uniform(0.2, 0.9);
  s.light = {std::sin(tilt) * std::cos(azimuth), std::sin(tilt) * std::sin(azimuth), -std::cos(tilt)};
  return s;
}

std::vector<RgbdSample> make_dataset(int n_scenes, const ErpGrid& g, std::uint64_t seed) {
  if (n_scenes < 1) throw InvalidArgument("dataset needs at least one scene");
  std::vector<RgbdSample> out;
  out.reserve(static_cast<std::size_t>(n_scenes));
  std::uint64_t state = seed;
  for (int i = 0; i < n_scenes; ++i) out.push_back(render(random_scene(splitmix64(state)), g));
  return out;
}

void save_dataset(const std::vector<RgbdSample>& samples, const std::filesystem::path& dir, std::uint64_t seed) {
  if (samples.empty()) throw InvalidArgument("save_dataset: no samples");
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    write_ppm(to_rgb_image(samples[i].rgb), dir / scene_name(static_cast<int>(i), "ppm"));
    write_pfm(to_float_image(samples[i].depth), dir / scene_name(static_cast<int>(i), "pfm"));
  }
  std::ofstream m(dir / "manifest.txt");
  if (!m) throw IoError("cannot write manifest in " + dir.string());
  m << "seed=" << seed << "\nheight=" << samples[0].depth.height() << "\nwidth=" << samples[0].depth.width()
    << "\ncount=" << samples.size() << "\n";
  if (!m) throw IoError("cannot write manifest in " + dir.string());
}

std::vector<RgbdSample> load_dataset(const std::filesystem::path& dir) {
  std::ifstream m(dir / "manifest.txt");
  if (!m) throw IoError("no manifest.txt in " + dir.string());
  std::map<std::string, std::string> kv;
  for (std::string line; std::getline(m, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!kv.count("count") || !kv.count("height") || !kv.count("width")) {
    throw FormatError("manifest in " + dir.string() + " lacks count/height/width");
  }
  int count = 0, h = 0, w = 0;
  try {
    count = std::stoi(kv["count"]);
    h = std::stoi(kv["height"]);
    w = std::stoi(kv["width"]);
  } catch (const std::logic_error&) {
    throw FormatError("manifest in " + dir.string() + " has non-numeric fields");
  }
  if (count < 1) throw FormatError("manifest in " + dir.string() + " has no scenes");

  std::vector<RgbdSample> out;
  for (int i = 0; i < count; ++i) {
    RgbdSample s{from_rgb_image(read_ppm(dir / scene_name(i, "ppm"))),
                 from_float_image(read_pfm(dir / scene_name(i, "pfm"))), Tensor()};
    if (s.rgb.height() != h || s.rgb.width() != w || s.depth.shape() != Shape{1, h, w}) {
      throw ShapeError("scene " + std::to_string(i) + " does not match manifest grid");
    }
    s.mask = Tensor(1, h, w, 1.0);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sphereconv
