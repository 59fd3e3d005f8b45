#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "sphereconv/error.hpp"
#include "sphereconv/image_io.hpp"
#include "sphereconv/synth.hpp"

namespace sphereconv {
namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sphereconv_tests";
  fs::create_directories(dir);
  return dir / name;
}

// Exit distance from inside an axis-aligned box, slab by slab.
double slab_exit(const RoomScene& s, const SpherePoint& d) {
  const double dir[3] = {d.x, d.y, d.z};
  double t = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (dir[i] == 0.0) continue;
    const double t1 = (-s.half_extent[i] - s.camera[i]) / dir[i];
    const double t2 = (s.half_extent[i] - s.camera[i]) / dir[i];
    t = std::min(t, std::max(t1, t2));
  }
  return t;
}

TEST(Render, CentredCubeAlongPlusX) {
  RoomScene s;
  const RayHit hit = cast_room_ray(s, SpherePoint{1.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(hit.distance, 2.0);
  EXPECT_EQ(hit.face, RoomFace::kPosX);

  const ErpGrid g(64, 128);
  const auto sample = render(s, g);
  const auto a = pixel_to_angles({32, 0}, g);
  EXPECT_NEAR(sample.depth.at(0, 32, 0), 2.0 / (std::sin(a.theta) * std::cos(a.phi)), 1e-12);
  EXPECT_NEAR(sample.depth.at(0, 32, 0), 2.0, 0.01);
}

TEST(Render, TopRowHitsCeiling) {
  RoomScene s;
  const ErpGrid g(32, 64);
  for (int u = 0; u < g.width(); ++u) {
    const auto dir = point_from_angles(pixel_to_angles({0, u}, g));
    EXPECT_EQ(cast_room_ray(s, dir).face, RoomFace::kCeiling);
  }
  const auto sample = render(s, g);
  for (int u = 0; u < g.width(); ++u) {
    const double theta = pixel_to_angles({0, u}, g).theta;
    EXPECT_NEAR(sample.depth.at(0, 0, u), 2.0 / std::cos(theta), 1e-12);
  }
}

TEST(Render, SeamIsContinuous) {
  const ErpGrid g(64, 128);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto d = render(random_scene(seed), g).depth;
    for (int v = 0; v < g.height(); ++v) {
      double interior = 0.0;
      for (int u = 0; u + 1 < g.width(); ++u) interior = std::max(interior, std::abs(d.at(0, v, u + 1) - d.at(0, v, u)));
      EXPECT_LE(std::abs(d.at(0, v, 0) - d.at(0, v, g.width() - 1)), 2.0 * interior + 1e-12) << "row " << v;
    }
  }
}

TEST(Render, MatchesSlabOracle) {
  const ErpGrid g(32, 64);
  for (std::uint64_t seed : {4u, 5u}) {
    const RoomScene s = random_scene(seed);
    const auto sample = render(s, g);
    for (int v = 0; v < g.height(); ++v) {
      for (int u = 0; u < g.width(); ++u) {
        auto a = pixel_to_angles({v, u}, g);
        a.phi -= s.yaw;
        EXPECT_NEAR(sample.depth.at(0, v, u), slab_exit(s, point_from_angles(a)), 1e-9);
      }
    }
  }
}

TEST(Render, SampleInvariants) {
  const ErpGrid g(32, 64);
  const RoomScene s = random_scene(6);
  const auto sample = render(s, g);
  const double diag = 2.0 * std::hypot(s.half_extent[0], s.half_extent[1], s.half_extent[2]);
  for (double d : sample.depth.values()) {
    EXPECT_GT(d, 0.0);
    EXPECT_LE(d, diag);
  }
  for (double c : sample.rgb.values()) {
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
  for (double m : sample.mask.values()) EXPECT_EQ(m, 1.0);
}

TEST(Render, YawIsColumnRoll) {
  const ErpGrid g(32, 64);
  RoomScene s = random_scene(7);
  s.yaw = 0.0;
  const auto base = render(s, g);
  for (int k : {1, 5, 32}) {
    RoomScene r = s;
    r.yaw = kTwoPi * k / g.width();
    const auto rolled = render(r, g);
    const Tensor want = roll_columns(base.depth, k);
    for (std::size_t i = 0; i < want.size(); ++i) ASSERT_NEAR(rolled.depth[i], want[i], 1e-12);
    const Tensor want_rgb = roll_columns(base.rgb, k);
    for (std::size_t i = 0; i < want_rgb.size(); ++i) ASSERT_NEAR(rolled.rgb[i], want_rgb[i], 1e-12);
  }
}

TEST(Scene, Validation) {
  RoomScene s;
  s.camera = {2.0, 0.0, 0.0};
  EXPECT_THROW(s.validate(), InvalidArgument);
  s.camera = {0.0, 0.0, 0.0};
  s.half_extent = {0.5, 2.0, 2.0};
  EXPECT_THROW(render(s, ErpGrid(2, 4)), InvalidArgument);
  for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_NO_THROW(random_scene(seed).validate());
}

TEST(Dataset, DeterministicPerSeed) {
  const ErpGrid g(16, 32);
  const auto a = make_dataset(3, g, 11);
  const auto b = make_dataset(3, g, 11);
  const auto c = make_dataset(3, g, 12);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(a[i].rgb, b[i].rgb);
    EXPECT_EQ(a[i].depth, b[i].depth);
  }
  EXPECT_NE(a[0].depth, c[0].depth);
  EXPECT_NE(a[0].depth, a[1].depth);
  EXPECT_THROW(make_dataset(0, g, 1), InvalidArgument);
}

TEST(Dataset, FiftyScenesRenderQuickly) {
  const auto start = std::chrono::steady_clock::now();
  const auto data = make_dataset(50, ErpGrid(64, 128), 1);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(data.size(), 50u);
  EXPECT_LT(secs, 10.0);
}

TEST(Dataset, SaveLoadRoundTrip) {
  const ErpGrid g(8, 16);
  const auto data = make_dataset(2, g, 3);
  const fs::path dir = temp_path("dataset");
  fs::remove_all(dir);
  save_dataset(data, dir, 3);
  EXPECT_TRUE(fs::exists(dir / "scene_0000.ppm"));
  EXPECT_TRUE(fs::exists(dir / "scene_0001.pfm"));
  const auto back = load_dataset(dir);
  ASSERT_EQ(back.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    for (std::size_t p = 0; p < data[i].depth.size(); ++p)
      EXPECT_EQ(back[i].depth[p], static_cast<double>(static_cast<float>(data[i].depth[p])));
    for (std::size_t p = 0; p < data[i].rgb.size(); ++p) EXPECT_NEAR(back[i].rgb[p], data[i].rgb[p], 0.5 / 255 + 1e-12);
  }
  EXPECT_THROW(load_dataset(temp_path("no_such_dataset")), IoError);
}

TEST(ImageIo, PpmRoundTrip) {
  const auto sample = render(random_scene(8), ErpGrid(16, 32));
  const RgbImage img = to_rgb_image(sample.rgb);
  const auto path = temp_path("round.ppm");
  write_ppm(img, path);
  EXPECT_EQ(read_ppm(path), img);
}

TEST(ImageIo, PfmRoundTripBothChannelCounts) {
  const auto sample = render(random_scene(9), ErpGrid(16, 32));
  for (const Tensor* t : {&sample.depth, &sample.rgb}) {
    const FloatImage img = to_float_image(*t);
    const auto path = temp_path("round.pfm");
    write_pfm(img, path);
    EXPECT_EQ(read_pfm(path), img);
  }
  std::ifstream in(temp_path("round.pfm"), std::ios::binary);
  std::string magic, dims, scale;
  std::getline(in, magic);
  std::getline(in, dims);
  std::getline(in, scale);
  EXPECT_EQ(magic, "PF");
  EXPECT_EQ(dims, "32 16");
  EXPECT_EQ(scale, "-1.0");
}

TEST(ImageIo, PfmRowsBottomToTop) {
  FloatImage img{2, 1, 1, {1.0f, 2.0f}};
  const auto path = temp_path("order.pfm");
  write_pfm(img, path);
  std::ifstream in(path, std::ios::binary);
  std::string line;
  for (int i = 0; i < 3; ++i) std::getline(in, line);
  float first = 0.0f;
  in.read(reinterpret_cast<char*>(&first), 4);
  EXPECT_EQ(first, 2.0f);
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

TEST(ImageIo, Rejections) {
  const auto p = temp_path("bad.img");
  write_text(p, "P3\n2 2\n255\n");
  EXPECT_THROW(read_ppm(p), FormatError);
  write_text(p, "P6\n1 1\n65535\n\x01\x02\x03\x04\x05\x06");
  EXPECT_THROW(read_ppm(p), FormatError);
  write_text(p, "P6\n2 2\n255\n\x01\x02");
  EXPECT_THROW(read_ppm(p), FormatError);
  write_text(p, "P6\n2");
  EXPECT_THROW(read_ppm(p), FormatError);
  write_text(p, "PX\n1 1\n-1.0\n\0\0\0\0");
  EXPECT_THROW(read_pfm(p), FormatError);
  write_text(p, "Pf\n2 2\n-1.0\n\0\0\0\0");
  EXPECT_THROW(read_pfm(p), FormatError);
  EXPECT_THROW(read_pfm(temp_path("missing.pfm")), IoError);
}

}  // namespace
}  // namespace sphereconv
