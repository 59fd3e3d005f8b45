#pragma once

// Desk-scale depth networks on 64 x 128 panoramas. The planar encoder runs
// four stages with channels {8, 16, 32, 64}, halving resolution between
// stages down to an 8 x 16 latent. The student adds a spherical-convolution
// branch on the two shallowest scales, fused into the planar branch at each
// of those scales.

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "sphereconv/lut.hpp"
#include "sphereconv/ops.hpp"
#include "sphereconv/sconv.hpp"
#include "sphereconv/sff.hpp"

namespace sphereconv {

inline constexpr int kInputHeight = 64;
inline constexpr int kInputWidth = 128;
inline constexpr int kLatentChannels = 64;
// Initial output of both depth heads (metres), so the final ReLU starts active.
inline constexpr double kDepthPrior = 1.0;

enum class FusionKind { kSff, kConcat };

struct StudentOptions {
  bool spherical_branch = true;
  FusionKind fusion = FusionKind::kSff;
  double band_fraction = 1.0 / 3.0;
};

struct DepthOutput {
  Tensor depth;   // 1 x 64 x 128, non-negative
  Tensor latent;  // 64 x 8 x 16
};

// Two 3x3 conv + relu layers.
class ConvBlock {
 public:
  ConvBlock(const std::string& name, int in, int out);
  void init(std::mt19937_64& rng);
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& dy);
  void collect(ParameterList& out);

 private:
  Conv2d a_, b_;
  Relu ra_, rb_;
};

class StudentNet {
 public:
  StudentNet(LutCache& luts, StudentOptions opts = {});

  void init(std::uint64_t seed);

  // Inference path: consumes the RGB panorama only.
  DepthOutput forward(const Tensor& rgb);
  // Gradients of the loss w.r.t. the outputs of the last forward. d_latent
  // may be empty (no distillation term).
  void backward(const Tensor& d_depth, const Tensor& d_latent);

  ParameterList parameters();
  const StudentOptions& options() const { return opts_; }

 private:
  StudentOptions opts_;
  ConvBlock enc1_, enc2_, enc3_, enc4_;
  AvgPool2 pool1_, pool2_, pool3_, sph_pool_;
  SphericalConv sph1_, sph2_;
  Relu sph1_act_, sph2_act_;
  std::unique_ptr<FusionBlock> fuse1_, fuse2_;
  BilinearUp2 up3_, up2_;
  Conv2d dec3_, dec2_, pre_shuffle_, refine_, head_;
  Relu dec3_act_, dec2_act_, refine_act_, head_act_;
  SubpixelUp2 shuffle_;
  int c1_ = 8, c2_ = 16, c3_ = 32;
};

// Autoencoder over ground-truth depth. No skip connections, so everything
// the decoder reconstructs passes through the 64 x 8 x 16 latent.
class TeacherNet {
 public:
  TeacherNet();

  void init(std::uint64_t seed);
  DepthOutput forward(const Tensor& depth);
  void backward(const Tensor& d_depth);
  ParameterList parameters();

  // Depth is scaled by this factor on entry.
  static constexpr double kInputScale = 0.25;

 private:
  ConvBlock enc1_, enc2_, enc3_, enc4_;
  AvgPool2 pool1_, pool2_, pool3_;
  BilinearUp2 up3_, up2_;
  Conv2d dec3_, dec2_, pre_shuffle_, refine_, head_;
  Relu dec3_act_, dec2_act_, refine_act_, head_act_;
  SubpixelUp2 shuffle_;
};

}  // namespace sphereconv
