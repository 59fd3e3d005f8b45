#include "sphereconv/networks.hpp"

#include "sphereconv/error.hpp"

namespace sphereconv {

namespace {

std::unique_ptr<FusionBlock> make_fusion(const std::string& name, int channels,
                                         const StudentOptions& opts) {
  if (opts.fusion == FusionKind::kSff) {
    return std::make_unique<SffFusion>(name, channels, opts.band_fraction);
  }
  return std::make_unique<ConcatFusion>(name, channels);
}

void append(ParameterList& out, const ParameterList& more) { out.insert(out.end(), more.begin(), more.end()); }

void require_input(const Tensor& x, int channels, const char* what) {
  if (x.shape() != Shape{channels, kInputHeight, kInputWidth}) {
    throw ShapeError(std::string(what) + ": expected " + std::to_string(channels) + "x64x128 input, got " +
                     to_string(x.shape()));
  }
}

}  // namespace

ConvBlock::ConvBlock(const std::string& name, int in, int out)
    : a_(name + ".a", in, out, 3), b_(name + ".b", out, out, 3) {}

void ConvBlock::init(std::mt19937_64& rng) {
  a_.init(rng);
  b_.init(rng);
}

Tensor ConvBlock::forward(const Tensor& x) { return rb_.forward(b_.forward(ra_.forward(a_.forward(x)))); }

Tensor ConvBlock::backward(const Tensor& dy) { return a_.backward(ra_.backward(b_.backward(rb_.backward(dy)))); }

void ConvBlock::collect(ParameterList& out) {
  append(out, a_.parameters());
  append(out, b_.parameters());
}

StudentNet::StudentNet(LutCache& luts, StudentOptions opts)
    : opts_(opts),
      enc1_("student.enc1", 3, 8),
      enc2_("student.enc2", 8, 16),
      enc3_("student.enc3", 16, 32),
      enc4_("student.enc4", 32, kLatentChannels),
      sph1_("student.sph1", luts.get(ErpGrid(kInputHeight, kInputWidth)), 3, 8),
      sph2_("student.sph2", luts.get(ErpGrid(kInputHeight / 2, kInputWidth / 2)), 8, 16),
      fuse1_(make_fusion("student.fuse1", 8, opts)),
      fuse2_(make_fusion("student.fuse2", 16, opts)),
      dec3_("student.dec3", kLatentChannels + 32, 32, 3),
      dec2_("student.dec2", 32 + 16, 16, 3),
      pre_shuffle_("student.pre_shuffle", 16, 16, 3),
      refine_("student.refine", 4 + 8, 8, 3),
      head_("student.head", 8, 1, 1) {}

void StudentNet::init(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  enc1_.init(rng);
  enc2_.init(rng);
  enc3_.init(rng);
  enc4_.init(rng);
  sph1_.init(rng);
  sph2_.init(rng);
  fuse1_->init(rng);
  fuse2_->init(rng);
  dec3_.init(rng);
  dec2_.init(rng);
  pre_shuffle_.init(rng);
  refine_.init(rng);
  head_.init(rng);
  head_.bias().value.fill(kDepthPrior);
}

DepthOutput StudentNet::forward(const Tensor& rgb) {
  require_input(rgb, 3, "student");
  const Tensor e1 = enc1_.forward(rgb);
  Tensor f1 = e1;
  Tensor s1;
  if (opts_.spherical_branch) {
    s1 = sph1_act_.forward(sph1_.forward(rgb));
    f1 = fuse1_->forward(e1, s1);
  }
  const Tensor e2 = enc2_.forward(pool1_.forward(f1));
  Tensor f2 = e2;
  if (opts_.spherical_branch) {
    const Tensor s2 = sph2_act_.forward(sph2_.forward(sph_pool_.forward(s1)));
    f2 = fuse2_->forward(e2, s2);
  }
  const Tensor e3 = enc3_.forward(pool2_.forward(f2));
  DepthOutput out;
  out.latent = enc4_.forward(pool3_.forward(e3));

  const Tensor d3 = dec3_act_.forward(dec3_.forward(concat_channels(up3_.forward(out.latent), e3)));
  const Tensor d2 = dec2_act_.forward(dec2_.forward(concat_channels(up2_.forward(d3), f2)));
  const Tensor fine = shuffle_.forward(pre_shuffle_.forward(d2));
  const Tensor r = refine_act_.forward(refine_.forward(concat_channels(fine, f1)));
  out.depth = head_act_.forward(head_.forward(r));
  return out;
}

void StudentNet::backward(const Tensor& d_depth, const Tensor& d_latent) {
  auto [dfine, df1] = split_channels(refine_.backward(refine_act_.backward(head_.backward(head_act_.backward(d_depth)))), 4);
  const Tensor dd2 = pre_shuffle_.backward(shuffle_.backward(dfine));
  auto [dup2, df2] = split_channels(dec2_.backward(dec2_act_.backward(dd2)), 32);
  const Tensor dd3 = up2_.backward(dup2);
  auto [dup3, de3] = split_channels(dec3_.backward(dec3_act_.backward(dd3)), kLatentChannels);
  Tensor dlatent = up3_.backward(dup3);
  if (d_latent.size() != 0) dlatent += d_latent;

  de3 += pool3_.backward(enc4_.backward(dlatent));
  df2 += pool2_.backward(enc3_.backward(de3));

  Tensor de2 = df2;
  Tensor ds1;
  if (opts_.spherical_branch) {
    auto [de2_f, ds2] = fuse2_->backward(df2);
    de2 = std::move(de2_f);
    ds1 = sph_pool_.backward(sph2_.backward(sph2_act_.backward(ds2)));
  }
  df1 += pool1_.backward(enc2_.backward(de2));

  Tensor de1 = df1;
  if (opts_.spherical_branch) {
    auto [de1_f, ds1_f] = fuse1_->backward(df1);
    de1 = std::move(de1_f);
    ds1 += ds1_f;
    sph1_.backward(sph1_act_.backward(ds1));
  }
  enc1_.backward(de1);
}

ParameterList StudentNet::parameters() {
  ParameterList p;
  enc1_.collect(p);
  enc2_.collect(p);
  enc3_.collect(p);
  enc4_.collect(p);
  if (opts_.spherical_branch) {
    append(p, sph1_.parameters());
    append(p, sph2_.parameters());
    append(p, fuse1_->parameters());
    append(p, fuse2_->parameters());
  }
  append(p, dec3_.parameters());
  append(p, dec2_.parameters());
  append(p, pre_shuffle_.parameters());
  append(p, refine_.parameters());
  append(p, head_.parameters());
  return p;
}

TeacherNet::TeacherNet()
    : enc1_("teacher.enc1", 1, 8),
      enc2_("teacher.enc2", 8, 16),
      enc3_("teacher.enc3", 16, 32),
      enc4_("teacher.enc4", 32, kLatentChannels),
      dec3_("teacher.dec3", kLatentChannels, 32, 3),
      dec2_("teacher.dec2", 32, 16, 3),
      pre_shuffle_("teacher.pre_shuffle", 16, 16, 3),
      refine_("teacher.refine", 4, 8, 3),
      head_("teacher.head", 8, 1, 1) {}

void TeacherNet::init(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  enc1_.init(rng);
  enc2_.init(rng);
  enc3_.init(rng);
  enc4_.init(rng);
  dec3_.init(rng);
  dec2_.init(rng);
  pre_shuffle_.init(rng);
  refine_.init(rng);
  head_.init(rng);
  head_.bias().value.fill(kDepthPrior);
}

DepthOutput TeacherNet::forward(const Tensor& depth) {
  require_input(depth, 1, "teacher");
  Tensor x(depth.shape());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = depth[i] * kInputScale;
  const Tensor e1 = enc1_.forward(x);
  const Tensor e2 = enc2_.forward(pool1_.forward(e1));
  const Tensor e3 = enc3_.forward(pool2_.forward(e2));
  DepthOutput out;
  out.latent = enc4_.forward(pool3_.forward(e3));
  const Tensor d3 = dec3_act_.forward(dec3_.forward(up3_.forward(out.latent)));
  const Tensor d2 = dec2_act_.forward(dec2_.forward(up2_.forward(d3)));
  const Tensor fine = shuffle_.forward(pre_shuffle_.forward(d2));
  out.depth = head_act_.forward(head_.forward(refine_act_.forward(refine_.forward(fine))));
  return out;
}

void TeacherNet::backward(const Tensor& d_depth) {
  const Tensor dfine = refine_.backward(refine_act_.backward(head_.backward(head_act_.backward(d_depth))));
  const Tensor dd2 = pre_shuffle_.backward(shuffle_.backward(dfine));
  const Tensor dd3 = up2_.backward(dec2_.backward(dec2_act_.backward(dd2)));
  const Tensor dlatent = up3_.backward(dec3_.backward(dec3_act_.backward(dd3)));
  const Tensor de3 = pool3_.backward(enc4_.backward(dlatent));
  const Tensor de2 = pool2_.backward(enc3_.backward(de3));
  const Tensor de1 = pool1_.backward(enc2_.backward(de2));
  enc1_.backward(de1);
}

ParameterList TeacherNet::parameters() {
  ParameterList p;
  enc1_.collect(p);
  enc2_.collect(p);
  enc3_.collect(p);
  enc4_.collect(p);
  append(p, dec3_.parameters());
  append(p, dec2_.parameters());
  append(p, pre_shuffle_.parameters());
  append(p, refine_.parameters());
  append(p, head_.parameters());
  return p;
}

}  // namespace sphereconv
