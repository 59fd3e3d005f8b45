// sphereconv command-line tool.
//
// Exit codes: 0 success, 2 usage or input error, 3 shape/format mismatch,
// 4 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "sphereconv/checkpoint.hpp"
#include "sphereconv/error.hpp"
#include "sphereconv/image_io.hpp"
#include "sphereconv/kernel.hpp"
#include "sphereconv/lut.hpp"
#include "sphereconv/metrics.hpp"
#include "sphereconv/sconv.hpp"
#include "sphereconv/synth.hpp"
#include "sphereconv/training.hpp"

namespace fs = std::filesystem;
using namespace sphereconv;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitNumeric = 4;

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p)) throw IoError(std::string(what) + " not found: " + p.string());
}

void require_dir(const fs::path& p, const char* what) {
  if (!fs::is_directory(p)) throw IoError(std::string(what) + " not found: " + p.string());
}

void require_output_parent(const fs::path& p) {
  const fs::path parent = fs::absolute(p).parent_path();
  if (!fs::is_directory(parent)) throw IoError("output directory does not exist: " + parent.string());
}

struct TrainFlags {
  std::string data, out, config, loss_csv, teacher;
  std::uint64_t seed = 0;
  int epochs = 1;
  long steps = 0;
  double lr = 1e-4;
  double lambda = 0.1;
  std::string variant = "full";
  bool augment_yaw = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* epochs_opt = nullptr;
  CLI::Option* steps_opt = nullptr;
  CLI::Option* lr_opt = nullptr;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* variant_opt = nullptr;
  CLI::Option* augment_opt = nullptr;
};

void add_common_train_options(CLI::App* cmd, TrainFlags& f) {
  cmd->add_option("--data", f.data, "Dataset directory written by 'synth'")->required();
  cmd->add_option("--out", f.out, "Checkpoint to write")->required();
  cmd->add_option("--config", f.config, "key=value training config; flags override it");
  cmd->add_option("--loss-csv", f.loss_csv, "Loss curve CSV to write");
  f.seed_opt = cmd->add_option("--seed", f.seed, "Random seed");
  f.epochs_opt = cmd->add_option("--epochs", f.epochs, "Passes over the dataset")->check(CLI::PositiveNumber);
  f.steps_opt = cmd->add_option("--steps", f.steps, "Stop after this many steps (0 = all epochs)")
                    ->check(CLI::NonNegativeNumber);
  f.lr_opt = cmd->add_option("--lr", f.lr, "Adam learning rate")->check(CLI::PositiveNumber);
  f.augment_opt = cmd->add_flag("--augment-yaw", f.augment_yaw, "Random yaw rolls in multiples of 8 columns");
}

TrainConfig resolve_config(const TrainFlags& f) {
  TrainConfig cfg;
  if (!f.config.empty()) {
    require_file(f.config, "config");
    cfg = load_config(f.config, cfg);
  }
  if (f.seed_opt->count()) cfg.seed = f.seed;
  if (f.epochs_opt->count()) cfg.epochs = f.epochs;
  if (f.steps_opt->count()) cfg.max_steps = f.steps;
  if (f.lr_opt->count()) cfg.lr = f.lr;
  if (f.augment_opt->count()) cfg.augment_yaw = f.augment_yaw;
  if (f.lambda_opt && f.lambda_opt->count()) cfg.lambda_distill = f.lambda;
  if (f.variant_opt && f.variant_opt->count()) apply_config_value(cfg, "variant", f.variant);
  return cfg;
}

void print_curve_summary(const std::vector<LossRecord>& curve) {
  if (curve.empty()) return;
  std::printf("steps %zu  first loss %.6g  last loss %.6g\n", curve.size(), curve.front().total,
              curve.back().total);
}

int cmd_lut_build(int height, int width, const std::string& out) {
  require_output_parent(out);
  const KernelLut lut = compile_lut(ErpGrid(height, width));
  save_lut(lut, out);
  std::printf("wrote %s (%dx%d, checksum %016llx)\n", out.c_str(), height, width,
              static_cast<unsigned long long>(lut.checksum));
  return 0;
}

int cmd_kernel_show(int height, int width, int row, int col, const std::string& out, int scale) {
  const ErpGrid g(height, width);
  if (row < 0 || row >= height || col < 0 || col >= width) {
    throw InvalidArgument("pixel (" + std::to_string(row) + ", " + std::to_string(col) + ") is outside the " +
                          std::to_string(height) + "x" + std::to_string(width) + " grid");
  }
  require_output_parent(out);
  const KernelLut lut = compile_lut(g);
  const std::uint32_t centre = flat_index({row, col}, g);

  RgbImage img{height * scale, width * scale, {}};
  img.data.resize(static_cast<std::size_t>(img.height) * img.width * 3);
  auto paint = [&](int v, int u, std::uint8_t r, std::uint8_t gr, std::uint8_t b) {
    for (int y = v * scale; y < (v + 1) * scale; ++y) {
      for (int x = u * scale; x < (u + 1) * scale; ++x) {
        std::uint8_t* p = &img.data[(static_cast<std::size_t>(y) * img.width + x) * 3];
        p[0] = r, p[1] = gr, p[2] = b;
      }
    }
  };
  for (int v = 0; v < height; ++v) {
    const double s = std::sin(pixel_to_angles({v, 0}, g).theta);
    const auto shade = static_cast<std::uint8_t>(40 + 120 * s);
    for (int u = 0; u < width; ++u) paint(v, u, shade, shade, shade);
  }

  std::printf("slot,row,col\n");
  for (int k = kKernelPoints - 1; k >= 0; --k) {
    const std::uint32_t idx = lut.tables[k][centre];
    const int v = static_cast<int>(idx / width), u = static_cast<int>(idx % width);
    if (k == 0) {
      paint(v, u, 255, 40, 40);
    } else {
      paint(v, u, 40, 220, 80);
    }
  }
  for (int k = 0; k < kKernelPoints; ++k) {
    const std::uint32_t idx = lut.tables[k][centre];
    std::printf("%s,%u,%u\n", std::string(slot_name(static_cast<KernelSlot>(k))).c_str(), idx / width, idx % width);
  }
  write_ppm(img, out);
  return 0;
}

int cmd_conv_apply(const std::string& lut_path, const std::string& in, const std::string& out,
                   const std::string& preset) {
  require_file(lut_path, "LUT");
  require_file(in, "input image");
  require_output_parent(out);
  auto lut = std::make_shared<KernelLut>(load_lut(lut_path));
  const Tensor x = from_rgb_image(read_ppm(in));
  if (x.height() != lut->grid.height() || x.width() != lut->grid.width()) {
    throw ShapeError("image is " + std::to_string(x.height()) + "x" + std::to_string(x.width()) + " but the LUT is " +
                     std::to_string(lut->grid.height()) + "x" + std::to_string(lut->grid.width()));
  }
  SphericalConv layer("conv_apply", lut, x.channels(), x.channels());
  apply_preset(layer, preset);
  write_pfm(to_float_image(layer.forward(x)), out);
  return 0;
}

int cmd_synth(const std::string& out, int count, std::uint64_t seed, int height, int width) {
  const fs::path dir(out);
  require_output_parent(dir);
  const auto data = make_dataset(count, ErpGrid(height, width), seed);
  save_dataset(data, dir, seed);
  std::printf("wrote %d scenes to %s\n", count, out.c_str());
  return 0;
}

int cmd_train_teacher(const TrainFlags& f) {
  require_dir(f.data, "dataset");
  require_output_parent(f.out);
  if (!f.loss_csv.empty()) require_output_parent(f.loss_csv);
  const TrainConfig cfg = resolve_config(f);
  const auto data = load_dataset(f.data);
  TeacherRun run = train_teacher(data, cfg);
  save_teacher(run.net, f.out);
  if (!f.loss_csv.empty()) write_loss_csv(run.curve, f.loss_csv);
  print_curve_summary(run.curve);
  return 0;
}

int cmd_train_student(const TrainFlags& f) {
  require_dir(f.data, "dataset");
  require_output_parent(f.out);
  if (!f.loss_csv.empty()) require_output_parent(f.loss_csv);
  const TrainConfig cfg = resolve_config(f);
  const bool needs_teacher = effective_lambda(cfg) > 0.0;
  if (needs_teacher && f.teacher.empty()) throw InvalidArgument("--teacher is required when distillation is on");
  if (needs_teacher) require_file(f.teacher, "teacher checkpoint");

  const auto data = load_dataset(f.data);
  std::optional<TeacherNet> teacher;
  if (needs_teacher) {
    teacher.emplace();
    load_teacher(*teacher, f.teacher);
  }
  LutCache luts;
  StudentRun run = train_student(data, teacher ? &*teacher : nullptr, cfg, luts);
  save_student(run.net, cfg, f.out);
  if (!f.loss_csv.empty()) write_loss_csv(run.curve, f.loss_csv);
  print_curve_summary(run.curve);
  return 0;
}

int cmd_eval(const std::string& data_dir, const std::string& ckpt_path) {
  require_dir(data_dir, "dataset");
  require_file(ckpt_path, "checkpoint");
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const auto data = load_dataset(data_dir);
  const auto model = ckpt.meta.find("model");
  if (model == ckpt.meta.end()) throw FormatError(ckpt_path + " has no model metadata");

  DepthMetrics m;
  if (model->second == "teacher") {
    TeacherNet net;
    restore_parameters(ckpt, net.parameters());
    m = evaluate_teacher(net, data);
  } else if (model->second == "student") {
    TrainConfig cfg;
    if (auto v = ckpt.meta.find("variant"); v != ckpt.meta.end()) apply_config_value(cfg, "variant", v->second);
    if (auto b = ckpt.meta.find("band_fraction"); b != ckpt.meta.end()) {
      apply_config_value(cfg, "band_fraction", b->second);
    }
    LutCache luts;
    StudentNet net(luts, student_options_for(cfg));
    restore_parameters(ckpt, net.parameters());
    m = evaluate_student(net, data);
  } else {
    throw FormatError(ckpt_path + ": unknown model '" + model->second + "'");
  }
  std::printf("%s\n%s\n", metrics_csv_header().c_str(), metrics_csv_row(m).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical convolution toolkit for equirectangular panoramas"};
  app.require_subcommand(1);

  int height = 64, width = 128, row = 0, col = 0, scale = 1, count = 50;
  std::string out, lut_path, in, preset, data, checkpoint;
  std::uint64_t seed = 0;

  auto* lut_cmd = app.add_subcommand("lut-build", "Compile the nine kernel index tables for a grid");
  lut_cmd->add_option("--height", height)->required();
  lut_cmd->add_option("--width", width)->required();
  lut_cmd->add_option("--out", out)->required();

  auto* show = app.add_subcommand("kernel-show", "Draw the kernel footprint of one pixel");
  show->add_option("--height", height)->required();
  show->add_option("--width", width)->required();
  show->add_option("--row", row)->required();
  show->add_option("--col", col)->required();
  show->add_option("--out", out, "PPM to write")->required();
  show->add_option("--scale", scale, "Pixel magnification of the image")->check(CLI::Range(1, 16));

  auto* conv = app.add_subcommand("conv-apply", "Run one spherical convolution with a fixed weight preset");
  conv->add_option("--lut", lut_path)->required();
  conv->add_option("--in", in, "Input PPM")->required();
  conv->add_option("--out", out, "Output PFM")->required();
  conv->add_option("--weights", preset, "average | center-identity | ring-laplacian")
      ->required()
      ->check(CLI::IsMember({"average", "center-identity", "ring-laplacian"}));

  auto* synth = app.add_subcommand("synth", "Render a synthetic room dataset");
  synth->add_option("--out", out, "Dataset directory")->required();
  synth->add_option("--count", count)->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed);
  synth->add_option("--height", height);
  synth->add_option("--width", width);

  TrainFlags teacher_flags, student_flags;
  auto* tt = app.add_subcommand("train-teacher", "Train the depth autoencoder");
  add_common_train_options(tt, teacher_flags);

  auto* ts = app.add_subcommand("train-student", "Train the RGB-to-depth network");
  add_common_train_options(ts, student_flags);
  ts->add_option("--teacher", student_flags.teacher, "Teacher checkpoint for latent distillation");
  student_flags.lambda_opt =
      ts->add_option("--lambda-distill", student_flags.lambda, "Distillation weight")->check(CLI::NonNegativeNumber);
  student_flags.variant_opt = ts->add_option("--variant", student_flags.variant, "full | no-sff | no-teacher")
                                  ->check(CLI::IsMember({"full", "no-sff", "no-teacher"}));

  auto* ev = app.add_subcommand("eval", "Print depth metrics of a checkpoint on a dataset");
  ev->add_option("--data", data)->required();
  ev->add_option("--checkpoint", checkpoint)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*lut_cmd) return cmd_lut_build(height, width, out);
    if (*show) return cmd_kernel_show(height, width, row, col, out, scale);
    if (*conv) return cmd_conv_apply(lut_path, in, out, preset);
    if (*synth) return cmd_synth(out, count, seed, height, width);
    if (*tt) return cmd_train_teacher(teacher_flags);
    if (*ts) return cmd_train_student(student_flags);
    if (*ev) return cmd_eval(data, checkpoint);
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
