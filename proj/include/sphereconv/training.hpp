#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "sphereconv/checkpoint.hpp"
#include "sphereconv/lut.hpp"
#include "sphereconv/metrics.hpp"
#include "sphereconv/networks.hpp"
#include "sphereconv/synth.hpp"

namespace sphereconv {

// Plain-text key=value training configuration; '#' starts a comment.
// Keys: seed, epochs, steps, lr, lambda_distill, band_fraction, variant,
// augment_yaw.
struct TrainConfig {
  std::uint64_t seed = 0;
  int epochs = 1;
  long max_steps = 0;  // 0 = run all epochs
  double lr = 1e-4;
  double lambda_distill = 0.1;
  double band_fraction = 1.0 / 3.0;
  std::string variant = "full";  // full | no-sff | no-teacher
  bool augment_yaw = false;      // roll each sample by a random multiple of 8 columns
};

// Overrides fields of `base` with the file contents. Throws IoError or
// InvalidArgument (unknown key, unparsable value).
TrainConfig load_config(const std::filesystem::path& path, TrainConfig base = {});
void apply_config_value(TrainConfig& cfg, const std::string& key, const std::string& value);

// Student architecture for a variant name. Throws InvalidArgument.
StudentOptions student_options_for(const TrainConfig& cfg);
// Distillation weight actually used for a variant (0 for no-teacher).
double effective_lambda(const TrainConfig& cfg);

struct LossRecord {
  long step = 0;
  double total = 0.0;
  double supervised = 0.0;
  double distill = 0.0;
};

void write_loss_csv(const std::vector<LossRecord>& curve, const std::filesystem::path& path);

struct TeacherRun {
  TeacherNet net;
  std::vector<LossRecord> curve;
};

// Batch size 1, Adam, berhu reconstruction loss. Throws InvalidArgument on an
// empty dataset and NumericError on a non-finite loss.
TeacherRun train_teacher(const std::vector<RgbdSample>& data, const TrainConfig& cfg);

// Latents of a frozen teacher for every sample's ground-truth depth.
std::vector<Tensor> teacher_latents(TeacherNet& teacher, const std::vector<RgbdSample>& data);

struct StudentRun {
  StudentNet net;
  std::vector<LossRecord> curve;
};

// Minimises berhu(pred, gt) + lambda * mse(latent, teacher_latent(gt)).
// `teacher` may be null only when the effective lambda is 0. The teacher is
// read-only here.
StudentRun train_student(const std::vector<RgbdSample>& data, TeacherNet* teacher, const TrainConfig& cfg,
                         LutCache& luts);

// Mean training objective of `net` over the dataset without updating it.
// `latents` may be empty when lambda == 0.
double student_objective(StudentNet& net, const std::vector<RgbdSample>& data, const std::vector<Tensor>& latents,
                         double lambda);
double teacher_objective(TeacherNet& net, const std::vector<RgbdSample>& data);

DepthMetrics evaluate_student(StudentNet& net, const std::vector<RgbdSample>& data);
DepthMetrics evaluate_teacher(TeacherNet& net, const std::vector<RgbdSample>& data);

// Checkpoint metadata records model kind and student variant.
void save_teacher(TeacherNet& net, const std::filesystem::path& path);
void load_teacher(TeacherNet& net, const std::filesystem::path& path);
void save_student(StudentNet& net, const TrainConfig& cfg, const std::filesystem::path& path);

}  // namespace sphereconv
