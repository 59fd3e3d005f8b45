#include "sphereconv/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "sphereconv/adam.hpp"
#include "sphereconv/error.hpp"
#include "sphereconv/loss.hpp"

namespace sphereconv {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T v{};
  in >> v;
  if (in.fail() || !in.eof()) throw InvalidArgument("config: bad value '" + value + "' for " + key);
  return v;
}

void check_finite(double v, long step, const char* what) {
  if (!std::isfinite(v)) {
    throw NumericError(std::string(what) + " loss became non-finite at step " + std::to_string(step));
  }
}

// Sample order for every epoch, fixed by the seed.
class EpochOrder {
 public:
  EpochOrder(std::size_t n, std::uint64_t seed) : order_(n), rng_(seed ^ 0x9e3779b97f4a7c15ULL) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }
  const std::vector<std::size_t>& next() {
    std::shuffle(order_.begin(), order_.end(), rng_);
    return order_;
  }
  int roll_columns() { return 8 * static_cast<int>(rng_() % (kInputWidth / 8)); }

 private:
  std::vector<std::size_t> order_;
  std::mt19937_64 rng_;
};

}  // namespace

void apply_config_value(TrainConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "epochs") {
    cfg.epochs = parse_number<int>(key, value);
    if (cfg.epochs < 1) throw InvalidArgument("config: epochs must be >= 1");
  } else if (key == "steps") {
    cfg.max_steps = parse_number<long>(key, value);
    if (cfg.max_steps < 0) throw InvalidArgument("config: steps must be >= 0");
  } else if (key == "lr") {
    cfg.lr = parse_number<double>(key, value);
    if (!(cfg.lr > 0)) throw InvalidArgument("config: lr must be positive");
  } else if (key == "lambda_distill") {
    cfg.lambda_distill = parse_number<double>(key, value);
    if (!(cfg.lambda_distill >= 0)) throw InvalidArgument("config: lambda_distill must be >= 0");
  } else if (key == "band_fraction") {
    cfg.band_fraction = parse_number<double>(key, value);
    middle_band(2, cfg.band_fraction);
  } else if (key == "variant") {
    cfg.variant = value;
    student_options_for(cfg);
  } else if (key == "augment_yaw") {
    cfg.augment_yaw = parse_number<int>(key, value) != 0;
  } else {
    throw InvalidArgument("config: unknown key '" + key + "'");
  }
}

TrainConfig load_config(const std::filesystem::path& path, TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  for (std::string line; std::getline(in, line);) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("config: expected key=value, got '" + line + "'");
    apply_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

StudentOptions student_options_for(const TrainConfig& cfg) {
  StudentOptions o;
  o.band_fraction = cfg.band_fraction;
  if (cfg.variant == "full" || cfg.variant == "no-teacher") {
    o.fusion = FusionKind::kSff;
  } else if (cfg.variant == "no-sff") {
    o.fusion = FusionKind::kConcat;
  } else {
    throw InvalidArgument("unknown student variant '" + cfg.variant + "'");
  }
  return o;
}

double effective_lambda(const TrainConfig& cfg) { return cfg.variant == "no-teacher" ? 0.0 : cfg.lambda_distill; }

void write_loss_csv(const std::vector<LossRecord>& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "step,total,supervised,distill\n";
  char buf[128];
  for (const auto& r : curve) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g\n", r.step, r.total, r.supervised, r.distill);
    out << buf;
  }
  if (!out) throw IoError("cannot write " + path.string());
}

TeacherRun train_teacher(const std::vector<RgbdSample>& data, const TrainConfig& cfg) {
  if (data.empty()) throw InvalidArgument("train_teacher: empty dataset");
  TeacherRun run;
  run.net.init(cfg.seed);
  const ParameterList params = run.net.parameters();
  Adam adam({.lr = cfg.lr});
  EpochOrder order(data.size(), cfg.seed);
  long step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t idx : order.next()) {
      if (cfg.max_steps > 0 && step >= cfg.max_steps) return run;
      const RgbdSample& s = data[idx];
      Tensor depth = s.depth, mask = s.mask;
      if (cfg.augment_yaw) {
        const int k = order.roll_columns();
        depth = roll_columns(depth, k);
        mask = roll_columns(mask, k);
      }
      const DepthOutput out = run.net.forward(depth);
      const LossResult loss = berhu_loss(out.depth, depth, mask);
      check_finite(loss.value, step, "teacher");
      zero_grad(params);
      run.net.backward(loss.grad);
      adam.step(params);
      run.curve.push_back({step, loss.value, loss.value, 0.0});
      ++step;
    }
  }
  return run;
}

std::vector<Tensor> teacher_latents(TeacherNet& teacher, const std::vector<RgbdSample>& data) {
  std::vector<Tensor> out;
  out.reserve(data.size());
  for (const auto& s : data) out.push_back(teacher.forward(s.depth).latent);
  return out;
}

StudentRun train_student(const std::vector<RgbdSample>& data, TeacherNet* teacher, const TrainConfig& cfg,
                         LutCache& luts) {
  if (data.empty()) throw InvalidArgument("train_student: empty dataset");
  const double lambda = effective_lambda(cfg);
  std::vector<Tensor> latents;
  if (lambda > 0.0) {
    if (teacher == nullptr) throw InvalidArgument("train_student: distillation needs a teacher");
    latents = teacher_latents(*teacher, data);
  }

  StudentRun run{StudentNet(luts, student_options_for(cfg)), {}};
  run.net.init(cfg.seed);
  const ParameterList params = run.net.parameters();
  Adam adam({.lr = cfg.lr});
  EpochOrder order(data.size(), cfg.seed);
  long step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t idx : order.next()) {
      if (cfg.max_steps > 0 && step >= cfg.max_steps) return run;
      const RgbdSample& s = data[idx];
      Tensor rgb = s.rgb, depth = s.depth, mask = s.mask;
      Tensor target_latent = lambda > 0.0 ? latents[idx] : Tensor();
      if (cfg.augment_yaw) {
        const int k = order.roll_columns();
        rgb = roll_columns(rgb, k);
        depth = roll_columns(depth, k);
        mask = roll_columns(mask, k);
        if (lambda > 0.0) target_latent = roll_columns(target_latent, k / 8);
      }
      const DepthOutput out = run.net.forward(rgb);
      const LossResult sup = berhu_loss(out.depth, depth, mask);
      LossRecord rec{step, sup.value, sup.value, 0.0};
      Tensor d_latent;
      if (lambda > 0.0) {
        LossResult dist = mse_loss(out.latent, target_latent);
        for (double& g : dist.grad.values()) g *= lambda;
        rec.distill = dist.value;
        rec.total = sup.value + lambda * dist.value;
        d_latent = std::move(dist.grad);
      }
      check_finite(rec.total, step, "student");
      zero_grad(params);
      run.net.backward(sup.grad, d_latent);
      adam.step(params);
      run.curve.push_back(rec);
      ++step;
    }
  }
  return run;
}

double student_objective(StudentNet& net, const std::vector<RgbdSample>& data, const std::vector<Tensor>& latents,
                         double lambda) {
  if (data.empty()) throw InvalidArgument("student_objective: empty dataset");
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const DepthOutput out = net.forward(data[i].rgb);
    double v = berhu_loss(out.depth, data[i].depth, data[i].mask).value;
    if (lambda > 0.0) v += lambda * mse_loss(out.latent, latents.at(i)).value;
    sum += v;
  }
  return sum / static_cast<double>(data.size());
}

double teacher_objective(TeacherNet& net, const std::vector<RgbdSample>& data) {
  if (data.empty()) throw InvalidArgument("teacher_objective: empty dataset");
  double sum = 0.0;
  for (const auto& s : data) sum += berhu_loss(net.forward(s.depth).depth, s.depth, s.mask).value;
  return sum / static_cast<double>(data.size());
}

DepthMetrics evaluate_student(StudentNet& net, const std::vector<RgbdSample>& data) {
  MetricsAccumulator acc;
  for (const auto& s : data) acc.add(evaluate(net.forward(s.rgb).depth, s.depth, s.mask));
  return acc.mean();
}

DepthMetrics evaluate_teacher(TeacherNet& net, const std::vector<RgbdSample>& data) {
  MetricsAccumulator acc;
  for (const auto& s : data) acc.add(evaluate(net.forward(s.depth).depth, s.depth, s.mask));
  return acc.mean();
}

void save_teacher(TeacherNet& net, const std::filesystem::path& path) {
  save_checkpoint(make_checkpoint(net.parameters(), {{"model", "teacher"}}), path);
}

void load_teacher(TeacherNet& net, const std::filesystem::path& path) {
  const Checkpoint ckpt = load_checkpoint(path);
  const auto it = ckpt.meta.find("model");
  if (it == ckpt.meta.end() || it->second != "teacher") throw ShapeError(path.string() + " is not a teacher checkpoint");
  restore_parameters(ckpt, net.parameters());
}

void save_student(StudentNet& net, const TrainConfig& cfg, const std::filesystem::path& path) {
  char band[32];
  std::snprintf(band, sizeof band, "%.17g", cfg.band_fraction);
  save_checkpoint(make_checkpoint(net.parameters(), {{"model", "student"}, {"variant", cfg.variant}, {"band_fraction", band}}),
                  path);
}

}  // namespace sphereconv
