#pragma once

#include <ostream>
#include <string>

#include "sphereconv/tensor.hpp"

namespace sphereconv {

struct DepthMetrics {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double rmse = 0.0;
  double rmse_log = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
};

// Standard monocular depth metrics over pixels with mask != 0. Predictions
// are floored at kMinDepth inside the log and ratio terms so that a zero
// prediction yields a large but finite error. Throws InvalidArgument on an
// empty mask or non-positive ground truth under the mask.
DepthMetrics evaluate(const Tensor& pred, const Tensor& gt, const Tensor& mask);

inline constexpr double kMinDepth = 1e-3;

// Running mean of per-image metrics.
class MetricsAccumulator {
 public:
  void add(const DepthMetrics& m);
  DepthMetrics mean() const;
  int count() const { return n_; }

 private:
  DepthMetrics sum_;
  int n_ = 0;
};

// Column order: abs_rel,sq_rel,rmse,rmse_log,d1,d2,d3
std::string metrics_csv_header();
std::string metrics_csv_row(const DepthMetrics& m);

}  // namespace sphereconv
