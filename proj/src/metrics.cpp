#include "sphereconv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sphereconv/error.hpp"

namespace sphereconv {

DepthMetrics evaluate(const Tensor& pred, const Tensor& gt, const Tensor& mask) {
  require_same_shape(pred, gt, "evaluate pred/gt");
  require_same_shape(pred, mask, "evaluate pred/mask");
  double abs_rel = 0, sq_rel = 0, sq = 0, sq_log = 0;
  std::size_t d1 = 0, d2 = 0, d3 = 0, n = 0;
  const double t1 = 1.25, t2 = 1.25 * 1.25, t3 = 1.25 * 1.25 * 1.25;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (mask[i] == 0.0) continue;
    const double g = gt[i];
    if (!(g > 0.0)) throw InvalidArgument("evaluate: non-positive ground truth under mask");
    const double p = pred[i];
    const double e = p - g;
    abs_rel += std::abs(e) / g;
    sq_rel += e * e / g;
    sq += e * e;
    const double pc = std::max(p, kMinDepth);
    const double le = std::log(pc) - std::log(g);
    sq_log += le * le;
    const double ratio = std::max(pc / g, g / pc);
    d1 += ratio < t1;
    d2 += ratio < t2;
    d3 += ratio < t3;
    ++n;
  }
  if (n == 0) throw InvalidArgument("evaluate: empty mask");
  const double inv = 1.0 / static_cast<double>(n);
  return {abs_rel * inv, sq_rel * inv, std::sqrt(sq * inv), std::sqrt(sq_log * inv),
          static_cast<double>(d1) * inv, static_cast<double>(d2) * inv, static_cast<double>(d3) * inv};
}

void MetricsAccumulator::add(const DepthMetrics& m) {
  sum_.abs_rel += m.abs_rel;
  sum_.sq_rel += m.sq_rel;
  sum_.rmse += m.rmse;
  sum_.rmse_log += m.rmse_log;
  sum_.delta1 += m.delta1;
  sum_.delta2 += m.delta2;
  sum_.delta3 += m.delta3;
  ++n_;
}

DepthMetrics MetricsAccumulator::mean() const {
  if (n_ == 0) return {};
  const double inv = 1.0 / n_;
  return {sum_.abs_rel * inv, sum_.sq_rel * inv, sum_.rmse * inv, sum_.rmse_log * inv,
          sum_.delta1 * inv,  sum_.delta2 * inv, sum_.delta3 * inv};
}

std::string metrics_csv_header() { return "abs_rel,sq_rel,rmse,rmse_log,d1,d2,d3"; }

std::string metrics_csv_row(const DepthMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g", m.abs_rel, m.sq_rel, m.rmse, m.rmse_log,
                m.delta1, m.delta2, m.delta3);
  return buf;
}

}  // namespace sphereconv
