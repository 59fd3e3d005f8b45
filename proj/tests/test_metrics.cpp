#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "sphereconv/error.hpp"
#include "sphereconv/metrics.hpp"
#include "test_support.hpp"

namespace sphereconv {
namespace {

TEST(Metrics, PerfectPrediction) {
  std::mt19937_64 rng(1);
  const Tensor gt = testing::random_tensor({1, 4, 8}, rng, 0.5, 5.0);
  const auto m = evaluate(gt, gt, Tensor(gt.shape(), 1.0));
  EXPECT_EQ(m.abs_rel, 0.0);
  EXPECT_EQ(m.sq_rel, 0.0);
  EXPECT_EQ(m.rmse, 0.0);
  EXPECT_EQ(m.rmse_log, 0.0);
  EXPECT_EQ(m.delta1, 1.0);
  EXPECT_EQ(m.delta3, 1.0);
}

TEST(Metrics, UniformOverestimate) {
  std::mt19937_64 rng(2);
  const Tensor gt = testing::random_tensor({1, 4, 8}, rng, 0.5, 5.0);
  Tensor pred = gt;
  for (double& v : pred.values()) v *= 1.3;
  const auto m = evaluate(pred, gt, Tensor(gt.shape(), 1.0));
  EXPECT_NEAR(m.abs_rel, 0.3, 1e-12);
  EXPECT_NEAR(m.rmse_log, std::log(1.3), 1e-12);
  EXPECT_EQ(m.delta1, 0.0);
  EXPECT_EQ(m.delta2, 1.0);
  EXPECT_EQ(m.delta3, 1.0);
}

TEST(Metrics, PermutationInvariant) {
  std::mt19937_64 rng(3);
  Tensor gt = testing::random_tensor({1, 1, 32}, rng, 0.5, 5.0);
  Tensor pred = testing::random_tensor({1, 1, 32}, rng, 0.5, 5.0);
  const auto a = evaluate(pred, gt, Tensor(gt.shape(), 1.0));
  std::vector<std::size_t> perm(32);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Tensor gt2 = gt, pred2 = pred;
  for (std::size_t i = 0; i < 32; ++i) {
    gt2[i] = gt[perm[i]];
    pred2[i] = pred[perm[i]];
  }
  const auto b = evaluate(pred2, gt2, Tensor(gt.shape(), 1.0));
  EXPECT_NEAR(a.abs_rel, b.abs_rel, 1e-12);
  EXPECT_NEAR(a.rmse, b.rmse, 1e-12);
  EXPECT_EQ(a.delta1, b.delta1);
}

TEST(Metrics, DeltasMonotone) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const Tensor gt = testing::random_tensor({1, 4, 8}, rng, 0.5, 5.0);
    const Tensor pred = testing::random_tensor({1, 4, 8}, rng, 0.0, 6.0);
    const auto m = evaluate(pred, gt, Tensor(gt.shape(), 1.0));
    EXPECT_LE(m.delta1, m.delta2);
    EXPECT_LE(m.delta2, m.delta3);
  }
}

TEST(Metrics, MaskAndZeroPrediction) {
  Tensor gt(1, 1, 2, 2.0), pred(1, 1, 2, 2.0), mask(1, 1, 2, 1.0);
  pred[1] = 0.0;
  mask[1] = 0.0;
  EXPECT_EQ(evaluate(pred, gt, mask).rmse, 0.0);
  mask[1] = 1.0;
  const auto m = evaluate(pred, gt, mask);
  EXPECT_TRUE(std::isfinite(m.rmse_log));
  EXPECT_GT(m.rmse_log, 1.0);
  EXPECT_THROW(evaluate(pred, gt, Tensor(gt.shape(), 0.0)), InvalidArgument);
  EXPECT_THROW(evaluate(pred, Tensor(1, 1, 2, 0.0), mask), InvalidArgument);
}

TEST(Metrics, AccumulatorAndCsv) {
  MetricsAccumulator acc;
  DepthMetrics a, b;
  a.rmse = 1.0;
  b.rmse = 3.0;
  a.delta1 = 1.0;
  acc.add(a);
  acc.add(b);
  EXPECT_EQ(acc.count(), 2);
  EXPECT_EQ(acc.mean().rmse, 2.0);
  EXPECT_EQ(acc.mean().delta1, 0.5);
  EXPECT_EQ(metrics_csv_header(), "abs_rel,sq_rel,rmse,rmse_log,d1,d2,d3");
  const std::string row = metrics_csv_row(a);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 6);
}

}  // namespace
}  // namespace sphereconv
