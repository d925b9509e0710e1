#include "hdridge/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace hdridge {
namespace {

TEST(NormalQuantile, KnownCriticalValues) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile(0.995), 2.5758293035489004, 1e-12);
  EXPECT_DOUBLE_EQ(normal_quantile(0.5), 0.0);
}

TEST(NormalQuantile, SymmetryAndTails) {
  // Symmetry is only testable where 1-p is exactly representable; the tail
  // quantile amplifies the rounding of 1-p by 1/phi(q).
  for (double p : {0.01, 0.2, 0.49}) {
    EXPECT_NEAR(normal_quantile(p), -normal_quantile(1.0 - p), 1e-12) << "p=" << p;
  }
  // Deep-tail spot values.
  EXPECT_NEAR(normal_quantile(1e-6), -4.753424308822899, 1e-9);
  EXPECT_NEAR(normal_quantile(1e-10), -6.361340902404056, 1e-9);
  EXPECT_NEAR(normal_quantile(1e-12), -7.034483825301131, 1e-9);
  EXPECT_THROW(normal_quantile(0.0), std::domain_error);
  EXPECT_THROW(normal_quantile(1.0), std::domain_error);
  EXPECT_THROW(normal_quantile(-0.1), std::domain_error);
}

TEST(RngStream, SubstreamsAreDeterministicAndDistinct) {
  RngStream a = RngStream::substream(42, 7);
  RngStream b = RngStream::substream(42, 7);
  RngStream c = RngStream::substream(42, 8);
  bool any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    any_diff = any_diff || (va != c.next_u64());
  }
  EXPECT_TRUE(any_diff);
}

TEST(RngStream, Uniform01StaysInsideOpenInterval) {
  RngStream rng(123);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngStream, StandardNormalMoments) {
  RngStream rng(2024);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.standard_normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  // 4 standard errors: se(mean) = 1/sqrt(n), se(var) ~= sqrt(2/n).
  EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(var, 1.0, 4.0 * std::sqrt(2.0 / n));
}

}  // namespace
}  // namespace hdridge
