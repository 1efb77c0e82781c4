#include <gtest/gtest.h>

#include "../acceptance/frozen.hpp"
#include "fft_oracle.hpp"

TEST(FrozenThresholds, MeanK64) {
  const oracle::Bump f{0.1, 0.9, 4, 1.0};
  EXPECT_NEAR(oracle::bump_inverse_error(f, 0.05, 1280, 1001), frozen::kMeanRelErrorK64,
              1e-12 * frozen::kMeanRelErrorK64);
}

TEST(FrozenThresholds, VarianceK64) {
  const oracle::Bump g = oracle::Bump{0.1, 0.9, 4, 1.0}.squared();
  EXPECT_NEAR(oracle::bump_inverse_error(g, 0.1, 1280, 1001), frozen::kVarianceRelErrorK64,
              1e-12 * frozen::kVarianceRelErrorK64);
}

TEST(FrozenThresholds, ChirpOracleMatchesDirectSum) {
  std::vector<oracle::cd> c{{1.0, 0.5}, {-0.25, 2.0}, {0.75, -1.0}, {0.1, 0.0}, {-2.0, 0.3}};
  const double xi0 = -0.7, h = 0.35, dx = 0.01;
  const auto fast = oracle::chirp_inverse(c, xi0, h, 101, dx);
  for (std::size_t m = 0; m < 101; ++m) {
    oracle::cd s{};
    for (std::size_t j = 0; j < c.size(); ++j) {
      s += c[j] * std::polar(1.0, (xi0 + j * h) * m * dx);
    }
    s /= 2.0 * oracle::kPi;
    EXPECT_NEAR(std::abs(fast[m] - s), 0.0, 1e-14);
  }
}
