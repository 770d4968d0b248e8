#include "kfwer/combinatorics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace kfwer {
namespace {

// Pascal's rule in double precision, exact for the sizes used here.
double pascal(int n, int m) {
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 0.0);
  row[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j >= 1; --j) row[j] += row[j - 1];
  }
  return row[m];
}

TEST(LogChoose, MatchesPascalTriangle) {
  for (int n = 0; n <= 80; ++n) {
    for (int m = 0; m <= n; ++m) {
      EXPECT_NEAR(log_choose(n, m), std::log(pascal(n, m)), 1e-12 * (1.0 + std::log(pascal(n, m))))
          << n << " " << m;
    }
  }
}

TEST(LogChoose, OutOfRangeIsMinusInfinity) {
  EXPECT_EQ(log_choose(5, 6), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(log_choose(5, -1), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(choose(5, 6), 0.0);
}

TEST(LogChoose, LargeArgumentsStayFinite) {
  // C(1000, 75) overflows every fixed-width integer; check the value and the
  // symmetry C(n, m) = C(n, n - m).
  const double v = log_choose(1000, 75);
  EXPECT_NEAR(v, log_choose(1000, 925), 1e-9);
  EXPECT_NEAR(v, 263.34464358739938, 1e-9);
  EXPECT_TRUE(std::isfinite(log_choose(10'000'000, 5'000)));
  // Recurrence C(n, m) = C(n, m-1) (n - m + 1) / m.
  EXPECT_NEAR(log_choose(6033, 60) - log_choose(6033, 59), std::log((6033.0 - 59.0) / 60.0), 1e-9);
}

TEST(Choose, ExactForSmallArguments) {
  EXPECT_EQ(choose(60, 30), 118264581564861424.0);
  EXPECT_EQ(choose(1000, 2), 499500.0);
  EXPECT_EQ(choose(4, 2), 6.0);
}

TEST(LogAddExp, HandlesInfinitiesAndLargeGaps) {
  const double ninf = -std::numeric_limits<double>::infinity();
  EXPECT_EQ(log_add_exp(ninf, 3.0), 3.0);
  EXPECT_NEAR(log_add_exp(std::log(2.0), std::log(3.0)), std::log(5.0), 1e-15);
  EXPECT_NEAR(log_add_exp(-1000.0, -1000.0), -1000.0 + std::log(2.0), 1e-12);
}

}  // namespace
}  // namespace kfwer
