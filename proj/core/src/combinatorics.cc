#include "kfwer/combinatorics.h"

#include <cmath>
#include <limits>
#include <numeric>

namespace kfwer {

double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double log_choose(std::int64_t n, std::int64_t m) {
  if (m < 0 || n < 0 || m > n) return -std::numeric_limits<double>::infinity();
  if (m == 0 || m == n) return 0.0;
  if (m > n / 2) m = n - m;
  if (m < 16) {
    // Short product is more accurate than three lgamma calls that nearly cancel.
    double acc = 0.0;
    for (std::int64_t i = 1; i <= m; ++i) {
      acc += std::log(static_cast<double>(n - m + i)) - std::log(static_cast<double>(i));
    }
    return acc;
  }
  return log_gamma(static_cast<double>(n) + 1.0) - log_gamma(static_cast<double>(m) + 1.0) -
         log_gamma(static_cast<double>(n - m) + 1.0);
}

double choose(std::int64_t n, std::int64_t m) {
  if (m < 0 || n < 0 || m > n) return 0.0;
  if (m > n / 2) m = n - m;
  // Exact while every partial C(n - m + i, i) fits in 64 bits. Dividing out
  // gcd(acc, i) first keeps the intermediate product from overflowing early.
  std::uint64_t acc = 1;
  bool exact = true;
  for (std::int64_t i = 1; i <= m; ++i) {
    const auto top = static_cast<std::uint64_t>(n - m + i);
    const auto g = std::gcd(acc, static_cast<std::uint64_t>(i));
    const std::uint64_t factor = top / (static_cast<std::uint64_t>(i) / g);
    acc /= g;
    if (acc > std::numeric_limits<std::uint64_t>::max() / factor) {
      exact = false;
      break;
    }
    acc *= factor;
  }
  if (exact) return static_cast<double>(acc);
  return std::exp(log_choose(n, m));
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace kfwer
