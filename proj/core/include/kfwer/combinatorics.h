#pragma once

#include <cstdint>

namespace kfwer {

/// Thread-safe log Γ(x) for x > 0.
double log_gamma(double x);

/// log C(n, m) through log-gamma; -inf when m < 0 or m > n.
double log_choose(std::int64_t n, std::int64_t m);

/// Exact C(n, m) as a double for small arguments, exp(log_choose) otherwise.
double choose(std::int64_t n, std::int64_t m);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

}  // namespace kfwer
