#pragma once

// Standard normal and Student-t distribution functions. All functions are
// pure; domain violations throw std::domain_error.

namespace kfwer {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;

double normal_pdf(double x);

/// Φ(x). Saturates to 0 or 1 in the far tails.
double normal_cdf(double x);

/// 1 - Φ(x), relative accuracy preserved in the upper tail.
double normal_sf(double x);

/// log(1 - Φ(x)); finite for every finite x.
double log_normal_sf(double x);

/// log Φ(x); finite for every finite x.
double log_normal_cdf(double x);

/// Φ⁻¹(p) for p in (0, 1).
double normal_quantile(double p);

/// Φ⁻¹(1 - q) evaluated from the upper-tail mass q, so tiny q keep full
/// precision. q in (0, 1).
double normal_upper_quantile(double q);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

/// Student-t CDF with `df` degrees of freedom.
double student_t_cdf(double x, int df);

/// Student-t upper tail 1 - F_df(x), accurate for large positive x.
double student_t_sf(double x, int df);

}  // namespace kfwer
