#pragma once

#include <cstdint>
#include <vector>

namespace kfwer {

/// Largest equicorrelation accepted by the one-factor routines.
inline constexpr double kMaxEquicorrelation = 0.999;

/// J(ρ, x) = ∫₀^ρ (1 - z²)^{-1/2} exp(-x² / (1 + z)) dz for 0 <= ρ < 1.
///
/// Bivariate standard normals with correlation ρ >= 0 satisfy
/// P(X <= x, Y <= x) = Φ(x)² + J(ρ, x) / (2π). The integrand is singular at
/// z = 1, so the integral is taken in θ with z = sin θ.
double monhor_raw_integral(double rho, double x);

/// P(X > c, Y > c) = (1 - Φ(c))² + J(ρ, c) / (2π).
double bivariate_upper_orthant(double rho, double c);

/// Common m-wise upper-orthant probability a_m for equicorrelated normals.
struct OrthantProb {
  int m = 0;
  double c = 0.0;
  double rho = 0.0;
  double value = 0.0;
  double log_value = 0.0;
};

/// a_m = P(X_1 > c, ..., X_m > c) under pairwise correlation ρ in [0, 0.999].
///
/// Uses the one-factor reduction
///   a_m = ∫ φ(z) [1 - Φ((c - √ρ z) / √(1 - ρ))]^m dz,
/// integrating exp(log φ + m log(1 - Φ)) adaptively around the mode of the
/// (log-concave) integrand so that a_m stays accurate when it underflows.
OrthantProb joint_tail_equicorr(int m, double c, double rho);

/// log a_1, ..., log a_{max_m} at a shared threshold and correlation.
std::vector<double> log_joint_tails_equicorr(int max_m, double c, double rho);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t reps = 0;
};

/// Monte Carlo estimate of a_m by one-factor sampling
/// X_i = √ρ Z₀ + √(1 - ρ) Z_i. The work is split into `kMcChunks` seeded
/// substreams whose counts are summed in order, so the result depends only
/// on (seed, reps) and not on `threads`.
McEstimate mc_joint_tail(int m, double c, double rho, std::uint64_t reps, std::uint64_t seed,
                         unsigned threads = 0);

inline constexpr std::size_t kMcChunks = 64;

}  // namespace kfwer
