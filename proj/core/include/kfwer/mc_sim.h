#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "kfwer/bounds.h"
#include "kfwer/parallel.h"

namespace kfwer {

/// Which rejection cutoff a simulation uses.
///   lr        Φ⁻¹(1 - kα/n), the Lehmann–Romano cutoff
///   modified  Φ⁻¹(1 - kα*/n) with α* solved from min{f, g}
enum class CutoffMode { lr, modified };

CutoffMode parse_cutoff_mode(std::string_view text);
std::string_view to_string(CutoffMode mode);

struct SimSpec {
  TestConfig config;
  double rho = 0.0;
  double cutoff = 0.0;  // may be ±infinity
  std::uint64_t reps = 10000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t reps = 0;
  std::uint64_t hits = 0;
  /// exceed_histogram[j] = number of replicates with exactly j exceedances.
  std::vector<std::uint64_t> exceed_histogram;
};

/// One draw of X_1..X_n under the equicorrelated global null,
/// X_i = √ρ Z₀ + √(1 - ρ) Z_i.
std::vector<double> sample_equicorr_null(int n, double rho, Engine& rng);

/// Fraction of replicates with at least k exceedances of the cutoff.
/// Replicate r draws from its own substream (seed, r), so the result is
/// identical for any thread count.
SimResult estimate_kfwer(const SimSpec& spec, unsigned threads = 0);

/// Cutoff used by a simulation under the given mode.
double simulation_cutoff(const TestConfig& config, double rho, CutoffMode mode);

struct Table1Cell {
  int k = 0;
  double rho = 0.0;
  double cutoff = 0.0;
  double alpha_star = 0.0;  // α for lr mode
  SimResult sim;
  double existing = 0.0;
  double proposed = 0.0;
};

struct Table1 {
  int n = 1000;
  double alpha = 0.05;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  CutoffMode mode = CutoffMode::lr;
  std::vector<int> ks;
  std::vector<double> rhos;
  std::vector<Table1Cell> cells;  // row-major over (k, rho)

  const Table1Cell& cell(int k, double rho) const;
};

inline const std::vector<int> kTable1Ks{25, 50, 75};
inline const std::vector<double> kTable1Rhos{0.1, 0.15, 0.2, 0.25, 0.3};

/// Bounds and simulated k-FWER over the k × ρ grid at n = 1000.
Table1 table1_run(double alpha, std::uint64_t reps, std::uint64_t seed,
                  CutoffMode mode = CutoffMode::lr, unsigned threads = 0);

}  // namespace kfwer
