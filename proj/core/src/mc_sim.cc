#include "kfwer/mc_sim.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace kfwer {

CutoffMode parse_cutoff_mode(std::string_view text) {
  if (text == "lr") return CutoffMode::lr;
  if (text == "modified") return CutoffMode::modified;
  throw std::invalid_argument("unknown cutoff mode '" + std::string(text) +
                              "' (expected lr or modified)");
}

std::string_view to_string(CutoffMode mode) {
  return mode == CutoffMode::lr ? "lr" : "modified";
}

void SimSpec::validate() const {
  TestConfig::make(config.n, config.k, config.alpha);
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw std::domain_error("simulation: rho must lie in [0, 1), got " + std::to_string(rho));
  }
  if (reps < 100) throw std::invalid_argument("simulation: reps must be >= 100");
  if (std::isnan(cutoff)) throw std::invalid_argument("simulation: cutoff is NaN");
}

std::vector<double> sample_equicorr_null(int n, double rho, Engine& rng) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw std::domain_error("sample_equicorr_null: rho must lie in [0, 1)");
  }
  std::normal_distribution<double> normal;
  const double s = std::sqrt(rho);
  const double t = std::sqrt(1.0 - rho);
  const double shared = s * normal(rng);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (double& xi : x) xi = shared + t * normal(rng);
  return x;
}

SimResult estimate_kfwer(const SimSpec& spec, unsigned threads) {
  spec.validate();
  const int n = spec.config.n;
  const auto reps = spec.reps;
  std::vector<int> counts(reps);

  if (std::isinf(spec.cutoff)) {
    std::fill(counts.begin(), counts.end(), spec.cutoff < 0.0 ? n : 0);
  } else {
    constexpr std::size_t kBlock = 256;
    const std::size_t blocks = (reps + kBlock - 1) / kBlock;
    const double s = std::sqrt(spec.rho);
    const double t = std::sqrt(1.0 - spec.rho);
    parallel_for(blocks, threads, [&](std::size_t block) {
      const std::uint64_t end = std::min<std::uint64_t>(reps, (block + 1) * kBlock);
      for (std::uint64_t r = block * kBlock; r < end; ++r) {
        Engine rng = make_engine(spec.seed, r);
        std::normal_distribution<double> normal;
        const double shared = s * normal(rng);
        int exceed = 0;
        for (int i = 0; i < n; ++i) exceed += (shared + t * normal(rng) > spec.cutoff) ? 1 : 0;
        counts[r] = exceed;
      }
    });
  }

  SimResult out;
  out.reps = reps;
  out.exceed_histogram.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int c : counts) {
    ++out.exceed_histogram[static_cast<std::size_t>(c)];
    if (c >= spec.config.k) ++out.hits;
  }
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(reps);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(reps));
  return out;
}

double simulation_cutoff(const TestConfig& config, double rho, CutoffMode mode) {
  if (mode == CutoffMode::lr) return lr_cutoff(config);
  return cutoff_at(config.n, config.k, alpha_star_fg(config, Equicorrelated{rho}));
}

const Table1Cell& Table1::cell(int k, double rho) const {
  for (const auto& c : cells) {
    if (c.k == k && std::fabs(c.rho - rho) < 1e-12) return c;
  }
  throw std::out_of_range("table1: no cell for k = " + std::to_string(k) +
                          ", rho = " + std::to_string(rho));
}

Table1 table1_run(double alpha, std::uint64_t reps, std::uint64_t seed, CutoffMode mode,
                  unsigned threads) {
  Table1 table;
  table.alpha = alpha;
  table.reps = reps;
  table.seed = seed;
  table.mode = mode;
  table.ks = kTable1Ks;
  table.rhos = kTable1Rhos;

  std::uint64_t cell_index = 0;
  for (int k : table.ks) {
    for (double rho : table.rhos) {
      const TestConfig config = TestConfig::make(table.n, k, alpha);
      Table1Cell cell;
      cell.k = k;
      cell.rho = rho;
      const BoundReport report = proposed_bound_equicorr(config, rho);
      cell.existing = report.existing;
      cell.proposed = report.proposed;
      cell.alpha_star = mode == CutoffMode::lr ? alpha : report.alpha_star_fg;
      cell.cutoff = cutoff_at(table.n, k, cell.alpha_star);
      const SimSpec spec{config, rho, cell.cutoff, reps, derive_seed(seed, cell_index++)};
      cell.sim = estimate_kfwer(spec, threads);
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

}  // namespace kfwer
