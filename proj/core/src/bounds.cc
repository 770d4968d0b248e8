#include "kfwer/bounds.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "kfwer/combinatorics.h"
#include "kfwer/dist.h"
#include "kfwer/gaussian_tails.h"

namespace kfwer {
namespace {

constexpr int kSolverGridPoints = 400;
constexpr double kSolverTolerance = 1e-10;

void require_k_at_least_two(const TestConfig& config, const char* who) {
  if (config.k < 2) {
    throw std::domain_error(std::string(who) + ": requires k >= 2, got k = " +
                            std::to_string(config.k));
  }
}

void require_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw std::domain_error("correlation must lie in [0, 1), got " + std::to_string(rho));
  }
}

// Pair multiplicities grouped by distinct correlation value, so the integral
// sums cost one quadrature per distinct value and a constant matrix reduces
// to count · J exactly.
class FgEvaluator {
 public:
  FgEvaluator(const TestConfig& config, const CorrelationModel& model) : config_(config) {
    require_k_at_least_two(config, "fg_values");
    const int n = config.n;
    if (const auto* eq = std::get_if<Equicorrelated>(&model)) {
      require_rho(eq->rho);
      all_[eq->rho] = choose(n, 2);
      strict_[eq->rho] = choose(n - 1, 2);
      star_[eq->rho] = n - 1.0;
      return;
    }
    const auto& mat = std::get<CorrelationMatrix>(model);
    if (mat.size() != n) {
      throw std::invalid_argument("correlation matrix is " + std::to_string(mat.size()) + "x" +
                                  std::to_string(mat.size()) + " but n = " + std::to_string(n));
    }
    int star = 0;
    double best_row = -1.0;
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        row += mat(i, j);
        if (j > i) {
          all_[mat(i, j)] += 1.0;
          if (j < n - 1) strict_[mat(i, j)] += 1.0;
        }
      }
      // i* = argmax row sum, ties to the smallest index.
      if (row > best_row) {
        best_row = row;
        star = i;
      }
    }
    for (int j = 0; j < n; ++j) {
      if (j != star) star_[mat(star, j)] += 1.0;
    }
  }

  FgValues operator()(double beta, PairSum pairs) const {
    const double n = config_.n;
    const double k = config_.k;
    FgValues out;
    out.cutoff = cutoff_at(config_.n, config_.k, beta);
    std::map<double, double> cache;
    auto weighted = [&](const std::map<double, double>& groups) {
      double total = 0.0;
      for (const auto& [rho, count] : groups) {
        auto it = cache.find(rho);
        if (it == cache.end()) it = cache.emplace(rho, monhor_raw_integral(rho, out.cutoff)).first;
        total += count * it->second;
      }
      return total;
    };
    const double pair_total = weighted(pairs == PairSum::all_pairs ? all_ : strict_);
    const double star_total = weighted(star_);

    out.f = (n - 1.0) * k / (n * (k - 1.0)) * beta * beta + pair_total / (kPi * k * (k - 1.0));
    out.g = beta * (n + k - 1.0) / n - (n - 1.0) / n * (k * beta * beta / n) -
            star_total / (2.0 * kPi * k);
    return out;
  }

 private:
  TestConfig config_;
  std::map<double, double> all_;
  std::map<double, double> strict_;
  std::map<double, double> star_;
};

}  // namespace

TestConfig TestConfig::make(int n, int k, double alpha) {
  if (n < 1) throw std::invalid_argument("n must be >= 1, got " + std::to_string(n));
  if (k < 1 || k > n) {
    throw std::invalid_argument("k must satisfy 1 <= k <= n, got k = " + std::to_string(k) +
                                ", n = " + std::to_string(n));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  return TestConfig{n, k, alpha};
}

CorrelationMatrix::CorrelationMatrix(int n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {}

CorrelationMatrix CorrelationMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw std::invalid_argument("correlation matrix is empty");
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw std::invalid_argument("correlation matrix row " + std::to_string(i + 1) + " has " +
                                  std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(n));
    }
    entries.insert(entries.end(), rows[i].begin(), rows[i].end());
  }
  for (int i = 0; i < n; ++i) {
    if (std::fabs(entries[i * n + i] - 1.0) > 1e-12) {
      throw std::invalid_argument("correlation matrix diagonal entry " + std::to_string(i + 1) +
                                  " is not 1");
    }
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = entries[i * n + j];
      if (!(v >= 0.0 && v < 1.0)) {
        throw std::invalid_argument("correlation entry (" + std::to_string(i + 1) + ", " +
                                    std::to_string(j + 1) + ") must lie in [0, 1)");
      }
      if (std::fabs(v - entries[j * n + i]) > 1e-12) {
        throw std::invalid_argument("correlation matrix is not symmetric at (" +
                                    std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
      }
    }
  }
  return CorrelationMatrix(n, std::move(entries));
}

CorrelationMatrix CorrelationMatrix::constant(int n, double rho) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n), rho));
  for (int i = 0; i < n; ++i) rows[i][i] = 1.0;
  return from_rows(rows);
}

double cutoff_at(int n, int k, double beta) {
  const double q = static_cast<double>(k) * beta / static_cast<double>(n);
  if (!(q > 0.0 && q < 1.0)) {
    throw std::domain_error("cutoff requires 0 < k*beta/n < 1, got " + std::to_string(q));
  }
  return normal_upper_quantile(q);
}

double lr_cutoff(const TestConfig& config) { return cutoff_at(config.n, config.k, config.alpha); }

FgValues fg_values(const TestConfig& config, const CorrelationModel& model, double beta,
                   PairSum pairs) {
  return FgEvaluator(config, model)(beta, pairs);
}

double alpha_star_fg(const TestConfig& config, const CorrelationModel& model, PairSum pairs) {
  require_k_at_least_two(config, "alpha_star_fg");
  const double alpha = config.alpha;
  const FgEvaluator fg(config, model);
  auto qualifies = [&](double beta) { return fg(beta, pairs).min() <= alpha; };
  if (!qualifies(alpha)) return alpha;

  const double upper =
      std::min(1.0, static_cast<double>(config.n) / config.k) * (1.0 - 1e-9);
  if (upper <= alpha) return alpha;

  const double log_lo = std::log(alpha);
  const double log_hi = std::log(upper);
  double best = alpha;
  double next = 0.0;
  bool bracketed = false;
  for (int i = 1; i <= kSolverGridPoints; ++i) {
    const double beta = std::exp(log_lo + (log_hi - log_lo) * i / kSolverGridPoints);
    if (qualifies(beta)) {
      best = beta;
      bracketed = false;
    } else if (!bracketed) {
      next = beta;
      bracketed = true;
    }
  }
  if (!bracketed) return best;

  // Refine between the last qualifying grid point and its failing neighbour.
  double lo = best;
  double hi = next;
  while (hi - lo > kSolverTolerance) {
    const double mid = 0.5 * (lo + hi);
    (qualifies(mid) ? lo : hi) = mid;
  }
  return lo;
}

double alpha_star_independent(const TestConfig& config) {
  require_k_at_least_two(config, "alpha_star_independent");
  const double n = config.n;
  const double k = config.k;
  const double limit = n * (k - 1.0) / ((n - 1.0) * k);
  if (config.alpha > limit) {
    throw std::domain_error("alpha_star_independent: closed form needs alpha <= n(k-1)/((n-1)k) = " +
                            std::to_string(limit));
  }
  return std::sqrt(limit * config.alpha);
}

double alpha_star_negdep(const TestConfig& config) {
  if (config.k == 1) return config.alpha;
  const double k = config.k;
  const double log_value = std::log(static_cast<double>(config.n)) - std::log(k) -
                           log_choose(config.n, config.k) / k + std::log(config.alpha) / k;
  return std::min(1.0, std::exp(log_value));
}

double alpha_star_chernoff(int k, double alpha) {
  if (k < 1) throw std::domain_error("alpha_star_chernoff: k must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha_star_chernoff: alpha in (0, 1)");
  return std::pow(alpha, 1.0 / k) / std::exp(1.0);
}

double chernoff_tail(int n, double p, double a) {
  if (n < 1) throw std::domain_error("chernoff_tail: n must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chernoff_tail: p must lie in (0, 1)");
  const double mean = n * p;
  if (a <= mean) return 1.0;
  const double delta = a / mean - 1.0;
  return std::exp(mean * (delta - (1.0 + delta) * std::log1p(delta)));
}

double hoeffding_kfwer(const TestConfig& config, double alpha_star) {
  if (!(alpha_star > 0.0 && alpha_star <= 1.0)) {
    throw std::domain_error("hoeffding_kfwer: alpha* must lie in (0, 1]");
  }
  const double k = config.k;
  const double gap = 1.0 - alpha_star;
  return std::exp(-2.0 * k * k * gap * gap / config.n);
}

double EquicorrMoments::a(int m) const {
  if (m < 1 || m > static_cast<int>(log_a.size())) {
    throw std::out_of_range("a_m index " + std::to_string(m) + " out of range");
  }
  return std::exp(log_a[m - 1]);
}

EventMoments EquicorrMoments::to_event_moments() const {
  EventMoments mom;
  mom.n = n;
  mom.k = k;
  for (double ls : log_s) mom.s.push_back(std::exp(ls));
  mom.s_prime = s_prime;
  for (int m = 1; m <= k - 1; ++m) mom.max_inter.push_back(a(m));
  return mom;
}

EquicorrMoments equicorr_moments(const TestConfig& config, double rho, double beta) {
  require_k_at_least_two(config, "equicorr_moments");
  require_rho(rho);
  EquicorrMoments out;
  out.n = config.n;
  out.k = config.k;
  out.rho = rho;
  out.cutoff = cutoff_at(config.n, config.k, beta);
  out.log_a = log_joint_tails_equicorr(config.k, out.cutoff, rho);

  const int n = config.n;
  const int k = config.k;
  for (int m = 1; m <= k; ++m) out.log_s.push_back(log_choose(n, m) + out.log_a[m - 1]);
  for (int m = 2; m <= k; ++m) out.s_prime.push_back((n - m + 1.0) * out.a(m));
  for (int m = 1; m <= k - 1; ++m) {
    const double ratio = std::exp(out.log_a[m] - out.log_a[m - 1]);
    const double rm = (static_cast<double>(n) - m) / (static_cast<double>(k) - m) * ratio;
    out.r.push_back(rm);
    if (!out.m_star && rm >= 1.0) out.m_star = m;
  }
  return out;
}

BoundReport bound_report(const TestConfig& config, const CorrelationModel& model, PairSum pairs) {
  require_k_at_least_two(config, "bound_report");
  BoundReport rep;
  rep.config = config;
  if (const auto* eq = std::get_if<Equicorrelated>(&model)) rep.rho = eq->rho;

  const FgValues fg = fg_values(config, model, config.alpha, pairs);
  rep.cutoff = fg.cutoff;
  rep.f_value = fg.f;
  rep.g_value = fg.g;
  rep.existing = std::clamp(fg.min(), 0.0, 1.0);
  rep.proposed = rep.existing;

  if (rep.rho) {
    const EquicorrMoments mom = equicorr_moments(config, *rep.rho, config.alpha);
    const BoundDecomposition dec = combined_bound(mom.to_event_moments());
    rep.a = dec.a;
    rep.b = dec.b;
    rep.m_star = mom.m_star;
    rep.proposed = std::clamp(std::min({dec.a.value, dec.b.value, fg.f, fg.g}), 0.0, 1.0);
  }

  rep.alpha_star_fg = alpha_star_fg(config, model, pairs);
  const double indep_limit =
      config.n * (config.k - 1.0) / ((config.n - 1.0) * static_cast<double>(config.k));
  if (config.alpha <= indep_limit) rep.alpha_star_indep = alpha_star_independent(config);
  rep.alpha_star_negdep = alpha_star_negdep(config);
  rep.alpha_star_chernoff = alpha_star_chernoff(config.k, config.alpha);
  rep.hoeffding = hoeffding_kfwer(config, rep.alpha_star_negdep);
  if (static_cast<double>(config.k) * rep.alpha_star_negdep / config.n < 1.0) {
    rep.nearly_indep = nearly_indep_bound(config, model, rep.alpha_star_negdep);
  } else {
    rep.nearly_indep = std::numeric_limits<double>::infinity();
  }
  return rep;
}

BoundReport proposed_bound_equicorr(const TestConfig& config, double rho) {
  return bound_report(config, Equicorrelated{rho});
}

double log_nearly_indep_bound(const TestConfig& config, const CorrelationModel& model,
                              double alpha_star) {
  const int n = config.n;
  const int k = config.k;
  const double q = static_cast<double>(k) * alpha_star / n;
  const double c = cutoff_at(n, k, alpha_star);

  double max_pair_sum = 0.0;
  if (const auto* eq = std::get_if<Equicorrelated>(&model)) {
    require_rho(eq->rho);
    max_pair_sum = static_cast<double>(k) * (k - 1.0) * eq->rho;
  } else {
    const auto& mat = std::get<CorrelationMatrix>(model);
    if (mat.size() != n) throw std::invalid_argument("correlation matrix size does not match n");
    std::vector<double> off;
    off.reserve(static_cast<std::size_t>(n) * (n - 1));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) off.push_back(mat(i, j));
      }
    }
    const std::size_t take = std::min(off.size(), static_cast<std::size_t>(k) * (k - 1));
    std::nth_element(off.begin(), off.begin() + static_cast<std::ptrdiff_t>(take), off.end(),
                     std::greater<>());
    for (std::size_t i = 0; i < take; ++i) max_pair_sum += off[i];
  }
  return log_choose(n, k) + k * std::log(q) + std::log1p(0.5 * c * c * max_pair_sum);
}

double nearly_indep_bound(const TestConfig& config, const CorrelationModel& model,
                          double alpha_star) {
  return std::exp(log_nearly_indep_bound(config, model, alpha_star));
}

}  // namespace kfwer
