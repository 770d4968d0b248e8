#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "kfwer/event_inequalities.h"

namespace kfwer {

/// A multiple-testing instance: n hypotheses, control of P(>= k false
/// rejections) at level alpha.
struct TestConfig {
  int n = 0;
  int k = 0;
  double alpha = 0.0;

  /// Validating factory; throws std::invalid_argument naming the violated
  /// constraint (1 <= k <= n, 0 < alpha < 1).
  static TestConfig make(int n, int k, double alpha);
};

struct Equicorrelated {
  double rho = 0.0;
};

/// Full correlation matrix with unit diagonal and off-diagonal entries in [0, 1).
class CorrelationMatrix {
 public:
  static CorrelationMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static CorrelationMatrix constant(int n, double rho);

  int size() const { return n_; }
  double operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& entries() const { return entries_; }

 private:
  CorrelationMatrix(int n, std::vector<double> entries);

  int n_ = 0;
  std::vector<double> entries_;
};

using CorrelationModel = std::variant<Equicorrelated, CorrelationMatrix>;

/// How the pairwise integral sum inside f ranges over pairs: every pair
/// i < j, or only i < j < n, which leaves out the pairs that involve the last
/// hypothesis.
enum class PairSum { all_pairs, excluding_last };

/// Φ⁻¹(1 - kβ/n). Throws std::domain_error unless 0 < kβ/n < 1.
double cutoff_at(int n, int k, double beta);

/// Lehmann–Romano cutoff Φ⁻¹(1 - kα/n).
double lr_cutoff(const TestConfig& config);

struct FgValues {
  double f = 0.0;
  double g = 0.0;
  double cutoff = 0.0;
  double min() const { return f < g ? f : g; }
};

/// The two k-FWER upper bounds f and g at level beta (k >= 2).
FgValues fg_values(const TestConfig& config, const CorrelationModel& model, double beta,
                   PairSum pairs = PairSum::all_pairs);

/// Largest β in (alpha, 1) with min{f, g}(β) <= alpha, found on a
/// logarithmic grid and refined by bisection; the returned value always
/// satisfies the constraint. Falls back to alpha when nothing larger does.
double alpha_star_fg(const TestConfig& config, const CorrelationModel& model,
                     PairSum pairs = PairSum::all_pairs);

/// √(n(k-1)α / ((n-1)k)) for independent statistics. Throws
/// std::domain_error unless k >= 2 and α <= n(k-1)/((n-1)k).
double alpha_star_independent(const TestConfig& config);

/// [n / (k C(n,k)^{1/k})] α^{1/k}, in log form and capped at 1.
double alpha_star_negdep(const TestConfig& config);

/// α^{1/k} / e.
double alpha_star_chernoff(int k, double alpha);

/// Chernoff bound [e^δ / (1+δ)^{1+δ}]^{np} on P(Binomial(n, p) >= a) with
/// δ = a/(np) - 1. Returns 1 when a <= np.
double chernoff_tail(int n, double p, double a);

/// Hoeffding bound exp(-2 k² (1 - α*)² / n).
double hoeffding_kfwer(const TestConfig& config, double alpha_star);

/// Equicorrelated moment sequences at cutoff Φ⁻¹(1 - kβ/n).
struct EquicorrMoments {
  int n = 0;
  int k = 0;
  double rho = 0.0;
  double cutoff = 0.0;
  std::vector<double> log_a;    // log a_m, m = 1..k
  std::vector<double> log_s;    // log S_m = log C(n,m) + log a_m
  std::vector<double> s_prime;  // S'_m = (n - m + 1) a_m, m = 2..k
  std::vector<double> r;        // r_m = ((n-m)/(k-m)) a_{m+1}/a_m, m = 1..k-1
  std::optional<int> m_star;    // smallest m with r_m >= 1

  double a(int m) const;
  /// Exchangeable closed forms plugged into the general moment record.
  EventMoments to_event_moments() const;
};

EquicorrMoments equicorr_moments(const TestConfig& config, double rho, double beta);

struct BoundReport {
  TestConfig config;
  std::optional<double> rho;  // set for equicorrelated models
  double cutoff = 0.0;
  double f_value = 0.0;
  double g_value = 0.0;
  double existing = 0.0;  // min{f, g} clamped to [0, 1]
  std::optional<BoundTerm> a;
  std::optional<BoundTerm> b;
  double proposed = 0.0;  // min{A, B, f, g} clamped to [0, 1]
  std::optional<int> m_star;
  double alpha_star_fg = 0.0;
  std::optional<double> alpha_star_indep;
  double alpha_star_negdep = 0.0;
  double alpha_star_chernoff = 0.0;
  double hoeffding = 0.0;  // evaluated at alpha_star_negdep
  double nearly_indep = 0.0;
};

/// Full report under equicorrelation, including the new min{A, B} bound.
BoundReport proposed_bound_equicorr(const TestConfig& config, double rho);

/// Report for an arbitrary model. A and B need the m-wise orthant
/// probabilities and are only available for equicorrelated models; for a
/// general matrix `proposed` equals `existing`.
BoundReport bound_report(const TestConfig& config, const CorrelationModel& model,
                         PairSum pairs = PairSum::all_pairs);

/// C(n,k) (kα*/n)^k max over k-tuples of (1 + (c²/2) Σ_{l≠m} ρ_lm) with
/// c = Φ⁻¹(1 - kα*/n). For a general matrix the max is replaced by the sum of
/// the k(k-1) largest off-diagonal entries, which bounds it from above.
double nearly_indep_bound(const TestConfig& config, const CorrelationModel& model,
                          double alpha_star);
double log_nearly_indep_bound(const TestConfig& config, const CorrelationModel& model,
                              double alpha_star);

}  // namespace kfwer
