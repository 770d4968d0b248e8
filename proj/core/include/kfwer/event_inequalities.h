#pragma once

#include <cstdint>
#include <vector>

namespace kfwer {

/// Partial moment information about n events A_1..A_n, enough to bound
/// P(at least k of them occur).
///
///   S_m         sum of P(A_{i1} ∩ ... ∩ A_{im}) over all m-subsets, m = 1..k
///   S'_m        max over (m-1)-subsets T of Σ_{j∉T} P(A_j ∩ A_T),  m = 2..k
///   maxInter_m  max over m-subsets of P(A_{i1} ∩ ... ∩ A_{im}),  m = 1..k-1
struct EventMoments {
  int n = 0;
  int k = 0;
  std::vector<double> s;          // s[m-1] = S_m
  std::vector<double> s_prime;    // s_prime[m-2] = S'_m
  std::vector<double> max_inter;  // max_inter[m-1] = maxInter_m

  // Bounds-checked accessors; a missing moment throws std::invalid_argument.
  double S(int m) const;
  double Sprime(int m) const;
  double maxInter(int m) const;

  /// Checks the structural invariants (non-negativity, S'_m <= S_1,
  /// maxInter <= 1 and non-increasing). Throws std::invalid_argument.
  void validate() const;
};

struct BoundTerm {
  double value = 0.0;
  int argmin = 0;
};

/// Per-m terms (S_1 - S'_m)/k + ((k-m+1)/k) maxInter_{m-1} for m = 2..k;
/// element i corresponds to m = i + 2.
std::vector<double> bound_a_terms(const EventMoments& mom);

/// Per-m terms S_m / C(k, m) for m = 1..k; element i corresponds to m = i + 1.
std::vector<double> bound_b_terms(const EventMoments& mom);

/// A := min over 2 <= m <= k of the per-m terms above. Unclamped; ties go to
/// the smaller m. Requires k >= 2.
BoundTerm bound_A(const EventMoments& mom);

/// B := min over 1 <= m <= k of S_m / C(k, m). Unclamped; ties go to the
/// smaller m.
BoundTerm bound_B(const EventMoments& mom);

struct BoundDecomposition {
  BoundTerm a;
  BoundTerm b;
  double combined = 0.0;  // min{A, B} clamped to [0, 1]
};

BoundDecomposition combined_bound(const EventMoments& mom);

/// Explicit joint law of n <= 12 events over the 2^n outcome atoms. Bit i of
/// an atom index is set when A_{i+1} occurs.
class EventSystem {
 public:
  static constexpr int kMaxEvents = 12;

  EventSystem(int n, std::vector<double> atoms);

  /// Independent events with the given marginals.
  static EventSystem independent(const std::vector<double>& probs);

  /// Random joint law with Dirichlet(concentration) atom weights.
  static EventSystem random_dirichlet(int n, double concentration, std::uint64_t seed);

  int size() const { return n_; }
  const std::vector<double>& atoms() const { return atoms_; }

 private:
  int n_;
  std::vector<double> atoms_;
};

/// P(at least k events occur), by summing atoms.
double exact_at_least_k(const EventSystem& system, int k);

/// Exact S, S', maxInter up to order k by enumeration.
EventMoments moments_from_system(const EventSystem& system, int k);

}  // namespace kfwer
