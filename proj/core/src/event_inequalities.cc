#include "kfwer/event_inequalities.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "kfwer/combinatorics.h"
#include "kfwer/parallel.h"

namespace kfwer {
namespace {

[[noreturn]] void missing(const char* name, int m) {
  throw std::invalid_argument(std::string("event moments: ") + name + "_" + std::to_string(m) +
                              " is required but missing");
}

}  // namespace

double EventMoments::S(int m) const {
  if (m < 1 || m > static_cast<int>(s.size())) missing("S", m);
  return s[m - 1];
}

double EventMoments::Sprime(int m) const {
  if (m < 2 || m - 2 >= static_cast<int>(s_prime.size())) missing("S'", m);
  return s_prime[m - 2];
}

double EventMoments::maxInter(int m) const {
  if (m < 1 || m > static_cast<int>(max_inter.size())) missing("maxInter", m);
  return max_inter[m - 1];
}

void EventMoments::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("event moments: " + what);
  };
  if (n < 1) fail("n must be >= 1");
  if (k < 1) fail("k must be >= 1");
  for (double v : s) {
    if (!(v >= 0.0)) fail("S_m must be non-negative");
  }
  for (double v : s_prime) {
    if (!(v >= 0.0)) fail("S'_m must be non-negative");
  }
  for (double v : max_inter) {
    if (!(v >= 0.0) || v > 1.0 + 1e-12) fail("maxInter_m must lie in [0, 1]");
  }
  if (!s.empty()) {
    if (s[0] > n + 1e-9) fail("S_1 cannot exceed n");
    for (double v : s_prime) {
      if (v > s[0] + 1e-12 * (1.0 + s[0])) fail("S'_m cannot exceed S_1");
    }
  }
  for (std::size_t i = 1; i < max_inter.size(); ++i) {
    if (max_inter[i] > max_inter[i - 1] + 1e-12) fail("maxInter_m must be non-increasing in m");
  }
}

std::vector<double> bound_a_terms(const EventMoments& mom) {
  if (mom.k < 2) throw std::invalid_argument("bound_A: requires k >= 2");
  const double k = mom.k;
  const double s1 = mom.S(1);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(mom.k - 1));
  for (int m = 2; m <= mom.k; ++m) {
    terms.push_back((s1 - mom.Sprime(m)) / k + (k - m + 1.0) / k * mom.maxInter(m - 1));
  }
  return terms;
}

std::vector<double> bound_b_terms(const EventMoments& mom) {
  if (mom.k < 1) throw std::invalid_argument("bound_B: requires k >= 1");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(mom.k));
  for (int m = 1; m <= mom.k; ++m) {
    const double sm = mom.S(m);
    terms.push_back(sm == 0.0 ? 0.0 : std::exp(std::log(sm) - log_choose(mom.k, m)));
  }
  return terms;
}

namespace {

BoundTerm first_min(const std::vector<double>& terms, int first_m) {
  BoundTerm best{terms.front(), first_m};
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i] < best.value) best = {terms[i], first_m + static_cast<int>(i)};
  }
  return best;
}

}  // namespace

BoundTerm bound_A(const EventMoments& mom) { return first_min(bound_a_terms(mom), 2); }

BoundTerm bound_B(const EventMoments& mom) { return first_min(bound_b_terms(mom), 1); }

BoundDecomposition combined_bound(const EventMoments& mom) {
  BoundDecomposition out;
  out.a = bound_A(mom);
  out.b = bound_B(mom);
  out.combined = std::clamp(std::min(out.a.value, out.b.value), 0.0, 1.0);
  return out;
}

EventSystem::EventSystem(int n, std::vector<double> atoms) : n_(n), atoms_(std::move(atoms)) {
  if (n < 0 || n > kMaxEvents) {
    throw std::invalid_argument("event system: n must lie in [0, " + std::to_string(kMaxEvents) +
                                "]");
  }
  if (atoms_.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("event system: expected 2^n = " +
                                std::to_string(std::size_t{1} << n) + " atoms, got " +
                                std::to_string(atoms_.size()));
  }
  double total = 0.0;
  for (double p : atoms_) {
    if (!(p >= 0.0)) throw std::invalid_argument("event system: atoms must be non-negative");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("event system: atoms sum to " + std::to_string(total) +
                                ", not 1");
  }
}

EventSystem EventSystem::independent(const std::vector<double>& probs) {
  const int n = static_cast<int>(probs.size());
  std::vector<double> atoms(std::size_t{1} << n, 1.0);
  for (std::size_t w = 0; w < atoms.size(); ++w) {
    for (int i = 0; i < n; ++i) atoms[w] *= (w >> i & 1U) ? probs[i] : 1.0 - probs[i];
  }
  return EventSystem(n, std::move(atoms));
}

EventSystem EventSystem::random_dirichlet(int n, double concentration, std::uint64_t seed) {
  if (n < 0 || n > kMaxEvents) throw std::invalid_argument("event system: n out of range");
  Engine rng = make_engine(seed, 0);
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> atoms(std::size_t{1} << n);
  double total = 0.0;
  for (double& a : atoms) {
    a = gamma(rng);
    total += a;
  }
  if (total <= 0.0) {
    atoms.assign(atoms.size(), 0.0);
    atoms[0] = 1.0;
    total = 1.0;
  }
  double renorm = 0.0;
  for (double& a : atoms) {
    a /= total;
    renorm += a;
  }
  // Push the rounding residue into the heaviest atom so the sum is 1.
  *std::max_element(atoms.begin(), atoms.end()) += 1.0 - renorm;
  return EventSystem(n, std::move(atoms));
}

double exact_at_least_k(const EventSystem& system, int k) {
  if (k <= 0) return 1.0;
  double acc = 0.0;
  const auto& atoms = system.atoms();
  for (std::size_t w = 0; w < atoms.size(); ++w) {
    if (std::popcount(w) >= k) acc += atoms[w];
  }
  return acc;
}

EventMoments moments_from_system(const EventSystem& system, int k) {
  if (k < 1) throw std::invalid_argument("moments_from_system: k must be >= 1");
  const int n = system.size();
  const auto& atoms = system.atoms();
  const std::size_t size = atoms.size();

  // Superset sums: inter[T] = P(A_T), weighted[T] = E[#events · 1{A_T}].
  std::vector<double> inter(atoms);
  std::vector<double> weighted(size);
  for (std::size_t w = 0; w < size; ++w) weighted[w] = atoms[w] * std::popcount(w);
  for (int bit = 0; bit < n; ++bit) {
    for (std::size_t w = 0; w < size; ++w) {
      if (!(w >> bit & 1U)) {
        inter[w] += inter[w | (std::size_t{1} << bit)];
        weighted[w] += weighted[w | (std::size_t{1} << bit)];
      }
    }
  }

  EventMoments mom;
  mom.n = n;
  mom.k = k;
  mom.s.assign(static_cast<std::size_t>(k), 0.0);
  mom.s_prime.assign(static_cast<std::size_t>(std::max(k - 1, 0)), 0.0);
  mom.max_inter.assign(static_cast<std::size_t>(std::max(k - 1, 0)), 0.0);
  for (std::size_t w = 0; w < size; ++w) {
    const int card = std::popcount(w);
    if (card >= 1 && card <= k) mom.s[card - 1] += inter[w];
    if (card >= 1 && card <= k - 1) {
      mom.max_inter[card - 1] = std::max(mom.max_inter[card - 1], inter[w]);
    }
    // T = w has m - 1 = card elements; Σ_{j∉T} P(A_j ∩ A_T) = E[(#events - |T|) 1{A_T}].
    const int m = card + 1;
    if (m >= 2 && m <= k) {
      const double sum_outside = std::max(0.0, weighted[w] - card * inter[w]);
      mom.s_prime[m - 2] = std::max(mom.s_prime[m - 2], sum_outside);
    }
  }
  return mom;
}

}  // namespace kfwer
