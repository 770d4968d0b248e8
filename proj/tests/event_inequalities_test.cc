#include "kfwer/event_inequalities.h"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "kfwer/combinatorics.h"

namespace kfwer {
namespace {

constexpr double kTol = 1e-12;

TEST(ThreeFairCoins, MomentsAndBounds) {
  const auto sys = EventSystem::independent({0.5, 0.5, 0.5});
  const auto mom = moments_from_system(sys, 2);
  EXPECT_NEAR(mom.S(1), 1.5, kTol);
  EXPECT_NEAR(mom.S(2), 0.75, kTol);
  EXPECT_NEAR(mom.Sprime(2), 0.5, kTol);
  EXPECT_NEAR(mom.maxInter(1), 0.5, kTol);

  const auto d = combined_bound(mom);
  EXPECT_NEAR(d.a.value, 0.75, kTol);
  EXPECT_EQ(d.a.argmin, 2);
  EXPECT_NEAR(d.b.value, 0.75, kTol);
  // S_1/C(2,1) and S_2/C(2,2) tie; the smaller m wins.
  EXPECT_EQ(d.b.argmin, 1);
  EXPECT_NEAR(d.combined, 0.75, kTol);
  EXPECT_NEAR(exact_at_least_k(sys, 2), 0.5, kTol);
}

TEST(DegenerateSystems, NullEventsGiveZero) {
  const auto sys = EventSystem::independent({0.0, 0.0, 0.0, 0.0});
  for (int k = 2; k <= 4; ++k) {
    const auto d = combined_bound(moments_from_system(sys, k));
    EXPECT_EQ(d.a.value, 0.0);
    EXPECT_EQ(d.b.value, 0.0);
    EXPECT_EQ(d.combined, 0.0);
    EXPECT_EQ(exact_at_least_k(sys, k), 0.0);
  }
}

TEST(DegenerateSystems, SureEventsGiveOne) {
  const auto sys = EventSystem::independent({1.0, 1.0, 1.0, 1.0, 1.0});
  for (int k = 2; k <= 5; ++k) {
    const auto mom = moments_from_system(sys, k);
    const auto d = combined_bound(mom);
    EXPECT_NEAR(exact_at_least_k(sys, k), 1.0, kTol);
    EXPECT_GE(d.a.value, 1.0 - kTol);
    EXPECT_GE(d.b.value, 1.0 - kTol);
    EXPECT_NEAR(d.combined, 1.0, kTol);
  }
}

TEST(DegenerateSystems, ThresholdOutsideRange) {
  const auto sys = EventSystem::random_dirichlet(4, 1.0, 3);
  EXPECT_EQ(exact_at_least_k(sys, 0), 1.0);
  EXPECT_EQ(exact_at_least_k(sys, 5), 0.0);
  // With k = n + 1 the top moment S_{n+1} is an empty sum.
  const auto mom = moments_from_system(sys, 5);
  EXPECT_EQ(mom.S(5), 0.0);
  EXPECT_EQ(bound_B(mom).value, 0.0);
  EXPECT_THROW(moments_from_system(sys, 0), std::invalid_argument);
}

TEST(Moments, SmallKAndMissingEntries) {
  const auto sys = EventSystem::independent({0.2, 0.3});
  const auto mom = moments_from_system(sys, 1);
  EXPECT_NEAR(bound_B(mom).value, 0.5, kTol);
  EXPECT_THROW(bound_A(mom), std::invalid_argument);

  EventMoments partial;
  partial.n = 5;
  partial.k = 3;
  partial.s = {1.0, 0.2};
  partial.s_prime = {0.3, 0.1};
  partial.max_inter = {0.3, 0.05};
  EXPECT_THROW(bound_B(partial), std::invalid_argument);
  EXPECT_THROW(partial.S(0), std::invalid_argument);
  EXPECT_THROW(partial.Sprime(1), std::invalid_argument);
  EXPECT_THROW(partial.maxInter(3), std::invalid_argument);
  EXPECT_NO_THROW(bound_A(partial));
}

TEST(Moments, ValidationRejectsInconsistentInput) {
  EventMoments mom;
  mom.n = 4;
  mom.k = 2;
  mom.s = {1.0, 0.2};
  mom.s_prime = {0.4};
  mom.max_inter = {0.5};
  EXPECT_NO_THROW(mom.validate());
  mom.s_prime = {1.5};
  EXPECT_THROW(mom.validate(), std::invalid_argument);
  mom.s_prime = {0.4};
  mom.max_inter = {1.5};
  EXPECT_THROW(mom.validate(), std::invalid_argument);
  mom.max_inter = {0.5};
  mom.s = {-0.1, 0.2};
  EXPECT_THROW(mom.validate(), std::invalid_argument);
}

TEST(EventSystemCtor, RejectsBadAtoms) {
  EXPECT_THROW(EventSystem(2, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(EventSystem(1, {0.7, 0.7}), std::invalid_argument);
  EXPECT_THROW(EventSystem(1, {1.5, -0.5}), std::invalid_argument);
  EXPECT_THROW(EventSystem(13, std::vector<double>(1 << 13, 1.0 / (1 << 13))),
               std::invalid_argument);
}

// Atoms depending only on the number of events that occur.
EventSystem exchangeable(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> by_count(n + 1);
  double total = 0.0;
  for (double& w : by_count) total += (w = u(rng));
  std::vector<double> atoms(std::size_t{1} << n);
  for (std::size_t w = 0; w < atoms.size(); ++w) {
    const int c = std::popcount(w);
    atoms[w] = by_count[c] / total / choose(n, c);
  }
  double sum = 0.0;
  for (double a : atoms) sum += a;
  atoms[0] += 1.0 - sum;
  return EventSystem(n, std::move(atoms));
}

TEST(Moments, ExchangeableStructure) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const int n = 8;
    const int k = 5;
    const auto sys = exchangeable(n, seed);
    const auto mom = moments_from_system(sys, k);
    for (int m = 1; m <= k; ++m) {
      const double a_m = mom.S(m) / choose(n, m);
      if (m < k) EXPECT_NEAR(mom.maxInter(m), a_m, kTol);
      if (m >= 2) EXPECT_NEAR(mom.Sprime(m), (n - m + 1) * a_m, kTol);
    }
  }
}

TEST(Moments, StructuralInvariantsOnRandomSystems) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 3 + static_cast<int>(seed % 8);
    const auto sys = EventSystem::random_dirichlet(n, 0.3 + 0.1 * (seed % 7), seed);
    const auto mom = moments_from_system(sys, n);
    EXPECT_NO_THROW(mom.validate());
    // S_1 = E[count]; S_m = E[C(count, m)].
    for (int m = 1; m <= n; ++m) {
      double expected = 0.0;
      for (std::size_t w = 0; w < sys.atoms().size(); ++w) {
        expected += sys.atoms()[w] * choose(std::popcount(w), m);
      }
      EXPECT_NEAR(mom.S(m), expected, 1e-12) << seed << " " << m;
    }
  }
}

// Each individual term bounds P(at least k), not only the minimum.
TEST(Soundness, EveryTermBoundsTheExactProbability) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const double concentration = (seed % 3 == 0) ? 0.05 : (seed % 3 == 1 ? 0.5 : 3.0);
    const auto sys = EventSystem::random_dirichlet(n, concentration, 1000 + seed);
    for (int k = 2; k <= n; ++k) {
      const auto mom = moments_from_system(sys, k);
      const double exact = exact_at_least_k(sys, k);
      const auto a = bound_a_terms(mom);
      const auto b = bound_b_terms(mom);
      for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_GE(a[i], exact - 1e-12) << "seed " << seed << " k " << k << " m " << i + 2;
      }
      for (std::size_t i = 0; i < b.size(); ++i) {
        EXPECT_GE(b[i], exact - 1e-12) << "seed " << seed << " k " << k << " m " << i + 1;
      }
      EXPECT_GE(combined_bound(mom).combined, exact - 1e-12);
      ++checked;
    }
  }
  EXPECT_GT(checked, 1500);
}

TEST(Soundness, IndependentSystemsAcrossMarginals) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 11;
    std::vector<double> p(n);
    for (double& x : p) x = u(rng) * u(rng);
    const auto sys = EventSystem::independent(p);
    for (int k = 2; k <= n; ++k) {
      const auto d = combined_bound(moments_from_system(sys, k));
      EXPECT_GE(d.combined, exact_at_least_k(sys, k) - 1e-12);
      EXPECT_LE(d.combined, 1.0);
    }
  }
}

TEST(CombinedBound, ClampsToUnitInterval) {
  EventMoments mom;
  mom.n = 10;
  mom.k = 2;
  mom.s = {9.0, 30.0};
  mom.s_prime = {0.0};
  mom.max_inter = {1.0};
  const auto d = combined_bound(mom);
  EXPECT_GT(d.a.value, 1.0);
  EXPECT_GT(d.b.value, 1.0);
  EXPECT_EQ(d.combined, 1.0);
}

}  // namespace
}  // namespace kfwer
