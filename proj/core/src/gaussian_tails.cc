#include "kfwer/gaussian_tails.h"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "kfwer/dist.h"
#include "kfwer/parallel.h"

namespace kfwer {
namespace {

constexpr double kQuadTolerance = 1e-11;
constexpr unsigned kQuadDepth = 12;
// Integration stops where the integrand falls this far (in log) below its peak.
constexpr double kLogSpan = 60.0;

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

void require_rho(double rho, double upper, bool inclusive, const char* who) {
  const bool ok = rho >= 0.0 && (inclusive ? rho <= upper : rho < upper);
  if (!ok) {
    throw std::domain_error(std::string(who) + ": correlation must lie in [0, " +
                            std::to_string(upper) + (inclusive ? "]" : ")") + ", got " +
                            std::to_string(rho));
  }
}

// Integrand of the one-factor representation, in log form.
struct FactorIntegrand {
  int m;
  double c;
  double s;  // √ρ
  double t;  // √(1 - ρ)

  double log_value(double z) const {
    return -0.5 * z * z + m * log_normal_sf((c - s * z) / t);
  }

  // d/dz of log_value, ignoring the constant log φ normalizer.
  double slope(double z) const {
    const double u = (c - s * z) / t;
    const double mills = std::exp(-0.5 * u * u - 0.918938533204672742 - log_normal_sf(u));
    return -z + m * (s / t) * mills;
  }
};

// The integrand is log-concave, so its slope is decreasing and has one root.
double find_mode(const FactorIntegrand& g) {
  double lo = -1.0;
  double hi = 1.0;
  while (g.slope(lo) < 0.0) lo *= 2.0;
  while (g.slope(hi) > 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * (1.0 + std::fabs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (g.slope(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double walk_out(const FactorIntegrand& g, double mode, double peak, double direction) {
  double step = 0.5;
  double z = mode + direction * step;
  while (g.log_value(z) > peak - kLogSpan) {
    step *= 2.0;
    z = mode + direction * step;
  }
  return z;
}

}  // namespace

double monhor_raw_integral(double rho, double x) {
  require_rho(rho, 1.0, false, "monhor_raw_integral");
  if (!std::isfinite(x)) throw std::domain_error("monhor_raw_integral: threshold must be finite");
  if (rho == 0.0) return 0.0;
  const double upper = std::asin(rho);
  const double x2 = x * x;
  if (x2 == 0.0) return upper;
  auto f = [x2](double theta) { return std::exp(-x2 / (1.0 + std::sin(theta))); };
  return Kronrod::integrate(f, 0.0, upper, kQuadDepth, kQuadTolerance);
}

double bivariate_upper_orthant(double rho, double c) {
  const double tail = normal_sf(c);
  return tail * tail + monhor_raw_integral(rho, c) / (2.0 * kPi);
}

std::vector<double> log_joint_tails_equicorr(int max_m, double c, double rho) {
  if (max_m < 1) throw std::domain_error("joint_tail_equicorr: m must be >= 1");
  require_rho(rho, kMaxEquicorrelation, true, "joint_tail_equicorr");
  if (std::isnan(c)) throw std::domain_error("joint_tail_equicorr: threshold is NaN");

  std::vector<double> out(static_cast<std::size_t>(max_m));
  if (std::isinf(c)) {
    std::fill(out.begin(), out.end(),
              c < 0.0 ? 0.0 : -std::numeric_limits<double>::infinity());
    return out;
  }
  const double log_marginal = log_normal_sf(c);
  out[0] = log_marginal;
  if (rho == 0.0) {
    for (int m = 2; m <= max_m; ++m) out[m - 1] = m * log_marginal;
    return out;
  }

  const double s = std::sqrt(rho);
  const double t = std::sqrt(1.0 - rho);
  for (int m = 2; m <= max_m; ++m) {
    const FactorIntegrand g{m, c, s, t};
    const double mode = find_mode(g);
    const double peak = g.log_value(mode);
    const double lo = walk_out(g, mode, peak, -1.0);
    const double hi = walk_out(g, mode, peak, +1.0);

    std::array<double, 4> cuts{lo, mode, hi, c / s};
    std::sort(cuts.begin(), cuts.end());
    auto f = [&](double z) { return std::exp(g.log_value(z) - peak); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = std::max(cuts[i], lo);
      const double b = std::min(cuts[i + 1], hi);
      if (b > a) total += Kronrod::integrate(f, a, b, kQuadDepth, kQuadTolerance);
    }
    out[m - 1] = peak - 0.918938533204672742 + std::log(total);
  }
  return out;
}

OrthantProb joint_tail_equicorr(int m, double c, double rho) {
  if (m < 1) throw std::domain_error("joint_tail_equicorr: m must be >= 1");
  OrthantProb p;
  p.m = m;
  p.c = c;
  p.rho = rho;
  if (m == 1) {
    require_rho(rho, kMaxEquicorrelation, true, "joint_tail_equicorr");
    p.log_value = log_normal_sf(c);
  } else {
    p.log_value = log_joint_tails_equicorr(m, c, rho).back();
  }
  p.value = std::exp(p.log_value);
  return p;
}

McEstimate mc_joint_tail(int m, double c, double rho, std::uint64_t reps, std::uint64_t seed,
                         unsigned threads) {
  if (m < 1) throw std::domain_error("mc_joint_tail: m must be >= 1");
  if (reps < 1) throw std::domain_error("mc_joint_tail: reps must be >= 1");
  require_rho(rho, kMaxEquicorrelation, true, "mc_joint_tail");

  const double s = std::sqrt(rho);
  const double t = std::sqrt(1.0 - rho);
  std::array<std::uint64_t, kMcChunks> hits{};
  parallel_for(kMcChunks, threads, [&](std::size_t chunk) {
    const std::uint64_t begin = reps * chunk / kMcChunks;
    const std::uint64_t end = reps * (chunk + 1) / kMcChunks;
    Engine rng = make_engine(seed, chunk);
    std::normal_distribution<double> normal;
    std::uint64_t local = 0;
    for (std::uint64_t r = begin; r < end; ++r) {
      const double shared = s * normal(rng);
      bool all = true;
      for (int i = 0; i < m; ++i) {
        // Draw every coordinate so the stream layout does not depend on c.
        if (shared + t * normal(rng) <= c) all = false;
      }
      local += all ? 1 : 0;
    }
    hits[chunk] = local;
  });

  McEstimate out;
  out.reps = reps;
  for (auto h : hits) out.hits += h;
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(reps);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(reps));
  return out;
}

}  // namespace kfwer
