#pragma once

// Direct simulation of the random throw. Works for every n >= 2, including
// even n for which no closed form is provided.

#include <cmath>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "distributions.hpp"
#include "exact.hpp"
#include "geometry.hpp"
#include "philox.hpp"

namespace buffon {

enum class CiMethod { normal, clopper_pearson };

struct SimConfig {
  ThrowConfig throw_config;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;
  int workers = 1;
  CiMethod ci = CiMethod::normal;
};

// z for a two-sided 99% interval.
inline constexpr double ci_z99 = 2.576;

struct SimResult {
  int n = 0;
  int max_count = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> counts; // (k, m) histogram, row-major, (M+1)^2
  ProbabilityVector p_hat;           // over i = k + m
  std::vector<double> ci_half_width; // 99% half-widths for p_hat

  std::uint64_t count(int k, int m) const {
    return counts.at(static_cast<std::size_t>(k * (max_count + 1) + m));
  }

  std::uint64_t total_count(int i) const {
    std::uint64_t s = 0;
    for (int k = 0; k <= max_count; ++k) {
      const int m = i - k;
      if (m >= 0 && m <= max_count)
        s += count(k, m);
    }
    return s;
  }

  bool operator==(const SimResult &) const = default;
};

inline double binomial_sigma(double p, std::uint64_t trials) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
}

inline double ci_half_width(std::uint64_t hits, std::uint64_t trials, CiMethod method) {
  const double N = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / N;
  if (method == CiMethod::normal)
    return ci_z99 * binomial_sigma(p, trials);
  constexpr double tail = 0.005;
  const double x = static_cast<double>(hits);
  const double lower = hits == 0 ? 0.0 : boost::math::ibeta_inv(x, N - x + 1.0, tail);
  const double upper = hits == trials ? 1.0 : boost::math::ibeta_inv(x + 1.0, N - x, 1.0 - tail);
  return 0.5 * (upper - lower);
}

/// Runs `trials` independent throws. Trial t draws from the Philox stream
/// (seed, t), so the histogram is identical for any worker count. Workers
/// take contiguous chunks of ceil(trials / workers) trials.
inline SimResult simulate(const SimConfig &sim) {
  validate(sim.throw_config);
  if (sim.trials < 1)
    throw std::invalid_argument("need at least one trial");
  if (sim.workers < 1)
    throw std::invalid_argument("need at least one worker");

  const ThrowConfig &config = sim.throw_config;
  const int M = max_intersections(config.star);
  const auto dim = static_cast<std::size_t>(M + 1);
  const auto workers = static_cast<std::uint64_t>(sim.workers);
  const std::uint64_t chunk = (sim.trials + workers - 1) / workers;

  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(dim * dim, 0));
  std::vector<std::exception_ptr> failures(workers);

  auto run_chunk = [&](std::uint64_t w) {
    try {
      const std::uint64_t begin = std::min(sim.trials, w * chunk);
      const std::uint64_t end = std::min(sim.trials, begin + chunk);
      auto &hist = partial[w];
      for (std::uint64_t t = begin; t < end; ++t) {
        PhiloxStream stream(sim.seed, t);
        const IntersectionCount c = count_intersections(config, sample_pose(config, stream));
        if (c.k > M || c.m > M)
          throw std::logic_error("intersection count exceeds M for an admissible configuration");
        ++hist[static_cast<std::size_t>(c.k) * dim + static_cast<std::size_t>(c.m)];
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    run_chunk(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w)
      pool.emplace_back(run_chunk, w);
  }
  for (const auto &f : failures)
    if (f)
      std::rethrow_exception(f);

  SimResult result;
  result.n = config.star.n;
  result.max_count = M;
  result.trials = sim.trials;
  result.seed = sim.seed;
  result.counts.assign(dim * dim, 0);
  for (const auto &hist : partial)
    for (std::size_t j = 0; j < hist.size(); ++j)
      result.counts[j] += hist[j];

  const double N = static_cast<double>(sim.trials);
  result.p_hat.p.assign(static_cast<std::size_t>(2 * M + 1), 0.0);
  result.ci_half_width.assign(result.p_hat.p.size(), 0.0);
  for (int i = 0; i <= 2 * M; ++i) {
    const std::uint64_t hits = result.total_count(i);
    result.p_hat.p[static_cast<std::size_t>(i)] = static_cast<double>(hits) / N;
    result.ci_half_width[static_cast<std::size_t>(i)] = ci_half_width(hits, sim.trials, sim.ci);
  }
  return result;
}

inline JointMatrix empirical_joint(const SimResult &result) {
  JointMatrix P(result.max_count);
  const double N = static_cast<double>(result.trials);
  for (int k = 0; k <= result.max_count; ++k)
    for (int m = 0; m <= result.max_count; ++m)
      P.at(k, m) = static_cast<double>(result.count(k, m)) / N;
  return P;
}

inline JointMatrix simulate_joint(const SimConfig &sim) { return empirical_joint(simulate(sim)); }

/// Step CDF of (k + m)/n from the simulated frequencies.
inline StepDistribution empirical_cdf(const SimResult &result, const StarSpec &star) {
  return StepDistribution(star.n, result.p_hat.p);
}

} // namespace buffon
