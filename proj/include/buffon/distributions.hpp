#pragma once

// Distribution of the relative number of intersections X = (count)/n: the
// finite-n step CDF, the per-family marginals and their independent
// convolution, and the n -> infinity limit law with distance diagnostics.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "exact.hpp"
#include "quadrature.hpp"

namespace buffon {

// Right-continuous step CDF with jumps at i/n carrying mass p[i]. Equals 1 at
// and beyond the last jump point.
class StepDistribution {
public:
  StepDistribution() = default;

  StepDistribution(int n, std::vector<double> masses) : masses_(std::move(masses)) {
    if (n < 1 || masses_.empty())
      throw std::invalid_argument("step distribution needs n >= 1 and at least one mass");
    jumps_.reserve(masses_.size());
    cumulative_.reserve(masses_.size());
    double running = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
      jumps_.push_back(static_cast<double>(i) / n);
      running += masses_[i];
      cumulative_.push_back(running);
    }
    cumulative_.back() = 1.0;
  }

  const std::vector<double> &jump_points() const { return jumps_; }
  const std::vector<double> &cumulative() const { return cumulative_; }
  const std::vector<double> &masses() const { return masses_; }

  double operator()(double xi) const {
    const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), xi);
    if (it == jumps_.begin())
      return 0.0;
    return cumulative_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
  }

  /// F(xi-), the limit from the left.
  double left_limit(double xi) const {
    const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), xi);
    if (it == jumps_.begin())
      return 0.0;
    return cumulative_[static_cast<std::size_t>(it - jumps_.begin()) - 1];
  }

private:
  std::vector<double> masses_;
  std::vector<double> jumps_;
  std::vector<double> cumulative_;
};

/// F_{n,alpha}(xi) = sum_{i <= floor(n xi)} p(i, alpha).
inline StepDistribution cdf_finite(const ThrowConfig &config, const ExactOptions &options = {}) {
  return StepDistribution(config.star.n, p_exact(config, options).p);
}

inline StepDistribution cdf_finite(int n, const Ratios &r, double alpha) {
  return StepDistribution(n, p_exact(n, r, alpha).p);
}

/// Step CDF from an arbitrary probability vector (e.g. simulator output for
/// even n).
inline StepDistribution cdf_finite(int n, const ProbabilityVector &p) {
  return StepDistribution(n, p.p);
}

enum class Family { A, B };

/// Count distribution against one family only, padded with zeros to 2M+1.
inline ProbabilityVector marginal_vector(int n, const Ratios &r, double alpha, Family family) {
  const Ratios single = family == Family::A ? Ratios{r.lambda, 0.0} : Ratios{0.0, r.mu};
  ProbabilityVector out = p_exact(n, single, alpha);
  const int M = max_intersections(n);
  for (std::size_t i = static_cast<std::size_t>(M) + 1; i < out.p.size(); ++i)
    out.p[i] = 0.0;
  return out;
}

inline ProbabilityVector marginal_vector(const ThrowConfig &config, Family family) {
  validate(config);
  return marginal_vector(config.star.n, config.ratios(), config.lattice.alpha, family);
}

/// p*(i) = sum_k p_lambda(k) p_mu(i-k): the law the total count would have if
/// the two family counts were independent.
inline ProbabilityVector convolution_vector(int n, const Ratios &r, double alpha) {
  const auto pa = marginal_vector(n, r, alpha, Family::A);
  const auto pb = marginal_vector(n, r, alpha, Family::B);
  ProbabilityVector out;
  out.p.assign(pa.size(), 0.0);
  for (std::size_t i = 0; i < out.p.size(); ++i)
    for (std::size_t k = 0; k <= i; ++k)
      out.p[i] += pa.p[k] * pb.p[i - k];
  return out;
}

inline ProbabilityVector convolution_vector(const ThrowConfig &config) {
  validate(config);
  return convolution_vector(config.star.n, config.ratios(), config.lattice.alpha);
}

// Parameters of the n -> infinity limit; a valid CDF needs 2*max <= 1.
struct LimitParams {
  double lambda = 0.0;
  double mu = 0.0;
};

inline void validate(const LimitParams &params) {
  if (!(params.lambda >= 0.0) || !(params.mu >= 0.0) ||
      2.0 * std::max(params.lambda, params.mu) > 1.0)
    throw ConfigError(ConfigErrc::not_admissible, "limit law needs 0 <= lambda, mu <= 1/2");
}

/// Single-family limit: 0, 1 - 2 ratio cos(pi xi) on [0, 1/2), then 1.
inline double cdf_limit_marginal(double ratio, double xi) {
  if (xi < 0.0)
    return 0.0;
  if (xi < 0.5)
    return 1.0 - 2.0 * ratio * std::cos(pi * xi);
  return 1.0;
}

inline double cdf_limit_marginal(const LimitParams &params, Family family, double xi) {
  return cdf_limit_marginal(family == Family::A ? params.lambda : params.mu, xi);
}

/// Limit law of the relative number of intersections; independent of alpha.
inline double cdf_limit(const LimitParams &params, double xi) {
  const double lam = params.lambda;
  const double mu = params.mu;
  if (xi < 0.0)
    return 0.0;
  if (xi < 0.5) {
    const double c = std::cos(pi * xi);
    return 1.0 - 2.0 * (lam + mu) * c - 2.0 * lam * mu * (pi * xi * std::sin(pi * xi) - 2.0 * c);
  }
  if (xi < 1.0)
    return 1.0 - 2.0 * lam * mu * pi * (1.0 - xi) * std::sin(pi * xi);
  return 1.0;
}

/// F(xi-). The limit law has a single atom, at xi = 0.
inline double cdf_limit_left(const LimitParams &params, double xi) {
  return xi <= 0.0 ? 0.0 : cdf_limit(params, xi);
}

/// Stieltjes convolution of F_lambda with F_mu, computed independently of the
/// closed form. dF_mu is an atom 1 - 2mu at 0 plus the density
/// 2 pi mu sin(pi eta) on (0, 1/2).
inline double limit_convolution_oracle(const LimitParams &params, double xi,
                                       double abs_tol = 1e-12) {
  const double atom = (1.0 - 2.0 * params.mu) * cdf_limit_marginal(params.lambda, xi);
  if (params.mu == 0.0)
    return atom;
  auto integrand = [&](double eta) {
    return cdf_limit_marginal(params.lambda, xi - eta) * 2.0 * pi * params.mu * std::sin(pi * eta);
  };
  std::vector<double> breaks{0.0, 0.5};
  for (double kink : {xi, xi - 0.5})
    if (kink > 0.0 && kink < 0.5)
      breaks.push_back(kink);
  return atom + integrate_piecewise(integrand, breaks, abs_tol).value;
}

/// sup over xi of |F_{n,alpha}(xi) - F(xi)|, evaluated on a uniform grid over
/// [-0.1, 1.1] and on both sides of every jump point of the step CDF.
inline double sup_distance(const StepDistribution &finite, const LimitParams &params,
                           int grid = 10000) {
  if (grid < 2)
    throw std::invalid_argument("grid needs at least two points");
  double best = 0.0;
  for (int g = 0; g < grid; ++g) {
    const double xi = -0.1 + 1.2 * g / (grid - 1);
    best = std::max(best, std::abs(finite(xi) - cdf_limit(params, xi)));
  }
  for (double xi : finite.jump_points()) {
    best = std::max(best, std::abs(finite(xi) - cdf_limit(params, xi)));
    best = std::max(best, std::abs(finite.left_limit(xi) - cdf_limit_left(params, xi)));
  }
  for (double xi : {0.0, 1.0}) {
    best = std::max(best, std::abs(finite(xi) - cdf_limit(params, xi)));
    best = std::max(best, std::abs(finite.left_limit(xi) - cdf_limit_left(params, xi)));
  }
  return best;
}

/// sup distance between two step CDFs (both sides of every jump).
inline double sup_distance(const StepDistribution &lhs, const StepDistribution &rhs) {
  double best = 0.0;
  for (const auto *d : {&lhs, &rhs})
    for (double xi : d->jump_points()) {
      best = std::max(best, std::abs(lhs(xi) - rhs(xi)));
      best = std::max(best, std::abs(lhs.left_limit(xi) - rhs.left_limit(xi)));
    }
  return best;
}

} // namespace buffon
