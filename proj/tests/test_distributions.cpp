#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "buffon/distributions.hpp"

using namespace buffon;

namespace {

const LimitParams kParams{1.0 / 3, 0.25};

// Plain Riemann-Stieltjes sum of F_lambda(xi - eta) against increments of
// F_mu on a fine grid, including the jump of F_mu at 0.
double stieltjes_sum(const LimitParams &p, double xi, int steps = 2'000'000) {
  double s = cdf_limit_marginal(p.lambda, xi) * cdf_limit_marginal(p.mu, 0.0);
  double prev = cdf_limit_marginal(p.mu, 0.0);
  for (int i = 1; i <= steps; ++i) {
    const double eta = 0.5 * i / steps;
    const double cur = cdf_limit_marginal(p.mu, eta);
    const double mid = 0.5 * (i - 0.5) / steps;
    s += cdf_limit_marginal(p.lambda, xi - mid) * (cur - prev);
    prev = cur;
  }
  return s;
}

} // namespace

TEST(CdfFinite, BoundaryPiecesAndHeights) {
  const int n = 5;
  const Ratios r{1.0 / 3, 0.25};
  const double alpha = pi / 10;
  const auto F = cdf_finite(n, r, alpha);
  const auto p = p_exact(n, r, alpha);
  const int M = max_intersections(n);

  EXPECT_EQ(F(-0.1), 0.0);
  EXPECT_EQ(F(2.0 * M / n), 1.0);
  EXPECT_EQ(F(5.0), 1.0);
  EXPECT_EQ(F(0.0), p[0]);
  EXPECT_NEAR(F(0.3), p[0] + p[1], 1e-15);
  EXPECT_EQ(F.masses(), p.p);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double xi = static_cast<double>(i) / n;
    EXPECT_NEAR(F(xi) - F.left_limit(xi), p[i], 1e-14);
  }
  for (int s = 0; s < 200; ++s) {
    const double xi = -0.2 + 1.6 * s / 200;
    EXPECT_LE(F(xi), F(xi + 0.01) + 1e-15);
  }
}

TEST(Marginals, SingleFamilyLaw) {
  const Ratios r{1.0 / 3, 0.25};
  for (int n : {3, 5, 7, 9}) {
    const int M = max_intersections(n);
    const auto pa = marginal_vector(n, r, 0.2, Family::A);
    const auto pb = marginal_vector(n, r, 0.2, Family::B);
    EXPECT_NEAR(pa.total(), 1.0, 1e-12);
    EXPECT_NEAR(pb.total(), 1.0, 1e-12);
    EXPECT_NEAR(pa.mean(), 2.0 * n * r.lambda / pi, 1e-12);
    EXPECT_NEAR(pb.mean(), 2.0 * n * r.mu / pi, 1e-12);
    for (int i = M + 1; i <= 2 * M; ++i) {
      EXPECT_EQ(pa[static_cast<std::size_t>(i)], 0.0);
      EXPECT_EQ(pb[static_cast<std::size_t>(i)], 0.0);
    }
    // No alpha dependence with one family.
    const auto pa2 = marginal_vector(n, r, 1.1, Family::A);
    for (std::size_t i = 0; i < pa.size(); ++i)
      EXPECT_NEAR(pa[i], pa2[i], 1e-14);
  }
}

TEST(Convolution, IndependentReferenceLaw) {
  const Ratios r{1.0 / 3, 0.25};
  const auto star = convolution_vector(5, r, pi / 10);
  const auto pa = marginal_vector(5, r, pi / 10, Family::A);
  const auto pb = marginal_vector(5, r, pi / 10, Family::B);
  EXPECT_NEAR(star.total(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(star[0], pa[0] * pb[0]);

  // Finite-n counts are dependent.
  const auto p = p_exact(5, r, pi / 10);
  double gap = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    gap = std::max(gap, std::abs(star[i] - p[i]));
  EXPECT_GT(gap, 1e-6);
}

TEST(LimitMarginal, Pieces) {
  EXPECT_DOUBLE_EQ(cdf_limit_marginal(kParams, Family::A, 0.0), 1.0 - 2.0 / 3);
  EXPECT_EQ(cdf_limit_marginal(kParams, Family::A, -1.0), 0.0);
  EXPECT_NEAR(cdf_limit_marginal(kParams, Family::A, 0.5 - 1e-12), 1.0, 1e-11);
  EXPECT_EQ(cdf_limit_marginal(kParams, Family::A, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(cdf_limit_marginal(kParams, Family::B, 0.0), 0.5);
}

TEST(Limit, SubstitutionsAndContinuity) {
  const double lam = kParams.lambda;
  const double mu = kParams.mu;
  EXPECT_NEAR(cdf_limit(kParams, 0.0), (1 - 2 * lam) * (1 - 2 * mu), 1e-15);
  EXPECT_NEAR(cdf_limit(kParams, 0.5), 1.0 - pi * lam * mu, 1e-15);
  // Left branch evaluated at 1/2 by continuity.
  const double left_half = 1.0 - 2.0 * (lam + mu) * std::cos(pi / 2) -
                           2.0 * lam * mu * (pi / 2 * std::sin(pi / 2) - 2.0 * std::cos(pi / 2));
  EXPECT_NEAR(left_half, 1.0 - pi * lam * mu, 1e-15);
  EXPECT_NEAR(cdf_limit(kParams, 0.5 - 1e-12), cdf_limit(kParams, 0.5), 1e-11);
  EXPECT_NEAR(cdf_limit(kParams, 1.0 - 1e-12), 1.0, 1e-11);
  EXPECT_EQ(cdf_limit(kParams, 1.0), 1.0);
  EXPECT_EQ(cdf_limit(kParams, -1e-9), 0.0);
  EXPECT_EQ(cdf_limit_left(kParams, 0.0), 0.0);
}

TEST(Limit, ValidCdfOnDenseGrid) {
  for (const LimitParams p : {kParams, LimitParams{0.5, 0.5}, LimitParams{0.1, 0.0}, LimitParams{0.5, 0.2}}) {
    double prev = 0.0;
    for (int s = 0; s <= 20'000; ++s) {
      const double xi = -0.1 + 1.2 * s / 20'000;
      const double v = cdf_limit(p, xi);
      EXPECT_GE(v, prev - 1e-15);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0 + 1e-15);
      prev = v;
    }
  }
}

TEST(Limit, ConvolutionOracleAgrees) {
  for (int s = 0; s < 10; ++s) {
    const double xi = -0.05 + 1.1 * s / 9;
    const double closed = cdf_limit(kParams, xi);
    EXPECT_NEAR(limit_convolution_oracle(kParams, xi), closed, 1e-10) << xi;
    EXPECT_NEAR(stieltjes_sum(kParams, xi), closed, 1e-6) << xi;
  }
}

TEST(SupDistance, ZeroAgainstItselfAndDecreasingInN) {
  const auto F = cdf_finite(7, Ratios{kParams.lambda, kParams.mu}, 0.3);
  EXPECT_EQ(sup_distance(F, F), 0.0);

  std::vector<double> d;
  for (int n : {5, 9, 15, 25})
    d.push_back(sup_distance(cdf_finite(n, Ratios{kParams.lambda, kParams.mu}, pi / 4), kParams));
  for (std::size_t i = 1; i < d.size(); ++i)
    EXPECT_LT(d[i], d[i - 1]);
}

TEST(SupDistance, CatchesJumpSides) {
  // A step CDF placing all mass at 1/2: the sup distance is attained from the
  // left at xi = 1/2, not at any grid point.
  const LimitParams p{0.25, 0.25};
  const StepDistribution atom(2, {0.0, 1.0, 0.0});
  const double expected = std::max(cdf_limit(p, 0.5), 1.0 - cdf_limit(p, 0.5));
  EXPECT_NEAR(sup_distance(atom, p, 7), expected, 1e-15);
}
