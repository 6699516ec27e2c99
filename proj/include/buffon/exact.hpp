#pragma once

// Exact intersection-count distribution for an odd star on a two-family
// lattice: the coefficient functions f0..f9, the joint law P(E_{k,m}) of the
// per-family counts, the total-count probabilities p(i), and an independent
// quadrature route to the joint law.

#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "breadth.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"

namespace buffon {

// Two published forms of p(M) for n = 3. They differ by a factor sin(pi/n)
// on the f7 term; the quadrature oracle endorses `theorem`.
enum class PmN3Form { theorem, proof };

struct ExactOptions {
  PmN3Form pm_n3 = PmN3Form::theorem;
  // Additive offsets applied to f0..f9. Only used to check that the
  // verification harness notices a corrupted coefficient.
  std::array<double, 10> f_shift{};
};

inline double g(double x, double alpha_eff) { return std::sin(x) + alpha_eff * std::cos(x); }
inline double h(double x, double alpha_eff) { return std::sin(x) - alpha_eff * std::cos(x); }

/// f0..f9 evaluated at the reduced angle alpha_eff in [0, pi/2n].
inline std::array<double, 10> f_coefficients(int n, double alpha_eff,
                                             const ExactOptions &options = {}) {
  const double q = pi / n;
  const double al = alpha_eff;
  auto G = [al](double x) { return g(x, al); };
  auto H = [al](double x) { return h(x, al); };

  const double base = q * std::cos(al) + G(q - al) + H(al);
  const double half = 2.0 * q * std::cos(q / 2) * std::cos(al) + G(1.5 * q - al) -
                      G(q / 2 - al) + H(q / 2 + al);
  const double sin_half_sq = std::sin(q / 2) * std::sin(q / 2);

  std::array<double, 10> f{};
  f[0] = 2.0 * base * std::cos(q / 2) * std::cos(q / 2);
  f[1] = base * std::sin(q);
  f[2] = half * std::sin(q);
  f[3] = G(q / 2 - al) * std::sin(q);
  f[4] = base * sin_half_sq;
  f[5] = half * sin_half_sq;
  f[6] = G(q / 2 - al) * sin_half_sq;
  f[7] = q * (3.0 - 2.0 * std::cos(2.0 * q)) * std::cos(al) - G(3.0 * q - al) +
         3.0 * G(2.0 * q - al) - G(q - al) + 7.0 * H(al) - H(q + al) - H(2.0 * q + al);
  f[8] = -q * std::cos(al) - G(2.0 * q - al) + 2.0 * G(q - al) - 4.0 * H(al) + H(q + al);
  f[9] = q * std::cos(al) - G(q - al) + 3.0 * H(al);

  for (std::size_t j = 0; j < f.size(); ++j)
    f[j] += options.f_shift[j];
  return f;
}

inline double f_coeff(int j, double alpha_eff, const StarSpec &star) {
  require_odd(star);
  if (j < 0 || j > 9)
    throw std::out_of_range("coefficient index must lie in 0..9");
  return f_coefficients(star.n, alpha_eff)[static_cast<std::size_t>(j)];
}

// alpha_raw = delta + (mirrored ? pi/n - alpha_eff : alpha_eff)
struct AlphaReduced {
  double alpha_raw = 0.0;
  double alpha_eff = 0.0;
  double delta = 0.0;
  bool mirrored = false;
};

/// Folds alpha into [0, pi/2n] using pi/n-periodicity and the mirror symmetry
/// about pi/2n. Multiples of pi/n within rounding snap to alpha_eff = 0.
inline AlphaReduced reduce_alpha(int n, double alpha) {
  constexpr double snap = 1e-12;
  const double q = pi / n;
  const double turns = alpha / q;
  double whole = std::floor(turns);
  if (std::abs(turns - std::round(turns)) < snap)
    whole = std::round(turns);

  AlphaReduced out;
  out.alpha_raw = alpha;
  out.delta = whole * q;
  double rest = std::max(0.0, alpha - out.delta);
  if (rest > q / 2 && std::abs(rest - q / 2) > snap) {
    out.mirrored = true;
    rest = std::max(0.0, q - rest);
  } else {
    rest = std::min(rest, q / 2);
  }
  out.alpha_eff = rest;
  return out;
}

// P(E_{k,m}) for 0 <= k, m <= M, row k = family A, column m = family B.
class JointMatrix {
public:
  JointMatrix() = default;
  explicit JointMatrix(int max_count)
      : max_count_(max_count),
        entries_(static_cast<std::size_t>((max_count + 1) * (max_count + 1)), 0.0) {}

  int max_count() const { return max_count_; }
  int dim() const { return max_count_ + 1; }

  double &at(int k, int m) { return entries_[index(k, m)]; }
  double at(int k, int m) const { return entries_[index(k, m)]; }

  double sum() const { return std::accumulate(entries_.begin(), entries_.end(), 0.0); }

  /// p(i) = sum over k of P(E_{k, i-k}), i = 0..2M.
  std::vector<double> diagonal_sums() const {
    std::vector<double> p(static_cast<std::size_t>(2 * max_count_ + 1), 0.0);
    for (int k = 0; k <= max_count_; ++k)
      for (int m = 0; m <= max_count_; ++m)
        p[static_cast<std::size_t>(k + m)] += at(k, m);
    return p;
  }

  JointMatrix transposed() const {
    JointMatrix t(max_count_);
    for (int k = 0; k <= max_count_; ++k)
      for (int m = 0; m <= max_count_; ++m)
        t.at(m, k) = at(k, m);
    return t;
  }

  const std::vector<double> &entries() const { return entries_; }

private:
  std::size_t index(int k, int m) const {
    if (k < 0 || m < 0 || k > max_count_ || m > max_count_)
      throw std::out_of_range("joint matrix index out of range");
    return static_cast<std::size_t>(k * (max_count_ + 1) + m);
  }

  int max_count_ = 0;
  std::vector<double> entries_;
};

// p[i] = probability of exactly i intersections in total.
struct ProbabilityVector {
  std::vector<double> p;

  std::size_t size() const { return p.size(); }
  double operator[](std::size_t i) const { return p[i]; }
  bool operator==(const ProbabilityVector &) const = default;

  double total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

  double mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      s += static_cast<double>(i) * p[i];
    return s;
  }
};

/// Checks the dimensionless parameters used by the closed forms.
inline void validate_exact(int n, const Ratios &r) {
  require_odd(StarSpec{n, 1.0});
  if (n < 3)
    throw ConfigError(ConfigErrc::too_few_needles, "closed forms need odd n >= 3");
  if (!(r.lambda >= 0.0) || !(r.mu >= 0.0))
    throw ConfigError(ConfigErrc::nonpositive_spacing, "lambda and mu must be nonnegative");
  if (admissibility_margin(n, r) > 1.0)
    throw ConfigError(ConfigErrc::not_admissible,
                      "configuration not admissible: 2*max(lambda,mu)*sin(pi/n*floor(n/2)) > 1");
}

inline void require_reduced(int n, double alpha_eff) {
  if (!(alpha_eff >= 0.0) || alpha_eff > pi / (2.0 * n) * (1.0 + 1e-12))
    throw std::domain_error("alpha_eff must lie in [0, pi/2n]; call reduce_alpha first");
}

/// Closed-form joint law at the reduced angle.
inline JointMatrix joint_matrix(int n, const Ratios &r, double alpha_eff,
                                const ExactOptions &options = {}) {
  validate_exact(n, r);
  require_reduced(n, alpha_eff);

  const int M = max_intersections(n);
  const auto f = f_coefficients(n, alpha_eff, options);
  const double q = pi / n;
  const double lam = r.lambda;
  const double mu = r.mu;
  const double L = n * lam * mu / pi;

  const double edge_mid = 4.0 * n / pi * (std::cos(q / 2) - std::pow(std::cos(3.0 * q / 4), 2));
  const double edge_top = 4.0 * n / pi * std::pow(std::sin(q / 4), 2);
  const double inner = 8.0 * n / pi * std::pow(std::sin(q / 2), 2);
  auto sk = [q](int k) { return std::sin(k * q); };

  JointMatrix P(M);
  for (int k = 0; k <= M; ++k) {
    for (int m = 0; m <= M; ++m) {
      const bool k_inner = k >= 1 && k <= M - 2;
      const bool m_inner = m >= 1 && m <= M - 2;
      double v = 0.0;
      if (k == 0 && m == 0)
        v = 1.0 - (2.0 * n * (lam + mu) / pi * std::sin(q) - L * f[0]);
      else if (k == 0 && m_inner)
        v = inner * mu * sk(m) - 2.0 * L * sk(m) * f[1];
      else if (m == 0 && k_inner)
        v = inner * lam * sk(k) - 2.0 * L * sk(k) * f[1];
      else if (k == 0 && m == M - 1)
        v = edge_mid * mu - L * f[2];
      else if (m == 0 && k == M - 1)
        v = edge_mid * lam - L * f[2];
      else if (k == 0 && m == M)
        v = edge_top * mu - L * f[3];
      else if (m == 0 && k == M)
        v = edge_top * lam - L * f[3];
      else if (k_inner && m_inner)
        v = 8.0 * L * sk(k) * sk(m) * f[4];
      else if (k_inner && m == M - 1)
        v = 4.0 * L * sk(k) * f[5];
      else if (k == M - 1 && m_inner)
        v = 4.0 * L * sk(m) * f[5];
      else if (k_inner && m == M)
        v = 4.0 * L * sk(k) * f[6];
      else if (k == M && m_inner)
        v = 4.0 * L * sk(m) * f[6];
      else if (k == M - 1 && m == M - 1)
        v = L / 2 * f[7];
      else if ((k == M - 1 && m == M) || (k == M && m == M - 1))
        v = L / 2 * f[8];
      else // k == M && m == M
        v = L / 2 * f[9];
      P.at(k, m) = v;
    }
  }
  return P;
}

/// Joint law at an arbitrary lattice angle. A mirrored reduction swaps the
/// roles of the two families: P_{pi/n - a}(E_{k,m})(lambda, mu) equals
/// P_a(E_{m,k})(mu, lambda).
inline JointMatrix joint_matrix_at(int n, const Ratios &r, double alpha,
                                   const ExactOptions &options = {}) {
  const AlphaReduced red = reduce_alpha(n, alpha);
  if (!red.mirrored)
    return joint_matrix(n, r, red.alpha_eff, options);
  return joint_matrix(n, r.swapped(), red.alpha_eff, options).transposed();
}

inline JointMatrix joint_matrix(const ThrowConfig &config, const ExactOptions &options = {}) {
  validate(config);
  return joint_matrix_at(config.star.n, config.ratios(), config.lattice.alpha, options);
}

/// P(E_{k,m}) = (n/pi) * integral over [0, pi/n] of
/// A_k(phi) * B_m(phi + alpha), with A_0 = 1 - lambda*w/ell and
/// A_k = lambda*s(k, .)/ell (B likewise with mu). Valid for any alpha; each
/// entry is integrated panel-wise between the kinks of w and s.
inline JointMatrix joint_matrix_oracle(int n, const Ratios &r, double alpha,
                                       double quadrature_tol = 1e-10) {
  validate_exact(n, r);
  const int M = max_intersections(n);
  const StarSpec unit{n, 1.0};
  const double q = pi / n;

  auto factor = [&unit](int k, double ratio, double phi) {
    return k == 0 ? 1.0 - ratio * width(unit, phi) : ratio * breadth(unit, k, phi);
  };

  std::vector<double> breaks{0.0, q};
  const double shift = reduce_angle(alpha, q);
  for (int j = -4; j <= 6; ++j) {
    const double x = j * q / 2;
    if (x > 0.0 && x < q)
      breaks.push_back(x);
    if (x - shift > 0.0 && x - shift < q)
      breaks.push_back(x - shift);
  }

  JointMatrix P(M);
  for (int k = 0; k <= M; ++k) {
    for (int m = 0; m <= M; ++m) {
      auto integrand = [&](double phi) {
        return factor(k, r.lambda, phi) * factor(m, r.mu, phi + alpha);
      };
      const auto res = integrate_piecewise(integrand, breaks, quadrature_tol * pi / n);
      P.at(k, m) = n / pi * res.value;
    }
  }
  return P;
}

inline JointMatrix joint_matrix_oracle(const ThrowConfig &config, double quadrature_tol = 1e-10) {
  validate(config);
  return joint_matrix_oracle(config.star.n, config.ratios(), config.lattice.alpha, quadrature_tol);
}

/// Total-count probabilities p(i), i = 0..2M, from the per-i closed forms.
/// For n = 3 the index ranges 1..M-2, M+1..2M-3 and the n >= 5 form of
/// p(2M-2) are empty; p(2) uses the dedicated n = 3 form of p(M).
inline ProbabilityVector p_exact(int n, const Ratios &r, double alpha,
                                 const ExactOptions &options = {}) {
  validate_exact(n, r);
  const AlphaReduced red = reduce_alpha(n, alpha);
  const auto f = f_coefficients(n, red.alpha_eff, options);

  const int M = max_intersections(n);
  const double q = pi / n;
  const double S = r.lambda + r.mu;
  const double L = n * r.lambda * r.mu / pi;
  // 2 * sum_{k=1}^{i-1} sin(k q) sin((i-k) q)
  auto pair_sum = [q](int i) { return std::cos(q) / std::sin(q) * std::sin(i * q) - i * std::cos(i * q); };

  ProbabilityVector out;
  out.p.assign(static_cast<std::size_t>(2 * M + 1), 0.0);
  for (int i = 0; i <= 2 * M; ++i) {
    double v = 0.0;
    if (i == 0) {
      v = 1.0 - (2.0 * n * S / pi * std::sin(q) - L * f[0]);
    } else if (i <= M - 2) {
      v = 8.0 * n * S / pi * std::pow(std::sin(q / 2), 2) * std::sin(i * q) -
          4.0 * L * (f[1] * std::sin(i * q) - f[4] * pair_sum(i));
    } else if (i == M - 1) {
      v = 4.0 * n * S / pi * (std::cos(q / 2) - std::pow(std::cos(3.0 * q / 4), 2)) -
          2.0 * L * (f[2] - 2.0 * f[4] * pair_sum(i));
    } else if (i == M && n == 3) {
      const double lin = 4.0 * n * S / pi * std::pow(std::sin(q / 4), 2);
      if (options.pm_n3 == PmN3Form::theorem)
        v = lin - L / 2 * (4.0 * f[3] - f[7]);
      else
        v = lin - 2.0 * L * f[3] + L / 2 * f[7] * std::sin(q);
    } else if (i == M) {
      v = 4.0 * n * S / pi * std::pow(std::sin(q / 4), 2) -
          2.0 * L *
              (f[3] - 4.0 * f[5] * std::sin(q) -
               f[4] * ((n - 5) * std::sin(q / 2) + 2.0 / std::sin(q) * std::cos(2.5 * q)));
    } else if (i <= 2 * M - 3) {
      const int nu = 2 * M - i - 3;
      v = 4.0 * L *
          (2.0 * f[6] * std::sin((i - M) * q) + 2.0 * f[5] * std::sin((i + 1 - M) * q) -
           f[4] * (nu * std::cos(i * q) - std::sin(nu * q) / std::sin(q)));
    } else if (i == 2 * M - 2) {
      v = L / 2 * (16.0 * f[6] * std::cos(1.5 * q) + f[7]);
    } else if (i == 2 * M - 1) {
      v = L * f[8];
    } else {
      v = L / 2 * f[9];
    }
    out.p[static_cast<std::size_t>(i)] = v;
  }
  return out;
}

inline ProbabilityVector p_exact(const ThrowConfig &config, const ExactOptions &options = {}) {
  validate(config);
  return p_exact(config.star.n, config.ratios(), config.lattice.alpha, options);
}

/// 2n(lambda+mu)/pi * sin(pi/n) - n*lambda*mu/pi * f0(alpha).
inline double p_at_least_one(int n, const Ratios &r, double alpha) {
  validate_exact(n, r);
  const double q = pi / n;
  const double f0 = f_coefficients(n, reduce_alpha(n, alpha).alpha_eff)[0];
  return 2.0 * n * (r.lambda + r.mu) / pi * std::sin(q) - n * r.lambda * r.mu / pi * f0;
}

inline double p_at_least_one(const ThrowConfig &config) {
  validate(config);
  return p_at_least_one(config.star.n, config.ratios(), config.lattice.alpha);
}

// Mean number of intersections; holds for every n by additivity.
inline double expectation(int n, const Ratios &r) { return 2.0 * n * (r.lambda + r.mu) / pi; }

inline double expectation(const ThrowConfig &config) {
  validate(config);
  return expectation(config.star.n, config.ratios());
}

} // namespace buffon
