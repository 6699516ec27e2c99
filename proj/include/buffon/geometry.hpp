#pragma once

// Star of needles, two-family line lattice, and exact intersection counting
// for a single posed star.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <numbers>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace buffon {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// n needles of length ell sharing one endpoint, spaced 2*pi/n apart.
struct StarSpec {
  int n = 3;
  double ell = 1.0;
};

// Family A: x*sin(alpha) - y*cos(alpha) = j*a.  Family B: y = j*b.
struct LatticeSpec {
  double a = 1.0;
  double b = 1.0;
  double alpha = pi / 2;
};

// Dimensionless needle-to-spacing ratios lambda = ell/a, mu = ell/b.
struct Ratios {
  double lambda = 0.0;
  double mu = 0.0;

  Ratios swapped() const { return {mu, lambda}; }
};

struct ThrowConfig {
  StarSpec star;
  LatticeSpec lattice;

  Ratios ratios() const {
    return {star.ell / lattice.a, star.ell / lattice.b};
  }
};

// Centre of the star and rotation of the reference needle, measured from the
// normal of the family-A lines.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double phi = 0.0;
};

struct IntersectionCount {
  int k = 0; // family A
  int m = 0; // family B

  int total() const { return k + m; }
  bool operator==(const IntersectionCount &) const = default;
};

/// Largest number of lines of one family an admissible star can cross.
constexpr int max_intersections(int n) { return n % 2 == 0 ? n / 2 : (n + 1) / 2; }
constexpr int max_intersections(const StarSpec &star) { return max_intersections(star.n); }

/// Left-hand side of the admissibility condition
/// 2 * max(lambda, mu) * sin(pi/n * floor(n/2)) <= 1.
inline double admissibility_margin(int n, const Ratios &r) {
  return 2.0 * std::max(r.lambda, r.mu) * std::sin(pi / n * (n / 2));
}

inline void validate(const StarSpec &star) {
  if (star.n < 2)
    throw ConfigError(ConfigErrc::too_few_needles, "star needs n >= 2 needles");
  if (!(star.ell > 0.0) || !std::isfinite(star.ell))
    throw ConfigError(ConfigErrc::nonpositive_length, "needle length must be positive");
}

inline void validate(const LatticeSpec &lattice) {
  if (!(lattice.a > 0.0) || !(lattice.b > 0.0) || !std::isfinite(lattice.a) ||
      !std::isfinite(lattice.b))
    throw ConfigError(ConfigErrc::nonpositive_spacing, "lattice spacings must be positive");
  if (!(lattice.alpha > 0.0) || lattice.alpha > pi / 2)
    throw ConfigError(ConfigErrc::angle_out_of_range, "lattice angle must lie in (0, pi/2]");
}

/// Throws ConfigError unless the star, the lattice and the admissibility
/// condition are all satisfied.
inline void validate(const ThrowConfig &config) {
  validate(config.star);
  validate(config.lattice);
  const double margin = admissibility_margin(config.star.n, config.ratios());
  if (margin > 1.0) {
    std::ostringstream msg;
    msg << "configuration not admissible: 2*max(lambda,mu)*sin(pi/n*floor(n/2)) = "
        << margin << " > 1";
    throw ConfigError(ConfigErrc::not_admissible, msg.str());
  }
}

inline double reduce_angle(double angle, double period) {
  double r = std::fmod(angle, period);
  if (r < 0.0)
    r += period;
  if (r >= period)
    r = 0.0;
  return r;
}

/// Needle directions phi + 2*pi*j/n, reduced to [0, 2*pi).
inline std::vector<double> needle_directions(const StarSpec &star, double phi) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(star.n));
  for (int j = 0; j < star.n; ++j)
    out.push_back(reduce_angle(phi + two_pi * j / star.n, two_pi));
  return out;
}

// phi is measured from the family-A normal (sin(alpha), -cos(alpha)), which
// sits at world angle alpha - pi/2.
inline double world_direction_offset(const LatticeSpec &lattice) {
  return lattice.alpha - pi / 2;
}

/// Number of (needle, line) incidences per family. An endpoint lying exactly
/// on a line counts as a crossing whenever the floor indices differ.
inline IntersectionCount count_intersections(const ThrowConfig &config, const Pose &pose) {
  const auto &[a, b, alpha] = config.lattice;
  const double sin_a = std::sin(alpha);
  const double cos_a = std::cos(alpha);
  const double ell = config.star.ell;
  const int n = config.star.n;

  const double d0 = pose.x * sin_a - pose.y * cos_a;
  const double cell_a = std::floor(d0 / a);
  const double cell_b = std::floor(pose.y / b);
  const double offset = world_direction_offset(config.lattice);

  IntersectionCount count;
  for (int j = 0; j < n; ++j) {
    const double theta = pose.phi + two_pi * j / n + offset;
    const double ex = pose.x + ell * std::cos(theta);
    const double ey = pose.y + ell * std::sin(theta);
    const double d1 = ex * sin_a - ey * cos_a;
    count.k += static_cast<int>(std::abs(std::floor(d1 / a) - cell_a));
    count.m += static_cast<int>(std::abs(std::floor(ey / b) - cell_b));
  }
  return count;
}

template <typename S>
concept UniformSource = requires(S &s) {
  { s.next_uniform() } -> std::convertible_to<double>;
};

/// Uniform pose over the fundamental cell. y is drawn first because the x
/// range of the skewed cell depends on it.
template <UniformSource Source>
Pose sample_pose(const ThrowConfig &config, Source &source) {
  const auto &[a, b, alpha] = config.lattice;
  Pose pose;
  pose.y = b * source.next_uniform();
  pose.x = pose.y * (std::cos(alpha) / std::sin(alpha)) + (a / std::sin(alpha)) * source.next_uniform();
  pose.phi = two_pi * source.next_uniform();
  return pose;
}

} // namespace buffon
