#pragma once

// Width w(phi) of an odd star perpendicular to one line family and the
// breadth functions s(k, phi): the measure of centre offsets (modulo the line
// spacing) that produce exactly k crossings. Both are pi/n-periodic; the
// closed forms are piecewise on
//   I1 = [0, pi/2n),  I2 = [pi/2n, pi/n),  I3 = [pi/n, 3pi/2n).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"

namespace buffon {

enum class Interval { I1, I2, I3 };

inline void require_odd(const StarSpec &star) {
  validate(star);
  if (star.n % 2 == 0)
    throw ConfigError(ConfigErrc::unsupported_even_n,
                      "closed forms cover odd n only; use the simulator for even n");
}

/// Interval (I1 or I2) containing phi after reduction modulo pi/n.
inline Interval interval_of(const StarSpec &star, double phi) {
  const double t = reduce_angle(phi, pi / star.n);
  return t < pi / (2.0 * star.n) ? Interval::I1 : Interval::I2;
}

/// Evaluates the width branch for `interval` at phi as given (no reduction).
inline double width(const StarSpec &star, double phi, Interval interval) {
  require_odd(star);
  const double h = pi / (2.0 * star.n);
  const double centre = interval == Interval::I3 ? 3.0 * h : h;
  return 2.0 * star.ell * std::cos(h) * std::cos(phi - centre);
}

inline double width(const StarSpec &star, double phi) {
  const double t = reduce_angle(phi, pi / star.n);
  return width(star, t, interval_of(star, t));
}

/// Evaluates the breadth branch s(k, .) for `interval` at phi as given.
inline double breadth(const StarSpec &star, int k, double phi, Interval interval) {
  require_odd(star);
  const int n = star.n;
  const int M = max_intersections(n);
  if (k < 1 || k > M)
    throw std::out_of_range("breadth index k must lie in 1..M");

  const double h = pi / (2.0 * n);
  const double ell = star.ell;

  if (k <= M - 2) {
    const double centre = interval == Interval::I3 ? 3.0 * h : h;
    return 4.0 * ell * std::sin(k * pi / n) * std::sin(h) * std::cos(phi - centre);
  }
  if (k == M - 1) {
    switch (interval) {
    case Interval::I1:
      return ell * (2.0 * std::cos(h) * std::sin(phi) - std::sin(phi - 3.0 * h));
    case Interval::I2:
      return ell * (-2.0 * std::cos(h) * std::sin(phi - 2.0 * h) + std::sin(phi + h));
    case Interval::I3:
      return ell * (2.0 * std::cos(h) * std::sin(phi - 2.0 * h) - std::sin(phi - 5.0 * h));
    }
  }
  // k == M
  switch (interval) {
  case Interval::I1: return -ell * std::sin(phi - h);
  case Interval::I2: return ell * std::sin(phi - h);
  case Interval::I3: return -ell * std::sin(phi - 3.0 * h);
  }
  return 0.0;
}

inline double breadth(const StarSpec &star, int k, double phi) {
  const double t = reduce_angle(phi, pi / star.n);
  return breadth(star, k, t, interval_of(star, t));
}

/// Measure of offsets in [0, spacing) giving exactly k crossings, for every
/// k = 0..n, at fixed rotation phi. Offsets are midpoint-sampled; crossings
/// are counted as sign changes of (endpoint projection - line position).
inline std::vector<double> breadth_oracle_profile(const StarSpec &star, double phi,
                                                  double spacing, std::int64_t resolution) {
  validate(star);
  const int n = star.n;
  std::vector<double> proj(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    proj[static_cast<std::size_t>(j)] = star.ell * std::cos(phi + two_pi * j / n);

  // Lines reachable from any offset in [0, spacing).
  const long first = static_cast<long>(std::floor(-star.ell / spacing));
  const long last = static_cast<long>(std::ceil((spacing + star.ell) / spacing));
  std::vector<double> lines;
  for (long j = first; j <= last; ++j)
    lines.push_back(static_cast<double>(j) * spacing);

  std::vector<std::int64_t> hits(static_cast<std::size_t>(n) + 1, 0);
  const double step = spacing / static_cast<double>(resolution);
  for (std::int64_t s = 0; s < resolution; ++s) {
    const double delta = (static_cast<double>(s) + 0.5) * step;
    int crossings = 0;
    for (double line : lines) {
      if (std::abs(delta - line) > star.ell)
        continue;
      const bool centre_below = delta - line < 0.0;
      for (double p : proj)
        crossings += (centre_below != (delta + p - line < 0.0)) ? 1 : 0;
    }
    if (crossings <= n)
      ++hits[static_cast<std::size_t>(crossings)];
  }

  std::vector<double> measure(hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i)
    measure[i] = static_cast<double>(hits[i]) * step;
  return measure;
}

inline double breadth_oracle(const StarSpec &star, int k, double phi, double spacing,
                             std::int64_t resolution) {
  if (k < 0 || k > star.n)
    return 0.0;
  return breadth_oracle_profile(star, phi, spacing, resolution)[static_cast<std::size_t>(k)];
}

} // namespace buffon
