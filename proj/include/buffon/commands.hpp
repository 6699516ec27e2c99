#pragma once

// The five command-line operations as plain functions. Each returns a table,
// a summary object and a manifest; the executable only parses flags and
// writes the result.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "breadth.hpp"
#include "distributions.hpp"
#include "exact.hpp"
#include "montecarlo.hpp"
#include "report.hpp"

namespace buffon {

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct CommandOutput {
  Table table;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  RunManifest manifest;
  int exit_code = 0;
};

namespace detail {

inline nlohmann::ordered_json config_params(const ThrowConfig &c) {
  nlohmann::ordered_json j;
  j["n"] = c.star.n;
  j["ell"] = c.star.ell;
  j["a"] = c.lattice.a;
  j["b"] = c.lattice.b;
  j["alpha"] = c.lattice.alpha;
  return j;
}

inline std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

} // namespace detail

// ---------------------------------------------------------------- exact

inline CommandOutput cmd_exact(const ThrowConfig &config, const ExactOptions &options = {}) {
  validate(config);
  const auto p = p_exact(config, options);
  const Ratios r = config.ratios();
  const AlphaReduced red = reduce_alpha(config.star.n, config.lattice.alpha);

  CommandOutput out;
  out.manifest.command = "exact";
  out.manifest.params = detail::config_params(config);
  out.table.columns = {"i", "p", "cdf"};
  const auto F = cdf_finite(config.star.n, p);
  for (std::size_t i = 0; i < p.size(); ++i)
    out.table.add({detail::as_int(i), p[i], F.cumulative()[i]});

  auto &s = out.summary;
  s["lambda"] = r.lambda;
  s["mu"] = r.mu;
  s["max_count"] = max_intersections(config.star.n);
  s["alpha_eff"] = red.alpha_eff;
  s["mirrored"] = red.mirrored;
  s["sum"] = p.total();
  s["mean"] = p.mean();
  s["expected_mean"] = expectation(config);
  s["p_at_least_one"] = p_at_least_one(config);
  return out;
}

// ---------------------------------------------------------------- sweep

/// "COUNT" points evenly over [0, pi/n], "LO:HI:COUNT", or a comma list.
inline std::vector<double> parse_alpha_grid(std::string_view text, int n) {
  auto even = [](double lo, double hi, long count) {
    if (count < 2)
      throw UsageError("alpha grid needs at least two points");
    std::vector<double> g;
    for (long j = 0; j < count; ++j)
      g.push_back(j == count - 1 ? hi : lo + (hi - lo) * static_cast<double>(j) / (count - 1));
    return g;
  };
  auto parse_count = [](std::string_view s) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      return -1L;
    return v;
  };

  if (text.empty())
    return even(0.0, pi / n, 41);
  if (const long count = parse_count(text); count >= 0)
    return even(0.0, pi / n, count);
  if (const auto c1 = text.find(':'); c1 != std::string_view::npos) {
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
      throw UsageError("alpha grid range must be LO:HI:COUNT");
    const long count = parse_count(text.substr(c2 + 1));
    if (count < 0)
      throw UsageError("alpha grid range must be LO:HI:COUNT");
    return even(parse_angle(text.substr(0, c1)), parse_angle(text.substr(c1 + 1, c2 - c1 - 1)), count);
  }
  return parse_angle_list(text);
}

/// Predicted direction of p(i, .) on (0, pi/2n): i = 0 is proven to
/// decrease; the remaining directions are the open monotonicity conjecture.
inline int conjectured_direction(int n, int i) {
  const int M = max_intersections(n);
  if (i == 0)
    return -1;
  if ((i >= 1 && i <= M - 1) || i == 2 * M - 1)
    return +1;
  return -1;
}

inline CommandOutput cmd_sweep(const ThrowConfig &config, const std::vector<double> &alphas,
                               const std::vector<int> &selected = {},
                               const ExactOptions &options = {}) {
  validate(config.star);
  validate(LatticeSpec{config.lattice.a, config.lattice.b, pi / 2}); // alpha comes from the grid
  const int n = config.star.n;
  const Ratios r = config.ratios();
  validate_exact(n, r);
  if (alphas.empty())
    throw UsageError("alpha grid is empty");
  const int M = max_intersections(n);

  std::vector<int> which = selected;
  if (which.empty())
    for (int i = 0; i <= 2 * M; ++i)
      which.push_back(i);
  for (int i : which)
    if (i < 0 || i > 2 * M)
      throw UsageError("--i entries must lie in 0.." + std::to_string(2 * M));

  const auto star = convolution_vector(n, r, 0.0);
  std::vector<ProbabilityVector> rows;
  for (double a : alphas)
    rows.push_back(p_exact(n, r, a, options));

  CommandOutput out;
  out.manifest.command = "sweep";
  out.manifest.params = detail::config_params(config);
  out.manifest.params.erase("alpha");
  out.manifest.params["alpha_grid"] = alphas;
  out.manifest.params["i"] = which;
  out.table.columns = {"alpha", "i", "p", "p_star"};
  for (std::size_t g = 0; g < alphas.size(); ++g)
    for (int i : which) {
      const auto ii = static_cast<std::size_t>(i);
      out.table.add({alphas[g], std::int64_t{i}, rows[g][ii], star[ii]});
    }

  // Mirror residual over the grid and the exploratory monotonicity report on
  // the grid points inside [0, pi/2n].
  double mirror = 0.0;
  for (std::size_t g = 0; g < alphas.size(); ++g) {
    const auto m = p_exact(n, r, pi / n - alphas[g], options);
    for (int i : which)
      mirror = std::max(mirror, std::abs(m[static_cast<std::size_t>(i)] -
                                         rows[g][static_cast<std::size_t>(i)]));
  }
  std::vector<std::pair<double, std::size_t>> half;
  for (std::size_t g = 0; g < alphas.size(); ++g)
    if (alphas[g] >= 0.0 && alphas[g] <= pi / (2.0 * n))
      half.emplace_back(alphas[g], g);
  std::sort(half.begin(), half.end());
  half.erase(std::unique(half.begin(), half.end(),
                         [](const auto &x, const auto &y) { return x.first == y.first; }),
             half.end());

  nlohmann::ordered_json report = nlohmann::ordered_json::array();
  for (int i : which) {
    const int predicted = conjectured_direction(n, i);
    nlohmann::ordered_json item;
    item["i"] = i;
    item["predicted"] = predicted > 0 ? "increasing" : "decreasing";
    if (half.size() < 2) {
      item["observed"] = "insufficient grid";
    } else {
      bool inc = true;
      bool dec = true;
      for (std::size_t h = 1; h < half.size(); ++h) {
        const auto ii = static_cast<std::size_t>(i);
        const double d = rows[half[h].second][ii] - rows[half[h - 1].second][ii];
        inc = inc && d > 0.0;
        dec = dec && d < 0.0;
      }
      item["observed"] = inc ? "increasing" : dec ? "decreasing" : "not monotone";
      item["agrees"] = (predicted > 0 && inc) || (predicted < 0 && dec);
    }
    report.push_back(item);
  }
  out.summary["lambda"] = r.lambda;
  out.summary["mu"] = r.mu;
  out.summary["mirror_residual"] = mirror;
  out.summary["monotonicity_grid_points"] = half.size();
  out.summary["monotonicity"] = report;
  return out;
}

// ---------------------------------------------------------------- simulate

inline CommandOutput cmd_simulate(const SimConfig &sim) {
  const SimResult res = simulate(sim);
  const ThrowConfig &config = sim.throw_config;
  const int n = config.star.n;
  const int M = res.max_count;
  const bool odd = n % 2 == 1 && n >= 3;
  const auto N = static_cast<double>(res.trials);

  std::optional<ProbabilityVector> p;
  std::optional<JointMatrix> joint;
  if (odd) {
    p = p_exact(config);
    joint = joint_matrix(config);
  }

  CommandOutput out;
  out.manifest.command = "simulate";
  out.manifest.params = detail::config_params(config);
  out.manifest.params["trials"] = sim.trials;
  out.manifest.params["workers"] = sim.workers;
  out.manifest.params["ci"] = sim.ci == CiMethod::normal ? "normal" : "clopper-pearson";
  out.manifest.seed = sim.seed;
  out.table.columns = {"record", "i", "k", "m", "count", "p_hat", "ci_half_width", "p_exact", "z"};

  double max_z = 0.0;
  auto exact_cells = [&](double exact, double hat, std::vector<Cell> &row) {
    const double sigma = binomial_sigma(exact, res.trials);
    row.emplace_back(exact);
    if (sigma > 0.0) {
      const double z = (hat - exact) / sigma;
      max_z = std::max(max_z, std::abs(z));
      row.emplace_back(z);
    } else {
      row.emplace_back(std::monostate{});
    }
  };

  for (int i = 0; i <= 2 * M; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    std::vector<Cell> row{std::string("total"), std::int64_t{i}, std::monostate{}, std::monostate{},
                          static_cast<std::int64_t>(res.total_count(i)), res.p_hat[ii],
                          res.ci_half_width[ii]};
    if (p)
      exact_cells((*p)[ii], res.p_hat[ii], row);
    else
      row.insert(row.end(), {std::monostate{}, std::monostate{}});
    out.table.add(std::move(row));
  }
  for (int k = 0; k <= M; ++k)
    for (int m = 0; m <= M; ++m) {
      const std::uint64_t c = res.count(k, m);
      const double hat = static_cast<double>(c) / N;
      std::vector<Cell> row{std::string("joint"), std::int64_t{k + m}, std::int64_t{k}, std::int64_t{m},
                            static_cast<std::int64_t>(c), hat, ci_half_width(c, res.trials, sim.ci)};
      if (joint)
        exact_cells(joint->at(k, m), hat, row);
      else
        row.insert(row.end(), {std::monostate{}, std::monostate{}});
      out.table.add(std::move(row));
    }

  // Expectation check, valid for every n.
  const double mean = res.p_hat.mean();
  double second = 0.0;
  for (std::size_t i = 0; i < res.p_hat.size(); ++i)
    second += static_cast<double>(i * i) * res.p_hat[i];
  const double sd = std::sqrt(std::max(second - mean * mean, 0.0));
  const double expected = expectation(config);
  const double mean_z = sd > 0.0 ? (mean - expected) / (sd / std::sqrt(N)) : 0.0;

  auto &s = out.summary;
  s["trials"] = res.trials;
  s["seed"] = res.seed;
  s["mean"] = mean;
  s["expected_mean"] = expected;
  s["mean_z"] = mean_z;
  s["mean_within_4_sigma"] = std::abs(mean_z) <= 4.0;
  if (odd) {
    s["max_abs_z"] = max_z;
    s["all_within_4_sigma"] = max_z <= 4.0;
  }
  return out;
}

// ---------------------------------------------------------------- limit

inline CommandOutput cmd_limit(const LimitParams &params, const std::vector<int> &n_list,
                               const std::vector<double> &alpha_list, int grid = 100,
                               int distance_grid = 10000) {
  validate(params);
  if (n_list.empty() || alpha_list.empty())
    throw UsageError("limit needs at least one n and one alpha");
  if (grid < 1)
    throw UsageError("--grid must be positive");
  const Ratios r{params.lambda, params.mu};
  for (int n : n_list)
    validate_exact(n, r);

  CommandOutput out;
  out.manifest.command = "limit";
  out.manifest.params["lambda"] = params.lambda;
  out.manifest.params["mu"] = params.mu;
  out.manifest.params["n_list"] = n_list;
  out.manifest.params["alpha_list"] = alpha_list;
  out.manifest.params["grid"] = grid;
  out.table.columns = {"record", "n", "alpha", "xi", "cdf_finite", "cdf_limit", "distance"};

  std::vector<std::vector<double>> dist(n_list.size(), std::vector<double>(alpha_list.size()));
  for (std::size_t a = 0; a < alpha_list.size(); ++a)
    for (std::size_t k = 0; k < n_list.size(); ++k) {
      const auto F = cdf_finite(n_list[k], r, alpha_list[a]);
      for (int g = 0; g <= grid; ++g) {
        const double xi = static_cast<double>(g) / grid;
        out.table.add({std::string("cdf"), std::int64_t{n_list[k]}, alpha_list[a], xi, F(xi),
                       cdf_limit(params, xi), std::monostate{}});
      }
      dist[k][a] = sup_distance(F, params, distance_grid);
    }
  for (std::size_t a = 0; a < alpha_list.size(); ++a)
    for (std::size_t k = 0; k < n_list.size(); ++k)
      out.table.add({std::string("distance"), std::int64_t{n_list[k]}, alpha_list[a], std::monostate{},
                     std::monostate{}, std::monostate{}, dist[k][a]});

  bool decreasing = true;
  for (std::size_t a = 0; a < alpha_list.size(); ++a)
    for (std::size_t k = 1; k < n_list.size(); ++k)
      decreasing = decreasing && dist[k][a] < dist[k - 1][a];
  std::vector<double> spread;
  for (const auto &row : dist)
    spread.push_back(*std::max_element(row.begin(), row.end()) -
                     *std::min_element(row.begin(), row.end()));
  bool shrinking = true;
  for (std::size_t k = 1; k < spread.size(); ++k)
    shrinking = shrinking && spread[k] < spread[k - 1];

  auto &s = out.summary;
  s["cdf_limit_at_0"] = cdf_limit(params, 0.0);
  s["cdf_limit_at_half"] = cdf_limit(params, 0.5);
  s["one_minus_pi_lambda_mu"] = 1.0 - pi * params.lambda * params.mu;
  s["distances_decreasing_in_n"] = decreasing;
  s["spread_across_alpha"] = spread;
  s["spread_shrinking_in_n"] = alpha_list.size() > 1 ? nlohmann::ordered_json(shrinking)
                                                      : nlohmann::ordered_json(nullptr);
  return out;
}

// ---------------------------------------------------------------- verify

enum class VerifyScope { all, breadth, joint, pm_n3 };

inline VerifyScope parse_scope(std::string_view s) {
  if (s == "all")
    return VerifyScope::all;
  if (s == "breadth")
    return VerifyScope::breadth;
  if (s == "joint")
    return VerifyScope::joint;
  if (s == "pM-n3")
    return VerifyScope::pm_n3;
  throw UsageError("unknown verify scope '" + std::string(s) + "'");
}

struct VerifyTolerances {
  std::optional<double> breadth; // default 2a / resolution
  double partition = 1e-12;
  double joint = 1e-8;
  double normalization = 1e-12;
  double quad = 1e-10;
  double ratio = 1e3;
};

/// Applies one "NAME=VALUE" override.
inline void set_tolerance(VerifyTolerances &tol, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw UsageError("--tol expects NAME=VALUE");
  const std::string name(assignment.substr(0, eq));
  const std::string_view text = assignment.substr(eq + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !(v > 0.0))
    throw UsageError("--tol " + name + " needs a positive number");
  if (name == "breadth")
    tol.breadth = v;
  else if (name == "partition")
    tol.partition = v;
  else if (name == "joint")
    tol.joint = v;
  else if (name == "normalization")
    tol.normalization = v;
  else if (name == "quad")
    tol.quad = v;
  else if (name == "ratio")
    tol.ratio = v;
  else
    throw UsageError("unknown tolerance '" + name +
                     "' (breadth, partition, joint, normalization, quad, ratio)");
}

struct VerifyArgs {
  VerifyScope scope = VerifyScope::all;
  VerifyTolerances tol;
  std::int64_t resolution = 1'000'000;
  ExactOptions options;
};

// Residuals smaller than this are reported as this when forming the pM-n3
// ratio, so an exact match does not produce an infinite ratio.
inline constexpr double residual_floor = 1e-15;

inline CommandOutput cmd_verify(const VerifyArgs &args) {
  if (args.resolution < 1000)
    throw UsageError("breadth resolution must be at least 1000");
  const auto &tol = args.tol;
  const double spacing = 1.0;
  const double breadth_tol = tol.breadth.value_or(2.0 * spacing / static_cast<double>(args.resolution));

  CommandOutput out;
  out.manifest.command = "verify";
  out.manifest.params["scope"] = args.scope == VerifyScope::all       ? "all"
                                 : args.scope == VerifyScope::breadth ? "breadth"
                                 : args.scope == VerifyScope::joint   ? "joint"
                                                                      : "pM-n3";
  out.manifest.params["resolution"] = args.resolution;
  out.manifest.params["tol"] = {{"breadth", breadth_tol},           {"partition", tol.partition},
                                {"joint", tol.joint},               {"normalization", tol.normalization},
                                {"quad", tol.quad},                 {"ratio", tol.ratio}};
  if (args.options.f_shift != std::array<double, 10>{})
    out.manifest.params["f_shift"] = args.options.f_shift;
  out.table.columns = {"scope", "check", "case", "value", "tolerance", "pass"};

  bool ok = true;
  auto record = [&](const char *scope, const char *check, const std::string &label, double value,
                    double bound, bool pass) {
    ok = ok && pass;
    out.table.add({std::string(scope), std::string(check), label, value, bound,
                   std::string(pass ? "true" : "false")});
  };
  auto inform = [&](const char *scope, const char *check, const std::string &label, double value) {
    out.table.add({std::string(scope), std::string(check), label, value, std::monostate{},
                   std::string("info")});
  };
  auto below = [&](const char *scope, const char *check, const std::string &label, double value,
                   double bound) { record(scope, check, label, value, bound, value <= bound); };

  const bool all = args.scope == VerifyScope::all;

  if (all || args.scope == VerifyScope::breadth) {
    for (int n : {3, 9, 15}) {
      const StarSpec star{n, 0.4};
      const int M = max_intersections(n);
      const double h = pi / (2.0 * n);
      double worst = 0.0;
      double partition = 0.0;
      for (int s = 0; s < 50; ++s) {
        const double phi = 3.0 * h * s / 50;
        const Interval iv = phi < h ? Interval::I1 : phi < 2 * h ? Interval::I2 : Interval::I3;
        const auto profile = breadth_oracle_profile(star, phi, spacing, args.resolution);
        double total = 0.0;
        for (int k = 1; k <= M; ++k) {
          const double v = breadth(star, k, phi, iv);
          worst = std::max(worst, std::abs(v - profile[static_cast<std::size_t>(k)]));
          total += v;
        }
        for (int k = M + 1; k <= n; ++k)
          worst = std::max(worst, profile[static_cast<std::size_t>(k)]);
        partition = std::max(partition, std::abs(total - width(star, phi, iv)));
      }
      const std::string label = "n=" + std::to_string(n);
      below("breadth", "oracle", label, worst, breadth_tol);
      below("breadth", "partition", label, partition, tol.partition);
    }
  }

  if (all || args.scope == VerifyScope::joint) {
    for (int n : {3, 5, 7, 9})
      for (const Ratios r : {Ratios{0.1, 0.1}, Ratios{1.0 / 3, 0.25}, Ratios{0.45, 0.05}})
        for (double alpha : {pi / (8.0 * n), pi / (4.0 * n), pi / (2.0 * n)}) {
          const auto closed = joint_matrix_at(n, r, alpha, args.options);
          const auto oracle = joint_matrix_oracle(n, r, alpha, tol.quad);
          const auto p = p_exact(n, r, alpha, args.options);
          const auto diag = oracle.diagonal_sums();
          double entry = 0.0;
          for (int k = 0; k <= closed.max_count(); ++k)
            for (int m = 0; m <= closed.max_count(); ++m)
              entry = std::max(entry, std::abs(closed.at(k, m) - oracle.at(k, m)));
          double per_i = 0.0;
          for (std::size_t i = 0; i < p.size(); ++i)
            per_i = std::max(per_i, std::abs(p[i] - diag[i]));
          char label[96];
          std::snprintf(label, sizeof label, "n=%d lambda=%.6g mu=%.6g alpha=%.6g", n, r.lambda, r.mu,
                        alpha);
          below("joint", "matrix_vs_oracle", label, entry, tol.joint);
          below("joint", "p_vs_oracle", label, per_i, tol.joint);
          below("joint", "normalization", label, std::abs(p.total() - 1.0), tol.normalization);
        }
  }

  if (all || args.scope == VerifyScope::pm_n3) {
    const int n = 3;
    const int M = max_intersections(n);
    ExactOptions proof = args.options;
    proof.pm_n3 = PmN3Form::proof;
    ExactOptions theorem = args.options;
    theorem.pm_n3 = PmN3Form::theorem;
    double res_theorem = 0.0;
    double res_proof = 0.0;
    for (const Ratios r : {Ratios{0.1, 0.1}, Ratios{1.0 / 3, 0.25}, Ratios{0.45, 0.05}})
      for (double frac : {0.1, 0.25, 0.5, 0.75, 1.0}) {
        const double alpha = frac * pi / (2.0 * n);
        const double truth = joint_matrix_oracle(n, r, alpha, tol.quad).diagonal_sums()[static_cast<std::size_t>(M)];
        res_theorem = std::max(res_theorem, std::abs(p_exact(n, r, alpha, theorem)[static_cast<std::size_t>(M)] - truth));
        res_proof = std::max(res_proof, std::abs(p_exact(n, r, alpha, proof)[static_cast<std::size_t>(M)] - truth));
      }
    const double lo = std::max(std::min(res_theorem, res_proof), residual_floor);
    const double hi = std::max(res_theorem, res_proof);
    const double ratio = hi / lo;
    const bool conclusive = ratio > tol.ratio;
    const char *winner = res_theorem <= res_proof ? "theorem" : "proof";
    inform("pM-n3", "residual_theorem", "max over grid", res_theorem);
    inform("pM-n3", "residual_proof", "max over grid", res_proof);
    record("pM-n3", "ratio", winner, ratio, tol.ratio, conclusive);

    auto &e = out.summary["pM_n3"];
    e["endorsed"] = winner;
    e["theorem_form"] = "-(n lambda mu / 2 pi) (4 f3 - f7)";
    e["proof_form"] = "-(n lambda mu / 2 pi) (4 f3 - f7 sin(pi/n))";
    e["residual_theorem"] = res_theorem;
    e["residual_proof"] = res_proof;
    e["ratio"] = ratio;
    e["conclusive"] = conclusive;
  }

  out.summary["passed"] = ok;
  out.exit_code = ok ? 0 : 3;
  return out;
}

} // namespace buffon
