// buffon: exact tables, sweeps, simulations, limit-law reports and oracle
// verification for a star of needles thrown on a two-family lattice.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "buffon/commands.hpp"

using namespace buffon;

namespace {

enum Exit { ok = 0, usage = 1, validation = 2, verification = 3, nonconvergence = 4 };

int fail(int code, const char *kind, const std::string &errc, const std::string &message) {
  nlohmann::ordered_json e;
  e["error"]["kind"] = kind;
  e["error"]["code"] = errc;
  e["error"]["message"] = message;
  e["error"]["exit_code"] = code;
  std::cerr << e.dump() << '\n';
  return code;
}

struct Common {
  std::string format = "csv";
  std::string out;
};

void add_common(CLI::App *cmd, Common &c) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", c.out, "Write the table to PATH (CSV adds PATH.manifest.json)");
}

struct ConfigFlags {
  int n = 0;
  double ell = 0.0;
  double a = 0.0;
  double b = 0.0;
  std::string alpha = "pi/2";
};

void add_config(CLI::App *cmd, ConfigFlags &f, bool with_alpha) {
  cmd->add_option("--n", f.n, "Number of needles")->required();
  cmd->add_option("--ell", f.ell, "Needle length")->required();
  cmd->add_option("--a", f.a, "Spacing of family A")->required();
  cmd->add_option("--b", f.b, "Spacing of family B")->required();
  if (with_alpha)
    cmd->add_option("--alpha", f.alpha, "Lattice angle: radians or a multiple of pi such as pi/10")
        ->capture_default_str();
}

ThrowConfig to_config(const ConfigFlags &f) {
  return ThrowConfig{StarSpec{f.n, f.ell}, LatticeSpec{f.a, f.b, parse_angle(f.alpha)}};
}

std::vector<int> parse_int_list(const std::string &text, const char *flag) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
      throw UsageError(std::string(flag) + " expects comma-separated integers");
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

void write_file(const std::string &path, const std::string &body) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << body) || !f.flush())
    throw std::runtime_error("cannot write " + path);
}

int emit(CommandOutput result, const Common &c) {
  result.manifest.timestamp = utc_timestamp();
  if (c.format == "json") {
    const std::string body = to_json(result.table, result.manifest, result.summary);
    if (c.out.empty())
      std::cout << body;
    else
      write_file(c.out, body);
  } else {
    const std::string body = to_csv(result.table);
    nlohmann::ordered_json side;
    side["manifest"] = result.manifest.to_json();
    side["columns"] = result.table.columns;
    side["summary"] = result.summary;
    if (c.out.empty()) {
      std::cout << body;
      nlohmann::ordered_json line;
      line["summary"] = result.summary;
      std::cerr << line.dump() << '\n';
    } else {
      write_file(c.out, body);
      write_file(c.out + ".manifest.json", side.dump(2) + "\n");
    }
  }
  return result.exit_code;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Intersection counts of a needle star on a two-family lattice"};
  app.set_version_flag("--version", std::string("buffon ") + tool_version);
  app.require_subcommand(1);

  Common common;
  ConfigFlags cfg;
  double perturb_f7 = 0.0;

  auto *exact = app.add_subcommand("exact", "Closed-form p(i) and the cumulative distribution");
  add_config(exact, cfg, true);
  add_common(exact, common);
  exact->add_option("--perturb-f7", perturb_f7)->group("");

  std::string alpha_grid;
  std::string i_select;
  auto *sweep = app.add_subcommand("sweep", "p(i, alpha) over a grid of lattice angles");
  add_config(sweep, cfg, false);
  sweep->add_option("--alpha-grid", alpha_grid,
                    "COUNT points over [0, pi/n], LO:HI:COUNT, or a comma list (default 41)");
  sweep->add_option("--i", i_select, "Comma list of counts i to report (default all)");
  add_common(sweep, common);

  SimConfig sim;
  std::string ci = "normal";
  auto *simulate_cmd = app.add_subcommand("simulate", "Monte Carlo simulation of the throw");
  add_config(simulate_cmd, cfg, true);
  simulate_cmd->add_option("--trials", sim.trials, "Number of throws")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate_cmd->add_option("--workers", sim.workers, "Worker threads")->capture_default_str();
  simulate_cmd->add_option("--ci", ci, "Confidence interval method")
      ->check(CLI::IsMember({"normal", "clopper-pearson"}))
      ->capture_default_str();
  add_common(simulate_cmd, common);

  LimitParams lp;
  std::string n_list = "5,9,15,25";
  std::string alpha_list = "pi/10,pi/4,pi/2";
  int grid = 100;
  auto *limit = app.add_subcommand("limit", "Sampled limit law, finite-n CDFs and sup distances");
  limit->add_option("--lambda", lp.lambda, "ell / a")->required();
  limit->add_option("--mu", lp.mu, "ell / b")->required();
  limit->add_option("--n-list", n_list, "Odd n values")->capture_default_str();
  limit->add_option("--alpha-list", alpha_list, "Lattice angles")->capture_default_str();
  limit->add_option("--grid", grid, "Number of xi intervals over [0, 1]")->capture_default_str();
  add_common(limit, common);

  std::string scope = "all";
  std::vector<std::string> tolerances;
  std::int64_t resolution = 1'000'000;
  auto *verify = app.add_subcommand("verify", "Compare closed forms against the oracles");
  verify->add_option("scope", scope, "all, breadth, joint or pM-n3")
      ->check(CLI::IsMember({"all", "breadth", "joint", "pM-n3"}))
      ->capture_default_str();
  verify->add_option("--tol", tolerances,
                     "NAME=VALUE with NAME in breadth, partition, joint, normalization, quad, ratio");
  verify->add_option("--grid", resolution, "Breadth oracle resolution")->capture_default_str();
  verify->add_option("--perturb-f7", perturb_f7)->group("");
  add_common(verify, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    return fail(usage, "usage", e.get_name(), e.what());
  }

  ExactOptions options;
  options.f_shift[7] = perturb_f7;

  try {
    if (*exact)
      return emit(cmd_exact(to_config(cfg), options), common);
    if (*sweep) {
      const ThrowConfig config = to_config(cfg);
      const auto which = i_select.empty() ? std::vector<int>{} : parse_int_list(i_select, "--i");
      return emit(cmd_sweep(config, parse_alpha_grid(alpha_grid, cfg.n), which), common);
    }
    if (*simulate_cmd) {
      sim.throw_config = to_config(cfg);
      sim.ci = ci == "normal" ? CiMethod::normal : CiMethod::clopper_pearson;
      return emit(cmd_simulate(sim), common);
    }
    if (*limit)
      return emit(cmd_limit(lp, parse_int_list(n_list, "--n-list"), parse_angle_list(alpha_list), grid),
                  common);
    if (*verify) {
      VerifyArgs args;
      args.scope = parse_scope(scope);
      for (const auto &t : tolerances)
        set_tolerance(args.tol, t);
      args.resolution = resolution;
      args.options = options;
      return emit(cmd_verify(args), common);
    }
  } catch (const UsageError &e) {
    return fail(usage, "usage", "bad_argument", e.what());
  } catch (const AngleParseError &e) {
    return fail(usage, "usage", "bad_angle", e.what());
  } catch (const ConfigError &e) {
    return fail(validation, "validation", to_string(e.code()), e.what());
  } catch (const QuadratureError &e) {
    return fail(nonconvergence, "nonconvergence", "quadrature", e.what());
  } catch (const std::invalid_argument &e) {
    return fail(validation, "validation", "invalid_argument", e.what());
  } catch (const std::domain_error &e) {
    return fail(validation, "validation", "domain_error", e.what());
  } catch (const std::exception &e) {
    return fail(validation, "error", "runtime_error", e.what());
  }
  return usage;
}
