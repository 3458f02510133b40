// towbandit: tug-of-war bandit experiments.
//
// Subcommands: run, compare, bounds, sweep. Exit codes: 0 success,
// 2 configuration error, 1 runtime error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "towbandit/harness.hpp"

namespace fs = std::filesystem;
using namespace towbandit;

namespace {

struct CommonArgs {
  std::vector<std::string> configs;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> plays;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool multi_config) {
  auto* copt = cmd->add_option("--config", args.configs,
                               "experiment configuration file (JSON)");
  copt->required();
  if (!multi_config) copt->expected(1);
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "override master_seed");
  cmd->add_option("--samples", args.samples, "override sample count");
  cmd->add_option("--plays", args.plays, "override play count");
  cmd->add_option("--threads", args.threads,
                  "worker threads (0 = auto; TOW_BANDIT_THREADS caps)");
}

ExperimentConfig load_with_overrides(const std::string& path,
                                     const CommonArgs& args) {
  ExperimentConfig cfg = load_config(path);
  if (args.seed) cfg.master_seed = *args.seed;
  if (args.samples) cfg.samples = *args.samples;
  if (args.plays) cfg.plays = *args.plays;
  validate_config(cfg);
  return cfg;
}

fs::path ensure_out_dir(const std::string& dir) {
  fs::path p(dir);
  if (!p.empty()) fs::create_directories(p);
  return p;
}

bool wants(const ExperimentConfig& cfg, OutputKind kind) {
  for (OutputKind o : cfg.outputs) {
    if (o == kind) return true;
  }
  return false;
}

int cmd_run(const CommonArgs& args) {
  const ExperimentConfig cfg = load_with_overrides(args.configs.front(), args);
  const fs::path out = ensure_out_dir(args.out_dir);

  const AggregateCurve curve = monte_carlo(cfg, {args.threads});
  if (wants(cfg, OutputKind::CurveCsv)) emit_csv(curve, out / "curve.csv");
  if (wants(cfg, OutputKind::TraceCsv) || wants(cfg, OutputKind::VoltageCsv)) {
    std::vector<VoltageRecord> voltage;
    const RunTrace trace = run_single(
        cfg, 0, wants(cfg, OutputKind::VoltageCsv) ? &voltage : nullptr);
    if (wants(cfg, OutputKind::TraceCsv)) emit_csv(trace, out / "trace.csv");
    if (wants(cfg, OutputKind::VoltageCsv)) {
      emit_voltage_csv(voltage, out / "voltage.csv");
    }
  }
  if (wants(cfg, OutputKind::PlotScript)) {
    emit_plot_script({"curve.csv"}, {algorithm_name(cfg.algorithm.kind)},
                     out / "plot.gp");
  }

  const std::size_t last = curve.mean_cum.size() - 1;
  std::cout << "algorithm=" << algorithm_name(cfg.algorithm.kind)
            << " plays=" << cfg.plays << " samples=" << cfg.samples
            << " mean_cumulative_reward=" << format_double(curve.mean_cum[last])
            << " mean_n_b=" << format_double(curve.mean_sub[last]) << "\n";
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  std::vector<ExperimentConfig> configs;
  configs.reserve(args.configs.size());
  bool plot = false;
  for (const std::string& path : args.configs) {
    configs.push_back(load_with_overrides(path, args));
    plot = plot || wants(configs.back(), OutputKind::PlotScript);
  }
  const fs::path out = ensure_out_dir(args.out_dir);
  const CompareTable table = compare(configs, {args.threads});
  emit_compare_csv(table, out / "compare.csv");
  if (plot) {
    std::vector<std::string> paths(table.names.size(), "compare.csv");
    // one series per column: play column 1, column i+2 carries algorithm i
    std::string body = "# reward curves (gnuplot)\n";
    body += "set datafile separator ','\n";
    body += "set xlabel 'play'\nset ylabel 'mean cumulative reward'\n";
    body += "set key left top\nplot ";
    for (std::size_t i = 0; i < table.names.size(); ++i) {
      if (i > 0) body += ", \\\n     ";
      body += "'compare.csv' skip 1 using 1:" + std::to_string(i + 2) +
              " with lines title '" + table.names[i] + "'";
    }
    body += '\n';
    std::ofstream script(out / "compare.gp", std::ios::binary);
    if (!script) throw std::runtime_error("cannot write compare.gp");
    script << body;
  }

  std::cout << "play";
  for (const auto& n : table.names) std::cout << "," << n;
  std::cout << "\n";
  const std::uint64_t last = table.plays - 1;
  std::cout << table.plays;
  for (const auto& col : table.columns) {
    std::cout << "," << format_double(col[last]);
  }
  std::cout << "\n";
  return 0;
}

struct BoundsArgs {
  std::optional<std::string> config;
  std::optional<double> mu_a, mu_b, sigma_a, sigma_b;
  double k = 0.0;
  std::uint64_t plays = 1000;
  std::string out_dir;
};

BoundParams bounds_params_from_config(const ExperimentConfig& cfg, double& k) {
  if (cfg.machines.size() != 2 ||
      cfg.machines[0].kind != RewardKind::Gaussian ||
      cfg.machines[1].kind != RewardKind::Gaussian) {
    throw ConfigError("bounds: config must have two gaussian machines");
  }
  const bool first_better =
      machine_mean(cfg.machines[0]) > machine_mean(cfg.machines[1]);
  const RewardDistribution& better = cfg.machines[first_better ? 0 : 1];
  const RewardDistribution& worse = cfg.machines[first_better ? 1 : 0];
  BoundParams p;
  p.mu_a = better.mu;
  p.mu_b = worse.mu;
  p.sigma_a = better.sigma;
  p.sigma_b = worse.sigma;
  if (cfg.algorithm.kind == AlgorithmKind::Asdm) {
    switch (cfg.algorithm.k_policy.mode) {
      case KMode::Fixed:
        k = cfg.algorithm.k_policy.k_fixed;
        break;
      case KMode::OracleK0:
      case KMode::AdaptiveK0:
        k = k0_oracle({machine_mean(cfg.machines[0]),
                       machine_mean(cfg.machines[1])},
                      1);
        break;
    }
  }
  p.k = k;
  return p;
}

int cmd_bounds(const BoundsArgs& args) {
  BoundParams params;
  double k = args.k;
  std::uint64_t plays = args.plays;
  if (args.config) {
    const ExperimentConfig cfg = load_config(*args.config);
    params = bounds_params_from_config(cfg, k);
    plays = args.plays;
  } else {
    if (!args.mu_a || !args.mu_b || !args.sigma_a || !args.sigma_b) {
      throw ConfigError(
          "bounds: give --config or all of --mu-a --mu-b --sigma-a --sigma-b");
    }
    params = {*args.mu_a, *args.mu_b, *args.sigma_a, *args.sigma_b, args.k};
  }
  const RegretReport rep = bounds_report(params, plays);
  const std::string text = bounds_report_text(params, plays, rep);
  std::cout << text;
  if (!args.out_dir.empty()) {
    const fs::path out = ensure_out_dir(args.out_dir);
    std::ofstream f(out / "bounds.txt", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write bounds.txt");
    f << text;
  }
  return 0;
}

struct SweepArgs {
  CommonArgs common;
  std::string param;
  double from = 0.0, to = 0.0, step = 0.0;
};

int cmd_sweep(const SweepArgs& args) {
  ExperimentConfig base =
      load_with_overrides(args.common.configs.front(), args.common);
  if (args.param != "k" && args.param != "tau") {
    throw ConfigError("sweep: --param must be k or tau");
  }
  if (args.param == "k" && base.algorithm.kind != AlgorithmKind::Asdm) {
    throw ConfigError("sweep: --param k requires an asdm config");
  }
  if (args.param == "tau" && base.algorithm.kind != AlgorithmKind::Softmax) {
    throw ConfigError("sweep: --param tau requires a softmax config");
  }
  if (!(args.step > 0.0) || args.to < args.from) {
    throw ConfigError("sweep: need --step > 0 and --to >= --from");
  }

  const fs::path out = ensure_out_dir(args.common.out_dir);
  const auto count = static_cast<std::size_t>(
      (args.to - args.from) / args.step + 1e-9) + 1;

  std::string body = "param,value,mean_cumulative_reward,mean_n_b\n";
  std::cout << "param,value,mean_cumulative_reward,mean_n_b\n";
  for (std::size_t i = 0; i < count; ++i) {
    const double value = args.from + static_cast<double>(i) * args.step;
    ExperimentConfig cfg = base;
    if (args.param == "k") {
      cfg.algorithm.k_policy = KPolicy::fixed(value);
    } else {
      cfg.algorithm.tau = value;
    }
    validate_config(cfg);
    const AggregateCurve curve = monte_carlo(cfg, {args.common.threads});
    const std::size_t last = curve.mean_cum.size() - 1;
    const std::string row = args.param + "," + format_double(value) + "," +
                            format_double(curve.mean_cum[last]) + "," +
                            format_double(curve.mean_sub[last]) + "\n";
    body += row;
    std::cout << row;
  }
  std::ofstream f(out / "sweep.csv", std::ios::binary);
  if (!f) throw std::runtime_error("cannot write sweep.csv");
  f << body;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tug-of-war bandit experiments"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  add_common(run, run_args, false);

  CommonArgs compare_args;
  CLI::App* cmp = app.add_subcommand(
      "compare", "compare algorithms over a shared environment");
  add_common(cmp, compare_args, true);

  BoundsArgs bounds_args;
  CLI::App* bounds = app.add_subcommand("bounds", "closed-form bound report");
  bounds->add_option("--config", bounds_args.config,
                     "derive parameters from a config file");
  bounds->add_option("--mu-a", bounds_args.mu_a, "higher mean");
  bounds->add_option("--mu-b", bounds_args.mu_b, "lower mean");
  bounds->add_option("--sigma-a", bounds_args.sigma_a, "std dev of machine A");
  bounds->add_option("--sigma-b", bounds_args.sigma_b, "std dev of machine B");
  bounds->add_option("--k", bounds_args.k, "learning parameter");
  bounds->add_option("--plays", bounds_args.plays, "play horizon");
  bounds->add_option("--out", bounds_args.out_dir,
                     "also write bounds.txt to this directory");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "sweep K or tau");
  add_common(sweep, sweep_args.common, false);
  sweep->add_option("--param", sweep_args.param, "k or tau")->required();
  sweep->add_option("--from", sweep_args.from, "first value")->required();
  sweep->add_option("--to", sweep_args.to, "last value")->required();
  sweep->add_option("--step", sweep_args.step, "increment")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (cmp->parsed()) return cmd_compare(compare_args);
    if (bounds->parsed()) return cmd_bounds(bounds_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
