#pragma once

/**
 * Experiment configuration and its JSON form.
 *
 * The file format is a single JSON object:
 *
 *   {
 *     "machines": [{"kind": "gaussian", "mu": 0.5, "sigma": 0.2},
 *                  {"kind": "bernoulli", "p": 0.3}, ...],
 *     "algorithm": {"name": "asdm" | "softmax" | "cheater", ...},
 *     "plays": 1000, "samples": 1000, "master_seed": 42,
 *     "outputs": ["curve_csv", "trace_csv", "voltage_csv", "plot_script"]
 *   }
 *
 * asdm keys: "k" (shorthand for a fixed-K policy) or
 * "k_policy": {"mode": "fixed"|"oracle_k0"|"adaptive_k0", "k":..., "m":...},
 * plus optional "th" (default x0), "x0" (default 5), "v0" (default 1),
 * "fluctuation_kind" ("alternating_sine" | "none") and
 * "fluctuation_amplitude" (default 1).
 * softmax keys: "tau". cheater keys: "k_adjust" (default 0).
 *
 * Serialisation is canonical (full k_policy form, lowercase names) and
 * numerically lossless, so configurations round-trip exactly.
 */

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "towbandit/errors.hpp"
#include "towbandit/reward.hpp"
#include "towbandit/tow.hpp"

namespace towbandit {

enum class AlgorithmKind { Asdm, Softmax, Cheater };

enum class OutputKind { CurveCsv, TraceCsv, VoltageCsv, PlotScript };

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::Asdm;
  // asdm
  KPolicy k_policy = KPolicy::fixed(0.0);
  double x0 = 5.0;
  double th = 5.0;
  double v0 = 1.0;
  FluctuationKind fluctuation_kind = FluctuationKind::AlternatingSine;
  double fluctuation_amplitude = 1.0;
  // softmax
  double tau = 0.3;
  // cheater
  double k_adjust = 0.0;

  bool operator==(const AlgorithmSpec&) const = default;
};

struct ExperimentConfig {
  std::vector<RewardDistribution> machines;
  AlgorithmSpec algorithm;
  std::uint64_t plays = 1;
  std::uint64_t samples = 1;
  std::uint64_t master_seed = 0;
  std::vector<OutputKind> outputs = {OutputKind::CurveCsv};

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parse and validate. Throws ConfigError with a descriptive message.
ExperimentConfig config_from_json(const std::string& text);

/// Load from a file; throws ConfigError (parse/validation) or
/// std::runtime_error (I/O).
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical, lossless JSON serialisation.
std::string config_to_json(const ExperimentConfig& cfg);

/// Validation used by config_from_json; also called by the harness before
/// any run starts.
void validate_config(const ExperimentConfig& cfg);

/// The environment a config plays against.
BanditEnvironment environment_of(const ExperimentConfig& cfg);

const char* algorithm_name(AlgorithmKind kind);
const char* output_name(OutputKind kind);

}  // namespace towbandit
