#include "towbandit/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace towbandit {

using nlohmann::json;

const char* algorithm_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::Asdm: return "asdm";
    case AlgorithmKind::Softmax: return "softmax";
    case AlgorithmKind::Cheater: return "cheater";
  }
  return "?";
}

const char* output_name(OutputKind kind) {
  switch (kind) {
    case OutputKind::CurveCsv: return "curve_csv";
    case OutputKind::TraceCsv: return "trace_csv";
    case OutputKind::VoltageCsv: return "voltage_csv";
    case OutputKind::PlotScript: return "plot_script";
  }
  return "?";
}

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ConfigError(std::string("config: missing or non-numeric \"") + key +
                      "\"");
  }
  return j[key].get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw ConfigError(std::string("config: \"") + key + "\" must be a number");
  }
  return j[key].get<double>();
}

RewardDistribution parse_machine(const json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("config: each machine needs a \"kind\"");
  }
  const std::string kind = lower(j["kind"].get<std::string>());
  try {
    if (kind == "bernoulli") {
      return RewardDistribution::bernoulli(require_number(j, "p"));
    }
    if (kind == "gaussian" || kind == "normal") {
      return RewardDistribution::gaussian(require_number(j, "mu"),
                                          require_number(j, "sigma"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  throw ConfigError("config: unknown machine kind \"" + kind + "\"");
}

KPolicy parse_k_policy(const json& alg) {
  if (alg.contains("k_policy")) {
    const json& kp = alg["k_policy"];
    const std::string mode = lower(kp.value("mode", std::string("fixed")));
    if (mode == "fixed") return KPolicy::fixed(require_number(kp, "k"));
    if (mode == "oracle_k0") {
      return KPolicy::oracle_k0(kp.value("m", std::uint64_t{1}));
    }
    if (mode == "adaptive_k0") return KPolicy::adaptive_k0();
    throw ConfigError("config: unknown k_policy mode \"" + mode + "\"");
  }
  if (alg.contains("k")) return KPolicy::fixed(require_number(alg, "k"));
  throw ConfigError("config: asdm needs \"k\" or \"k_policy\"");
}

AlgorithmSpec parse_algorithm(const json& j) {
  if (!j.is_object() || !j.contains("name")) {
    throw ConfigError("config: \"algorithm\" needs a \"name\"");
  }
  AlgorithmSpec spec;
  const std::string name = lower(j["name"].get<std::string>());
  if (name == "asdm") {
    spec.kind = AlgorithmKind::Asdm;
    spec.k_policy = parse_k_policy(j);
    spec.x0 = number_or(j, "x0", 5.0);
    spec.th = number_or(j, "th", spec.x0);  // default Th = X0
    spec.v0 = number_or(j, "v0", 1.0);
    spec.fluctuation_amplitude = number_or(j, "fluctuation_amplitude", 1.0);
    const std::string fk =
        lower(j.value("fluctuation_kind", std::string("alternating_sine")));
    if (fk == "alternating_sine") {
      spec.fluctuation_kind = FluctuationKind::AlternatingSine;
    } else if (fk == "none") {
      spec.fluctuation_kind = FluctuationKind::None;
      spec.fluctuation_amplitude = 0.0;
    } else {
      throw ConfigError("config: unknown fluctuation_kind \"" + fk + "\"");
    }
  } else if (name == "softmax") {
    spec.kind = AlgorithmKind::Softmax;
    spec.tau = require_number(j, "tau");
  } else if (name == "cheater") {
    spec.kind = AlgorithmKind::Cheater;
    spec.k_adjust = number_or(j, "k_adjust", 0.0);
  } else {
    throw ConfigError("config: unknown algorithm \"" + name + "\"");
  }
  return spec;
}

OutputKind parse_output(const std::string& name) {
  const std::string n = lower(name);
  if (n == "curve_csv") return OutputKind::CurveCsv;
  if (n == "trace_csv") return OutputKind::TraceCsv;
  if (n == "voltage_csv" || n == "voltage_trace") return OutputKind::VoltageCsv;
  if (n == "plot_script") return OutputKind::PlotScript;
  throw ConfigError("config: unknown output \"" + name + "\"");
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.machines.size() < 2) {
    throw ConfigError("config: need at least two machines");
  }
  for (const auto& m : cfg.machines) {
    if (m.kind == RewardKind::Bernoulli && !(m.p >= 0.0 && m.p <= 1.0)) {
      throw ConfigError("config: bernoulli p outside [0, 1]");
    }
    if (m.kind == RewardKind::Gaussian && !(m.sigma >= 0.0)) {
      throw ConfigError("config: gaussian sigma must be >= 0");
    }
  }
  if (cfg.plays < 1) throw ConfigError("config: plays must be >= 1");
  if (cfg.samples < 1) throw ConfigError("config: samples must be >= 1");

  const AlgorithmSpec& a = cfg.algorithm;
  switch (a.kind) {
    case AlgorithmKind::Asdm:
      if (a.k_policy.mode == KMode::OracleK0 &&
          (a.k_policy.m < 1 || a.k_policy.m > cfg.machines.size() - 1)) {
        throw ConfigError("config: oracle_k0 rank m outside [1, M-1]");
      }
      if (!(a.fluctuation_amplitude >= 0.0)) {
        throw ConfigError("config: fluctuation_amplitude must be >= 0");
      }
      break;
    case AlgorithmKind::Softmax:
      if (!(a.tau > 0.0)) throw ConfigError("config: softmax tau must be > 0");
      break;
    case AlgorithmKind::Cheater:
      if (cfg.machines.size() != 2) {
        throw ConfigError("config: the cheater is defined for two machines");
      }
      break;
  }
  for (OutputKind o : cfg.outputs) {
    if (o == OutputKind::VoltageCsv && a.kind != AlgorithmKind::Asdm) {
      throw ConfigError("config: voltage_csv requires the asdm algorithm");
    }
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig cfg;
  if (!j.contains("machines") || !j["machines"].is_array()) {
    throw ConfigError("config: \"machines\" array required");
  }
  cfg.machines.clear();
  for (const json& m : j["machines"]) cfg.machines.push_back(parse_machine(m));
  if (!j.contains("algorithm")) {
    throw ConfigError("config: \"algorithm\" required");
  }
  cfg.algorithm = parse_algorithm(j["algorithm"]);

  if (!j.contains("plays") || !j["plays"].is_number_unsigned()) {
    throw ConfigError("config: \"plays\" must be a nonnegative integer");
  }
  cfg.plays = j["plays"].get<std::uint64_t>();
  if (!j.contains("samples") || !j["samples"].is_number_unsigned()) {
    throw ConfigError("config: \"samples\" must be a nonnegative integer");
  }
  cfg.samples = j["samples"].get<std::uint64_t>();
  if (!j.contains("master_seed") || !j["master_seed"].is_number_unsigned()) {
    throw ConfigError("config: \"master_seed\" must be a nonnegative integer");
  }
  cfg.master_seed = j["master_seed"].get<std::uint64_t>();

  cfg.outputs.clear();
  if (j.contains("outputs")) {
    if (!j["outputs"].is_array()) {
      throw ConfigError("config: \"outputs\" must be an array");
    }
    for (const json& o : j["outputs"]) {
      cfg.outputs.push_back(parse_output(o.get<std::string>()));
    }
  } else {
    cfg.outputs = {OutputKind::CurveCsv};
  }

  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return config_from_json(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["machines"] = json::array();
  for (const auto& m : cfg.machines) {
    json jm;
    if (m.kind == RewardKind::Bernoulli) {
      jm["kind"] = "bernoulli";
      jm["p"] = m.p;
    } else {
      jm["kind"] = "gaussian";
      jm["mu"] = m.mu;
      jm["sigma"] = m.sigma;
    }
    j["machines"].push_back(jm);
  }

  json ja;
  ja["name"] = algorithm_name(cfg.algorithm.kind);
  switch (cfg.algorithm.kind) {
    case AlgorithmKind::Asdm: {
      json kp;
      switch (cfg.algorithm.k_policy.mode) {
        case KMode::Fixed:
          kp["mode"] = "fixed";
          kp["k"] = cfg.algorithm.k_policy.k_fixed;
          break;
        case KMode::OracleK0:
          kp["mode"] = "oracle_k0";
          kp["m"] = cfg.algorithm.k_policy.m;
          break;
        case KMode::AdaptiveK0:
          kp["mode"] = "adaptive_k0";
          break;
      }
      ja["k_policy"] = kp;
      ja["x0"] = cfg.algorithm.x0;
      ja["th"] = cfg.algorithm.th;
      ja["v0"] = cfg.algorithm.v0;
      ja["fluctuation_kind"] =
          cfg.algorithm.fluctuation_kind == FluctuationKind::None
              ? "none"
              : "alternating_sine";
      ja["fluctuation_amplitude"] = cfg.algorithm.fluctuation_amplitude;
      break;
    }
    case AlgorithmKind::Softmax:
      ja["tau"] = cfg.algorithm.tau;
      break;
    case AlgorithmKind::Cheater:
      ja["k_adjust"] = cfg.algorithm.k_adjust;
      break;
  }
  j["algorithm"] = ja;
  j["plays"] = cfg.plays;
  j["samples"] = cfg.samples;
  j["master_seed"] = cfg.master_seed;
  j["outputs"] = json::array();
  for (OutputKind o : cfg.outputs) j["outputs"].push_back(output_name(o));
  return j.dump(2);
}

BanditEnvironment environment_of(const ExperimentConfig& cfg) {
  return BanditEnvironment(cfg.machines, cfg.master_seed);
}

}  // namespace towbandit
