#include <doctest.h>

#include "towbandit/config.hpp"

using namespace towbandit;

namespace {
const char* kFig2Json = R"({
  "machines": [
    {"kind": "gaussian", "mu": 0.5, "sigma": 0.2},
    {"kind": "gaussian", "mu": 0.6, "sigma": 0.2}
  ],
  "algorithm": {"name": "asdm", "k": 0.55},
  "plays": 1000,
  "samples": 1000,
  "master_seed": 42,
  "outputs": ["curve_csv", "plot_script"]
})";
}  // namespace

TEST_CASE("config parses the documented schema") {
  const ExperimentConfig cfg = config_from_json(kFig2Json);
  CHECK(cfg.machines.size() == 2);
  CHECK(cfg.machines[0].mu == 0.5);
  CHECK(cfg.machines[1].mu == 0.6);
  CHECK(cfg.algorithm.kind == AlgorithmKind::Asdm);
  CHECK(cfg.algorithm.k_policy.mode == KMode::Fixed);
  CHECK(cfg.algorithm.k_policy.k_fixed == 0.55);
  CHECK(cfg.algorithm.x0 == 5.0);
  CHECK(cfg.algorithm.th == 5.0);  // default Th = X0
  CHECK(cfg.algorithm.fluctuation_amplitude == 1.0);
  CHECK(cfg.plays == 1000);
  CHECK(cfg.samples == 1000);
  CHECK(cfg.master_seed == 42);
  CHECK(cfg.outputs ==
        std::vector<OutputKind>{OutputKind::CurveCsv, OutputKind::PlotScript});
}

TEST_CASE("config round-trips losslessly through JSON") {
  for (const char* text :
       {kFig2Json,
        R"({"machines":[{"kind":"bernoulli","p":0.30000000000000004},
            {"kind":"gaussian","mu":-1.0e-7,"sigma":0.123456789012345678}],
            "algorithm":{"name":"softmax","tau":0.3},
            "plays":17,"samples":3,"master_seed":18446744073709551615})",
        R"({"machines":[{"kind":"gaussian","mu":0.5,"sigma":0.2},
            {"kind":"gaussian","mu":0.6,"sigma":0.2}],
            "algorithm":{"name":"asdm",
              "k_policy":{"mode":"oracle_k0","m":1},
              "th":4.75,"x0":5.5,"v0":2.0,
              "fluctuation_kind":"none","fluctuation_amplitude":0.0},
            "plays":10,"samples":2,"master_seed":7,
            "outputs":["trace_csv","voltage_csv"]})",
        R"({"machines":[{"kind":"gaussian","mu":0.5,"sigma":0.2},
            {"kind":"gaussian","mu":0.6,"sigma":0.2}],
            "algorithm":{"name":"cheater","k_adjust":0.55},
            "plays":5,"samples":1,"master_seed":0})"}) {
    const ExperimentConfig first = config_from_json(text);
    const std::string canonical = config_to_json(first);
    const ExperimentConfig second = config_from_json(canonical);
    CHECK(first == second);
    // canonical form is a fixed point
    CHECK(config_to_json(second) == canonical);
  }
}

TEST_CASE("adaptive policy and master seed extremes round-trip") {
  ExperimentConfig cfg = config_from_json(kFig2Json);
  cfg.algorithm.k_policy = KPolicy::adaptive_k0();
  cfg.master_seed = 0xFFFFFFFFFFFFFFFFULL;
  const ExperimentConfig back = config_from_json(config_to_json(cfg));
  CHECK(back == cfg);
}

TEST_CASE("invalid configurations are rejected with ConfigError") {
  auto reject = [](const std::string& text) {
    CHECK_THROWS_AS((void)config_from_json(text), ConfigError);
  };
  reject("{not json");
  reject(R"({"machines":[{"kind":"gaussian","mu":0.5,"sigma":0.2}],
    "algorithm":{"name":"asdm","k":0.5},"plays":1,"samples":1,"master_seed":0})");
  reject(R"({"machines":[{"kind":"bernoulli","p":1.5},{"kind":"bernoulli","p":0.5}],
    "algorithm":{"name":"asdm","k":0.5},"plays":1,"samples":1,"master_seed":0})");
  reject(R"({"machines":[{"kind":"gaussian","mu":0.5,"sigma":-0.1},
    {"kind":"gaussian","mu":0.6,"sigma":0.2}],
    "algorithm":{"name":"asdm","k":0.5},"plays":1,"samples":1,"master_seed":0})");
  // plays = 0 rejected before any run starts
  reject(R"({"machines":[{"kind":"gaussian","mu":0.5,"sigma":0.2},
    {"kind":"gaussian","mu":0.6,"sigma":0.2}],
    "algorithm":{"name":"asdm","k":0.5},"plays":0,"samples":1,"master_seed":0})");
  // tau <= 0 rejected
  reject(R"({"machines":[{"kind":"gaussian","mu":0.5,"sigma":0.2},
    {"kind":"gaussian","mu":0.6,"sigma":0.2}],
    "algorithm":{"name":"softmax","tau":0.0},"plays":1,"samples":1,"master_seed":0})");
  // cheater needs exactly two machines
  reject(R"({"machines":[{"kind":"gaussian","mu":0.5,"sigma":0.2},
    {"kind":"gaussian","mu":0.6,"sigma":0.2},{"kind":"gaussian","mu":0.7,"sigma":0.2}],
    "algorithm":{"name":"cheater"},"plays":1,"samples":1,"master_seed":0})");
  // voltage trace only applies to the tug-of-war device
  reject(R"({"machines":[{"kind":"gaussian","mu":0.5,"sigma":0.2},
    {"kind":"gaussian","mu":0.6,"sigma":0.2}],
    "algorithm":{"name":"softmax","tau":0.3},
    "plays":1,"samples":1,"master_seed":0,"outputs":["voltage_csv"]})");
  // oracle rank out of range
  reject(R"({"machines":[{"kind":"gaussian","mu":0.5,"sigma":0.2},
    {"kind":"gaussian","mu":0.6,"sigma":0.2}],
    "algorithm":{"name":"asdm","k_policy":{"mode":"oracle_k0","m":2}},
    "plays":1,"samples":1,"master_seed":0})");
  reject(R"({"machines":[{"kind":"gaussian","mu":0.5,"sigma":0.2},
    {"kind":"gaussian","mu":0.6,"sigma":0.2}],
    "algorithm":{"name":"ucb1"},"plays":1,"samples":1,"master_seed":0})");
}

TEST_CASE("environment_of carries machines and master seed") {
  const ExperimentConfig cfg = config_from_json(kFig2Json);
  const BanditEnvironment env = environment_of(cfg);
  CHECK(env.machines == cfg.machines);
  CHECK(env.master_seed == 42);
  CHECK(env.suboptimal_index() == 0);
}
