#include "towbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "towbandit/simd/engine.hpp"
#include "towbandit/softmax.hpp"

namespace towbandit {

namespace {

// Runs are reduced in fixed blocks of this many, in run-index order, so the
// summation tree is independent of thread scheduling.
constexpr std::size_t kReductionBlock = 64;

std::vector<double> true_means(const ExperimentConfig& cfg) {
  std::vector<double> means;
  means.reserve(cfg.machines.size());
  for (const auto& m : cfg.machines) means.push_back(machine_mean(m));
  return means;
}

struct ResolvedK {
  bool adaptive = false;
  double k_const = 0.0;
};

ResolvedK resolve_k(const KPolicy& policy, const std::vector<double>& means) {
  switch (policy.mode) {
    case KMode::Fixed:
      return {false, policy.k_fixed};
    case KMode::OracleK0:
      return {false, k0_oracle(means, policy.m)};
    case KMode::AdaptiveK0:
      return {true, 0.0};
  }
  return {false, policy.k_fixed};
}

TowConfig tow_config_of(const AlgorithmSpec& a) {
  TowConfig c;
  c.x0 = a.x0;
  c.th = a.th;
  c.v0 = a.v0;
  c.k_policy = a.k_policy;
  c.fluctuation = a.fluctuation_kind == FluctuationKind::None
                      ? FluctuationSpec::none()
                      : FluctuationSpec::alternating(a.fluctuation_amplitude);
  return c;
}

// ---------------------------------------------------------------------------
// Plain-operation per-run loops. These are the scalar reference the batched
// engines must match bit for bit: selection expressions, draw order and
// accumulation order are the contract. Curve, trace and voltage sinks all
// observe the same arithmetic.
// ---------------------------------------------------------------------------

struct RunSinks {
  double* out_cum = nullptr;  // per-play cumulative reward (length plays)
  double* out_sub = nullptr;  // per-play suboptimal plays (length plays)
  RunTrace* trace = nullptr;
  std::vector<VoltageRecord>* voltage = nullptr;
};

void run_asdm_reference(const ExperimentConfig& cfg, std::uint64_t run_index,
                        const RunSinks& sinks) {
  const BanditEnvironment env = environment_of(cfg);
  RandomStream rng = env.run_stream(run_index);
  TowState state(tow_config_of(cfg.algorithm), env.size());
  const ResolvedK rk = resolve_k(cfg.algorithm.k_policy, true_means(cfg));
  const std::size_t sub = env.suboptimal_index();

  double cum = 0.0;
  double nsub = 0.0;
  for (std::uint64_t t = 0; t < cfg.plays; ++t) {
    const std::vector<double> x = tow_displacements(state, t);
    const std::vector<std::size_t> sel = tow_select(state, t, rng);
    const double k = rk.adaptive ? k_adaptive(state) : rk.k_const;
    for (std::size_t idx : sel) {
      const double r = sample_reward(env, idx, rng);
      tow_update(state, idx, r, k);
      cum += r;
      if (idx == sub) nsub += 1.0;
      if (sinks.trace) {
        sinks.trace->rows.push_back(
            {t, idx, r, cum, state.n[0], state.n[1], x[0]});
      }
      if (sinks.voltage) {
        const double dv = delta_v(r, k);
        sinks.voltage->push_back(
            {t, idx, r, dv, applied_voltage(dv, cfg.algorithm.v0)});
      }
    }
    if (sinks.out_cum) {
      sinks.out_cum[t] = cum;
      sinks.out_sub[t] = nsub;
    }
    state.t += 1;
  }
}

void run_softmax_reference(const ExperimentConfig& cfg, std::uint64_t run_index,
                           const RunSinks& sinks) {
  const BanditEnvironment env = environment_of(cfg);
  RandomStream rng = env.run_stream(run_index);
  SoftmaxState state(cfg.algorithm.tau, env.size());
  const std::size_t sub = env.suboptimal_index();

  double cum = 0.0;
  double nsub = 0.0;
  for (std::uint64_t t = 0; t < cfg.plays; ++t) {
    const double dq = state.q(0) - state.q(1);
    const std::size_t idx = softmax_select(state, rng);
    const double r = sample_reward(env, idx, rng);
    softmax_update(state, idx, r);
    cum += r;
    if (idx == sub) nsub += 1.0;
    if (sinks.trace) {
      sinks.trace->rows.push_back({t, idx, r, cum, state.n[0], state.n[1], dq});
    }
    if (sinks.out_cum) {
      sinks.out_cum[t] = cum;
      sinks.out_sub[t] = nsub;
    }
  }
}

void run_cheater_reference(const ExperimentConfig& cfg, std::uint64_t run_index,
                           const RunSinks& sinks) {
  const BanditEnvironment env = environment_of(cfg);
  RandomStream rng = env.run_stream(run_index);
  CheaterState state;
  const std::size_t sub = env.suboptimal_index();

  double cum = 0.0;
  double nsub = 0.0;
  std::uint64_t declared[2] = {0, 0};
  for (std::uint64_t t = 0; t < cfg.plays; ++t) {
    const double ds = state.s_a - state.s_b;
    const std::size_t idx = cheater_select(state, rng);
    const auto [r_a, r_b] =
        cheater_advance(state, env, rng, cfg.algorithm.k_adjust);
    const double r = idx == 0 ? r_a : r_b;
    cum += r;
    declared[idx] += 1;
    if (idx == sub) nsub += 1.0;
    if (sinks.trace) {
      sinks.trace->rows.push_back({t, idx, r, cum, declared[0], declared[1], ds});
    }
    if (sinks.out_cum) {
      sinks.out_cum[t] = cum;
      sinks.out_sub[t] = nsub;
    }
  }
}

void run_reference(const ExperimentConfig& cfg, std::uint64_t run_index,
                   const RunSinks& sinks) {
  switch (cfg.algorithm.kind) {
    case AlgorithmKind::Asdm:
      run_asdm_reference(cfg, run_index, sinks);
      return;
    case AlgorithmKind::Softmax:
      run_softmax_reference(cfg, run_index, sinks);
      return;
    case AlgorithmKind::Cheater:
      run_cheater_reference(cfg, run_index, sinks);
      return;
  }
}

// ---------------------------------------------------------------------------
// Engine parameter builders (two-machine configurations).
// ---------------------------------------------------------------------------

simd::MachineParams machine_params_of(const RewardDistribution& d) {
  simd::MachineParams mp;
  mp.bernoulli = d.kind == RewardKind::Bernoulli;
  mp.mu = d.mu;
  mp.sigma = d.sigma;
  mp.p = d.p;
  return mp;
}

simd::EngineEnv engine_env_of(const ExperimentConfig& cfg) {
  simd::EngineEnv env;
  env.machine[0] = machine_params_of(cfg.machines[0]);
  env.machine[1] = machine_params_of(cfg.machines[1]);
  env.suboptimal =
      static_cast<int>(environment_of(cfg).suboptimal_index());
  return env;
}

struct EngineJob {
  AlgorithmKind kind;
  simd::AsdmEngineParams asdm;
  simd::SoftmaxEngineParams softmax;
  simd::CheaterEngineParams cheater;

  void run(const simd::EngineOps& ops, const std::uint64_t* seeds,
           std::size_t plays, double* cum, double* sub) const {
    switch (kind) {
      case AlgorithmKind::Asdm:
        ops.asdm(asdm, seeds, plays, cum, sub);
        return;
      case AlgorithmKind::Softmax:
        ops.softmax(softmax, seeds, plays, cum, sub);
        return;
      case AlgorithmKind::Cheater:
        ops.cheater(cheater, seeds, plays, cum, sub);
        return;
    }
  }
};

EngineJob engine_job_of(const ExperimentConfig& cfg) {
  EngineJob job;
  job.kind = cfg.algorithm.kind;
  const simd::EngineEnv env = engine_env_of(cfg);
  switch (cfg.algorithm.kind) {
    case AlgorithmKind::Asdm: {
      simd::AsdmEngineParams p;
      p.env = env;
      p.x0 = cfg.algorithm.x0;
      p.th = cfg.algorithm.th;
      p.amplitude = cfg.algorithm.fluctuation_kind == FluctuationKind::None
                        ? 0.0
                        : cfg.algorithm.fluctuation_amplitude;
      const ResolvedK rk =
          resolve_k(cfg.algorithm.k_policy, true_means(cfg));
      p.kmode = rk.adaptive ? simd::EngineKMode::Adaptive
                            : simd::EngineKMode::Fixed;
      p.k_fixed = rk.k_const;
      job.asdm = p;
      break;
    }
    case AlgorithmKind::Softmax:
      job.softmax = {env, cfg.algorithm.tau};
      break;
    case AlgorithmKind::Cheater:
      job.cheater = {env, cfg.algorithm.k_adjust};
      break;
  }
  return job;
}

}  // namespace

RunTrace run_single(const ExperimentConfig& cfg, std::uint64_t run_index,
                    std::vector<VoltageRecord>* voltage) {
  validate_config(cfg);
  RunTrace trace;
  RunSinks sinks;
  sinks.trace = &trace;
  if (voltage != nullptr && cfg.algorithm.kind == AlgorithmKind::Asdm) {
    voltage->clear();
    sinks.voltage = voltage;
  }
  run_reference(cfg, run_index, sinks);
  return trace;
}

void run_curve_reference(const ExperimentConfig& cfg, std::uint64_t run_index,
                         double* out_cum, double* out_sub) {
  RunSinks sinks;
  sinks.out_cum = out_cum;
  sinks.out_sub = out_sub;
  run_reference(cfg, run_index, sinks);
}

unsigned effective_threads(unsigned requested, std::size_t blocks) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned t = requested == 0 ? hw : requested;
  if (const char* env = std::getenv("TOW_BANDIT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) {
      t = std::min<unsigned>(t, static_cast<unsigned>(cap));
    }
  }
  if (blocks < t) t = static_cast<unsigned>(blocks);
  return std::max(1u, t);
}

AggregateCurve monte_carlo(const ExperimentConfig& cfg, McOptions opts) {
  validate_config(cfg);
  const std::size_t plays = cfg.plays;
  const std::size_t samples = cfg.samples;
  const std::size_t nblocks = (samples + kReductionBlock - 1) / kReductionBlock;

  const bool engine_eligible = cfg.machines.size() == 2;
  const simd::EngineOps& active = simd::active_engine();
  const simd::EngineOps& scalar = simd::scalar_engine();
  EngineJob job;
  if (engine_eligible) job = engine_job_of(cfg);

  std::vector<std::vector<double>> block_cum(nblocks), block_sub(nblocks);

  auto process_block = [&](std::size_t b) {
    const std::size_t begin = b * kReductionBlock;
    const std::size_t end = std::min(samples, begin + kReductionBlock);
    auto& bc = block_cum[b];
    auto& bs = block_sub[b];
    bc.assign(plays, 0.0);
    bs.assign(plays, 0.0);
    const std::size_t maxw = static_cast<std::size_t>(active.width);
    std::vector<double> cum_buf(maxw * plays), sub_buf(maxw * plays);
    std::uint64_t seeds[8] = {};

    std::size_t r = begin;
    while (r < end) {
      std::size_t lanes = 1;
      if (!engine_eligible) {
        run_curve_reference(cfg, r, cum_buf.data(), sub_buf.data());
      } else if (r + maxw <= end) {
        lanes = maxw;
        for (std::size_t l = 0; l < lanes; ++l) {
          seeds[l] = derive_run_seed(cfg.master_seed, r + l);
        }
        job.run(active, seeds, plays, cum_buf.data(), sub_buf.data());
      } else {
        seeds[0] = derive_run_seed(cfg.master_seed, r);
        job.run(scalar, seeds, plays, cum_buf.data(), sub_buf.data());
      }
      // accumulate lane curves in run-index order
      for (std::size_t l = 0; l < lanes; ++l) {
        const double* cl = cum_buf.data() + l * plays;
        const double* sl = sub_buf.data() + l * plays;
        for (std::size_t t = 0; t < plays; ++t) {
          bc[t] += cl[t];
          bs[t] += sl[t];
        }
      }
      r += lanes;
    }
  };

  const unsigned threads = effective_threads(opts.threads, nblocks);
  if (threads <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) process_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t b = next.fetch_add(1);
          if (b >= nblocks) return;
          try {
            process_block(b);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  AggregateCurve out;
  out.samples = samples;
  out.mean_cum.assign(plays, 0.0);
  out.mean_sub.assign(plays, 0.0);
  std::vector<double> total_cum(plays, 0.0), total_sub(plays, 0.0);
  for (std::size_t b = 0; b < nblocks; ++b) {
    for (std::size_t t = 0; t < plays; ++t) {
      total_cum[t] += block_cum[b][t];
      total_sub[t] += block_sub[b][t];
    }
  }
  const double inv = static_cast<double>(samples);
  for (std::size_t t = 0; t < plays; ++t) {
    out.mean_cum[t] = total_cum[t] / inv;
    out.mean_sub[t] = total_sub[t] / inv;
  }
  return out;
}

CompareTable compare(const std::vector<ExperimentConfig>& configs,
                     McOptions opts) {
  if (configs.empty()) throw ConfigError("compare: no configurations given");
  for (const auto& cfg : configs) validate_config(cfg);
  const ExperimentConfig& first = configs.front();
  for (const auto& cfg : configs) {
    if (cfg.machines != first.machines || cfg.plays != first.plays ||
        cfg.samples != first.samples ||
        cfg.master_seed != first.master_seed) {
      throw ConfigError(
          "compare: configurations must share machines, master_seed, plays "
          "and samples");
    }
  }

  CompareTable table;
  table.plays = first.plays;
  table.samples = first.samples;
  for (const auto& cfg : configs) {
    std::string name = algorithm_name(cfg.algorithm.kind);
    unsigned suffix = 2;
    while (std::find(table.names.begin(), table.names.end(), name) !=
           table.names.end()) {
      name = std::string(algorithm_name(cfg.algorithm.kind)) + "_" +
             std::to_string(suffix++);
    }
    table.names.push_back(name);
    table.columns.push_back(monte_carlo(cfg, opts).mean_cum);
  }
  return table;
}

RegretReport bounds_report(const BoundParams& params, std::uint64_t plays) {
  if (!(params.sigma_a > 0.0) || !(params.sigma_b > 0.0)) {
    throw std::invalid_argument("bounds_report: sigmas must be > 0");
  }
  if (!(params.mu_a > params.mu_b)) {
    throw std::invalid_argument("bounds_report: mu_a must exceed mu_b");
  }
  if (plays < 1) throw std::invalid_argument("bounds_report: plays must be >= 1");

  RegretReport rep;
  rep.phi = phi(params);
  rep.has_phi_t = params.sigma_a == params.sigma_b;
  if (rep.has_phi_t) rep.phi_t = phi_t(params.mu_a, params.mu_b, params.sigma_a);

  std::vector<double> xs(plays), qs(plays);
  for (std::uint64_t t = 0; t < plays; ++t) {
    xs[t] = rep.phi * std::sqrt(static_cast<double>(t));
  }
  q_function_grid(xs.data(), qs.data(), plays);
  double sum = 0.0;
  for (std::uint64_t t = 0; t < plays; ++t) sum += qs[t];

  rep.n_b_expected = sum;
  rep.regret = regret_value(params.mu_a, params.mu_b, sum);
  rep.bound_n_b = wrong_plays_bound(rep.phi, plays);
  rep.bound_regret = regret_value(params.mu_a, params.mu_b, rep.bound_n_b);
  rep.bound_n_b_asymptote = wrong_plays_bound_asymptote(rep.phi);
  if (rep.has_phi_t) {
    rep.tow_bound_n_b = wrong_plays_bound(rep.phi_t, plays);
    rep.tow_bound_regret =
        regret_value(params.mu_a, params.mu_b, rep.tow_bound_n_b);
    rep.tow_bound_n_b_asymptote = wrong_plays_bound_asymptote(rep.phi_t);
  }
  return rep;
}

std::string bounds_report_text(const BoundParams& params, std::uint64_t plays,
                               const RegretReport& rep) {
  std::string out;
  auto kv = [&out](const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  kv("mu_a", format_double(params.mu_a));
  kv("mu_b", format_double(params.mu_b));
  kv("sigma_a", format_double(params.sigma_a));
  kv("sigma_b", format_double(params.sigma_b));
  kv("k", format_double(params.k));
  kv("plays", std::to_string(plays));
  kv("phi", format_double(rep.phi));
  if (rep.has_phi_t) kv("phi_t", format_double(rep.phi_t));
  kv("n_b_expected", format_double(rep.n_b_expected));
  kv("regret", format_double(rep.regret));
  kv("bound_n_b", format_double(rep.bound_n_b));
  kv("bound_regret", format_double(rep.bound_regret));
  kv("bound_n_b_asymptote", format_double(rep.bound_n_b_asymptote));
  kv("bound_regret_asymptote",
     format_double(regret_value(params.mu_a, params.mu_b,
                                rep.bound_n_b_asymptote)));
  if (rep.has_phi_t) {
    kv("tow_bound_n_b", format_double(rep.tow_bound_n_b));
    kv("tow_bound_regret", format_double(rep.tow_bound_regret));
    kv("tow_bound_n_b_asymptote", format_double(rep.tow_bound_n_b_asymptote));
    kv("tow_bound_regret_asymptote",
       format_double(regret_value(params.mu_a, params.mu_b,
                                  rep.tow_bound_n_b_asymptote)));
  }
  return out;
}

}  // namespace towbandit
