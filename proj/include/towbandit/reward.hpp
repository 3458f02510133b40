#pragma once

/**
 * Slot machines and the stochastic environment the algorithms play against.
 *
 * Gaussian rewards are sampled by inversion: one uniform draw from the run
 * stream is mapped through the standard-normal inverse CDF (AS241) and
 * scaled as fma(sigma, z, mu). The method is part of the reproducibility
 * contract (bit-identical traces for identical seed and draw order) and must
 * not change. Bernoulli rewards compare the same uniform draw against p, so
 * every reward costs exactly one draw regardless of distribution.
 */

#include <cstdint>
#include <vector>

#include "towbandit/rng.hpp"

namespace towbandit {

enum class RewardKind { Bernoulli, Gaussian };

/// A machine's reward law: Bernoulli(p) or Gaussian(mu, sigma^2).
struct RewardDistribution {
  RewardKind kind = RewardKind::Gaussian;
  double p = 0.0;      // Bernoulli only
  double mu = 0.0;     // Gaussian mean
  double sigma = 0.0;  // Gaussian std dev, >= 0

  static RewardDistribution bernoulli(double p);
  static RewardDistribution gaussian(double mu, double sigma);

  bool operator==(const RewardDistribution&) const = default;
};

/// Mean reward of a machine.
double machine_mean(const RewardDistribution& dist);

/// Reward variance of a machine.
double machine_variance(const RewardDistribution& dist);

/// Standard-normal inverse CDF; u strictly inside (0, 1).
double normal_icdf(double u);

/**
 * An ordered list of machines plus the master seed. Index 0 is machine A
 * and index 1 machine B in two-machine experiments. Descriptions are
 * immutable and shareable; random streams are per-run.
 */
struct BanditEnvironment {
  std::vector<RewardDistribution> machines;
  std::uint64_t master_seed = 0;

  BanditEnvironment() = default;
  BanditEnvironment(std::vector<RewardDistribution> m, std::uint64_t seed);

  std::size_t size() const { return machines.size(); }

  /// Stream for one Monte Carlo run, derived from (master_seed, run_index).
  RandomStream run_stream(std::uint64_t run_index) const {
    return RandomStream(derive_run_seed(master_seed, run_index));
  }

  /// Index of the lowest-true-mean machine (ties resolved to the larger
  /// index). This is "machine B" in aggregate suboptimal-play curves.
  std::size_t suboptimal_index() const;

  bool operator==(const BanditEnvironment&) const = default;
};

/// One draw R_k(j) from machine `machine`; advances rng deterministically.
/// Throws std::invalid_argument if the index is out of range.
double sample_reward(const BanditEnvironment& env, std::size_t machine,
                     RandomStream& rng);

}  // namespace towbandit
