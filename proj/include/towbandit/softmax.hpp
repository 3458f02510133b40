#pragma once

/**
 * SOFTMAX baseline: Boltzmann selection over running mean rewards with the
 * linear inverse-temperature schedule beta(t) = tau * t. beta = 0 is uniform
 * random selection; beta -> infinity is greedy.
 */

#include <cstdint>
#include <utility>
#include <vector>

#include "towbandit/rng.hpp"

namespace towbandit {

struct SoftmaxState {
  std::vector<double> sum_r;
  std::vector<std::uint64_t> n;
  double tau = 0.3;
  std::uint64_t t = 0;

  SoftmaxState(double tau_, std::size_t machines)
      : sum_r(machines, 0.0), n(machines, 0), tau(tau_) {}

  std::size_t machines() const { return sum_r.size(); }

  /// Running mean reward; 0 for a machine that has not been played (at t=0
  /// beta is 0 anyway, so early selection is uniform regardless).
  double q(std::size_t k) const {
    return n[k] == 0 ? 0.0 : sum_r[k] / static_cast<double>(n[k]);
  }
};

/// beta(t) = tau * t.
inline double beta_schedule(std::uint64_t t, double tau) {
  return tau * static_cast<double>(t);
}

/// Two-machine Boltzmann probabilities (P'_A, P'_B). Stabilised by
/// subtracting the larger exponent, so |beta * Q| up to ~700 is safe.
std::pair<double, double> softmax_probabilities(double q_a, double q_b,
                                                double beta);

/// Boltzmann selection at beta(t) = tau * t; consumes one uniform draw.
std::size_t softmax_select(const SoftmaxState& state, RandomStream& rng);

/// Record one play: sum_r[machine] += reward, n[machine] += 1, t += 1.
void softmax_update(SoftmaxState& state, std::size_t machine, double reward);

}  // namespace towbandit
