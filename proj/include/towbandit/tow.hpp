#pragma once

/**
 * Tug-of-war decision dynamics.
 *
 * State is a pair (generally a list) of accumulators Q_k, one per machine,
 * updated by the learning rule Q_k += R_k - K whenever machine k is played.
 * For two machines the displacement is X_A(t) = Q_A - Q_B + delta(t) and
 * X_B is defined as -X_A, never computed independently; the conserved
 * quantity X_A + X_B == 0 therefore holds bit-exactly at every step.
 * A machine is played when x0 + X_k exceeds the height threshold Th.
 *
 * delta(t) alternates sign exactly per step parity rather than evaluating a
 * floating-point sine; at integer steps the two agree and the parity form
 * has no drift.
 */

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "towbandit/rng.hpp"

namespace towbandit {

enum class FluctuationKind { AlternatingSine, None, Custom };

/// delta(t): +/- amplitude alternation, zero, or a caller-supplied hook.
struct FluctuationSpec {
  FluctuationKind kind = FluctuationKind::AlternatingSine;
  double amplitude = 1.0;
  std::function<double(std::uint64_t)> custom;  // Custom only

  static FluctuationSpec alternating(double amplitude = 1.0) {
    return {FluctuationKind::AlternatingSine, amplitude, nullptr};
  }
  static FluctuationSpec none() { return {FluctuationKind::None, 0.0, nullptr}; }
};

enum class KMode { Fixed, OracleK0, AdaptiveK0 };

/// Learning-parameter policy. OracleK0 reads the true means; AdaptiveK0
/// uses only observed rewards (a documented extension of the fixed-K rule).
struct KPolicy {
  KMode mode = KMode::Fixed;
  double k_fixed = 0.0;
  std::size_t m = 1;  // which top pair of means to separate (OracleK0)

  static KPolicy fixed(double k) { return {KMode::Fixed, k, 1}; }
  static KPolicy oracle_k0(std::size_t m = 1) { return {KMode::OracleK0, 0.0, m}; }
  static KPolicy adaptive_k0() { return {KMode::AdaptiveK0, 0.0, 1}; }

  bool operator==(const KPolicy&) const = default;
};

struct TowConfig {
  double x0 = 5.0;  // base height, arbitrary units
  double th = 5.0;  // height threshold; default equals x0
  KPolicy k_policy = KPolicy::fixed(0.0);
  double v0 = 1.0;  // base bias magnitude; voltage trace only, never decisions
  FluctuationSpec fluctuation = FluctuationSpec::alternating();
};

/// Accumulators for one run. q[k] is the learning-rule sum of (R - K);
/// sum_r[k] and n[k] track raw rewards and play counts (sum_r feeds the
/// adaptive-K estimate and the voltage trace only).
struct TowState {
  TowConfig config;
  std::vector<double> q;
  std::vector<double> sum_r;
  std::vector<std::uint64_t> n;
  std::uint64_t t = 0;

  TowState(TowConfig cfg, std::size_t machines)
      : config(std::move(cfg)),
        q(machines, 0.0),
        sum_r(machines, 0.0),
        n(machines, 0) {}

  std::size_t machines() const { return q.size(); }
};

/// Learning-rule increment: reward - k.
inline double delta_v(double reward, double k) { return reward - k; }

/// Bias actually applied to the device for one play: -(v0 + delta_v).
/// Trace output only.
inline double applied_voltage(double dv, double v0) { return -(v0 + dv); }

/// delta(t). AlternatingSine is exactly +/- amplitude by step parity.
double fluctuation_value(const FluctuationSpec& spec, std::uint64_t t);

/// X_A(t) = Q_A - Q_B + delta(t). Two-machine state only.
double tow_displacement(const TowState& state, std::uint64_t t);

/// Generalized displacements for M >= 2 machines:
///   X_k = Q_k - (sum_{j != k} Q_j) / (M - 1) + delta_k(t),
/// with delta_k alternating in phase (t + k) and, for odd M, the last
/// machine's delta zeroed so the deltas sum to zero. For M == 2 this
/// reduces exactly to (X_A, -X_A). The M > 2 form is an extension; the
/// two-machine dynamics are the modeled device.
std::vector<double> tow_displacements(const TowState& state, std::uint64_t t);

/// Machines to play at step t: every k with x0 + X_k(t) > th. When no
/// machine clears the threshold (including an exact all-way tie), one
/// machine is chosen uniformly at random so the dynamics cannot deadlock.
std::vector<std::size_t> tow_select(const TowState& state, std::uint64_t t,
                                    RandomStream& rng);

/// Apply one play: q[machine] += reward - k_value, counts updated.
/// The step counter advances once per step, after every selected machine
/// has been updated (see the harness step loop), not here.
void tow_update(TowState& state, std::size_t machine, double reward,
                double k_value);

/// K0 for separating the top m-th and (m+1)-th machines:
/// (mu_(m) + mu_(m+1)) / 2 over the means sorted in descending order.
/// Requires 1 <= m <= M - 1.
double k0_oracle(const std::vector<double>& means, std::size_t m);

/// Adaptive K0 from observed rewards: half the sum of the two largest
/// empirical means. Any machine still unplayed would rank top with an
/// undefined mean, so the fallback value 0 is returned until every machine
/// has been played at least once.
double k_adaptive(const TowState& state);

/// Resolve the per-step K value for a state given the true means (used only
/// by the OracleK0 mode).
double current_k(const TowState& state, const std::vector<double>& true_means);

/// (x0 + X_A, x0 - X_A). Their sum equals 2 * x0 identically in the stored
/// displacement. Two-machine state only.
std::pair<double, double> electrode_heights(const TowState& state,
                                            std::uint64_t t);

}  // namespace towbandit
