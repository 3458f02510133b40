#pragma once

/**
 * Per-run and aggregate result records.
 *
 * Trace rows carry the per-index counts n_a = plays of machine 0 and
 * n_b = plays of machine 1. Aggregate curves instead track suboptimal
 * plays: mean_n_b[t] is the mean number of plays of the lower-true-mean
 * machine after t+1 steps, the quantity the regret theory bounds.
 */

#include <cstdint>
#include <vector>

namespace towbandit {

struct PlayRecord {
  std::uint64_t t = 0;
  std::size_t machine = 0;
  double reward = 0.0;
  double cum_reward = 0.0;
  std::uint64_t n_a = 0;  // plays of machine 0 after this row
  std::uint64_t n_b = 0;  // plays of machine 1 after this row
  // Decision variable at this step: X_A for the tug-of-war, Q_A - Q_B for
  // SOFTMAX, S_A - S_B for the cheater.
  double x_a = 0.0;
};

struct RunTrace {
  std::vector<PlayRecord> rows;
};

/// Optional device-voltage view of a tug-of-war run.
struct VoltageRecord {
  std::uint64_t t = 0;
  std::size_t machine = 0;
  double reward = 0.0;
  double delta_v = 0.0;
  double v_k = 0.0;
};

/// Per-play means over a Monte Carlo sample set. Length equals plays.
struct AggregateCurve {
  std::vector<double> mean_cum;  // mean cumulative reward after play t+1
  std::vector<double> mean_sub;  // mean suboptimal plays after play t+1
  std::uint64_t samples = 0;
};

}  // namespace towbandit
