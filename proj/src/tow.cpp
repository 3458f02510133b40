#include "towbandit/tow.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace towbandit {

double fluctuation_value(const FluctuationSpec& spec, std::uint64_t t) {
  switch (spec.kind) {
    case FluctuationKind::AlternatingSine:
      return (t % 2 == 0) ? spec.amplitude : -spec.amplitude;
    case FluctuationKind::None:
      return 0.0;
    case FluctuationKind::Custom:
      if (!spec.custom) throw std::invalid_argument("custom fluctuation unset");
      return spec.custom(t);
  }
  return 0.0;
}

namespace {

double fluctuation_phase(const FluctuationSpec& spec, std::uint64_t t,
                         std::size_t machine, std::size_t machines) {
  if (spec.kind != FluctuationKind::AlternatingSine) {
    // None: zero. Custom: machine 0 gets the hook value, machine 1 its
    // negation; further machines get zero (the hook defines a scalar).
    const double base = fluctuation_value(spec, t);
    if (machine == 0) return base;
    if (machine == 1) return -base;
    return 0.0;
  }
  if (machines % 2 == 1 && machine == machines - 1) return 0.0;
  return ((t + machine) % 2 == 0) ? spec.amplitude : -spec.amplitude;
}

}  // namespace

double tow_displacement(const TowState& state, std::uint64_t t) {
  if (state.machines() != 2) {
    throw std::invalid_argument(
        "tow_displacement is the two-machine form; use tow_displacements");
  }
  return (state.q[0] - state.q[1]) + fluctuation_value(state.config.fluctuation, t);
}

std::vector<double> tow_displacements(const TowState& state, std::uint64_t t) {
  const std::size_t m = state.machines();
  std::vector<double> x(m);
  if (m == 2) {
    const double xa = tow_displacement(state, t);
    x[0] = xa;
    x[1] = -xa;
    return x;
  }
  double total = 0.0;
  for (double qk : state.q) total += qk;
  const double inv = 1.0 / static_cast<double>(m - 1);
  for (std::size_t k = 0; k < m; ++k) {
    x[k] = state.q[k] - (total - state.q[k]) * inv +
           fluctuation_phase(state.config.fluctuation, t, k, m);
  }
  return x;
}

std::vector<std::size_t> tow_select(const TowState& state, std::uint64_t t,
                                    RandomStream& rng) {
  const std::vector<double> x = tow_displacements(state, t);
  std::vector<std::size_t> chosen;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (state.config.x0 + x[k] > state.config.th) chosen.push_back(k);
  }
  if (chosen.empty()) {
    // Fluctuation-driven escape: nothing (or everything, tied exactly at
    // the threshold) clears Th, so play one machine uniformly at random.
    const double u = rng.next_unit();
    auto pick = static_cast<std::size_t>(u * static_cast<double>(x.size()));
    if (pick >= x.size()) pick = x.size() - 1;
    chosen.push_back(pick);
  }
  return chosen;
}

void tow_update(TowState& state, std::size_t machine, double reward,
                double k_value) {
  if (machine >= state.machines()) {
    throw std::invalid_argument("tow_update: machine index out of range");
  }
  state.q[machine] += reward - k_value;
  state.sum_r[machine] += reward;
  state.n[machine] += 1;
}

double k0_oracle(const std::vector<double>& means, std::size_t m) {
  if (means.empty()) throw std::invalid_argument("k0_oracle: no means");
  if (m < 1 || m > means.size() - 1) {
    throw std::invalid_argument("k0_oracle: rank m=" + std::to_string(m) +
                                " outside [1, " +
                                std::to_string(means.size() - 1) + "]");
  }
  std::vector<double> sorted = means;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  return (sorted[m - 1] + sorted[m]) * 0.5;
}

double k_adaptive(const TowState& state) {
  double top1 = 0.0, top2 = 0.0;
  bool have1 = false, have2 = false;
  for (std::size_t k = 0; k < state.machines(); ++k) {
    if (state.n[k] == 0) return 0.0;
    const double mean = state.sum_r[k] / static_cast<double>(state.n[k]);
    if (!have1 || mean > top1) {
      top2 = top1;
      have2 = have1;
      top1 = mean;
      have1 = true;
    } else if (!have2 || mean > top2) {
      top2 = mean;
      have2 = true;
    }
  }
  return (top1 + top2) * 0.5;
}

double current_k(const TowState& state, const std::vector<double>& true_means) {
  switch (state.config.k_policy.mode) {
    case KMode::Fixed:
      return state.config.k_policy.k_fixed;
    case KMode::OracleK0:
      return k0_oracle(true_means, state.config.k_policy.m);
    case KMode::AdaptiveK0:
      return k_adaptive(state);
  }
  return state.config.k_policy.k_fixed;
}

std::pair<double, double> electrode_heights(const TowState& state,
                                            std::uint64_t t) {
  const double xa = tow_displacement(state, t);
  return {state.config.x0 + xa, state.config.x0 - xa};
}

}  // namespace towbandit
