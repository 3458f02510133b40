#include "towbandit/softmax.hpp"

#include <stdexcept>

#include "towbandit/simd/math.hpp"

namespace towbandit {

namespace {
using SB = simd::ScalarBackend;
}

std::pair<double, double> softmax_probabilities(double q_a, double q_b,
                                                double beta) {
  const double a = beta * q_a;
  const double b = beta * q_b;
  const double m = SB::max(a, b);
  const double ea = simd::exp_pd<SB>(a - m);
  const double eb = simd::exp_pd<SB>(b - m);
  const double s = ea + eb;
  return {ea / s, eb / s};
}

std::size_t softmax_select(const SoftmaxState& state, RandomStream& rng) {
  const double beta = beta_schedule(state.t, state.tau);
  const std::size_t m = state.machines();
  if (m == 2) {
    const auto [pa, pb] = softmax_probabilities(state.q(0), state.q(1), beta);
    (void)pb;
    const double u = rng.next_unit();
    return u < pa ? 0 : 1;
  }
  // M > 2: stable softmax over all machines, then inverse-CDF walk.
  double qmax = beta * state.q(0);
  for (std::size_t k = 1; k < m; ++k) qmax = SB::max(qmax, beta * state.q(k));
  std::vector<double> e(m);
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    e[k] = simd::exp_pd<SB>(beta * state.q(k) - qmax);
    total += e[k];
  }
  const double threshold = rng.next_unit() * total;
  double cum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    cum += e[k];
    if (threshold < cum) return k;
  }
  return m - 1;
}

void softmax_update(SoftmaxState& state, std::size_t machine, double reward) {
  if (machine >= state.machines()) {
    throw std::invalid_argument("softmax_update: machine index out of range");
  }
  state.sum_r[machine] += reward;
  state.n[machine] += 1;
  state.t += 1;
}

}  // namespace towbandit
