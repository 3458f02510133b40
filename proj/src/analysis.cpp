#include "towbandit/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "towbandit/simd/engine.hpp"
#include "towbandit/simd/math.hpp"

namespace towbandit {

double q_function(double x) {
  return simd::qfunc_pd<simd::ScalarBackend>(x);
}

void q_function_grid(const double* x, double* out, std::size_t n) {
  simd::active_engine().qfunc(x, out, n);
}

double chernoff_bound(double x) {
  if (x < 0.0) {
    throw std::invalid_argument("chernoff_bound: x must be nonnegative");
  }
  return 0.5 * std::exp(-0.5 * x * x);
}

double phi(const BoundParams& params) {
  const double var = params.sigma_a * params.sigma_a +
                     params.sigma_b * params.sigma_b;
  if (var <= 0.0) {
    throw std::invalid_argument("phi: sigma_a and sigma_b are both zero");
  }
  return (params.mu_a - params.mu_b) / std::sqrt(var);
}

double phi_t(double mu_a, double mu_b, double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("phi_t: sigma must be > 0");
  return (mu_a - mu_b) / (2.0 * sigma);
}

std::pair<double, double> cheater_stats(const BoundParams& params,
                                        std::uint64_t n) {
  const double nd = static_cast<double>(n);
  return {(params.mu_a - params.mu_b) * nd,
          (params.sigma_a * params.sigma_a +
           params.sigma_b * params.sigma_b) *
              nd};
}

std::pair<double, double> tow_stats(const BoundParams& params, std::uint64_t n,
                                    std::int64_t d) {
  if (static_cast<std::uint64_t>(d < 0 ? -d : d) > n) {
    throw std::invalid_argument("tow_stats: |d| exceeds n");
  }
  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const double va = params.sigma_a * params.sigma_a;
  const double vb = params.sigma_b * params.sigma_b;
  const double mean = (params.mu_a - params.mu_b) * 0.5 * nd +
                      ((params.mu_a + params.mu_b) * 0.5 - params.k) * dd;
  const double var = (va + vb) * 0.5 * nd + (va - vb) * 0.5 * dd;
  return {mean, var};
}

double wrong_play_probability(double phi_value, std::uint64_t t) {
  return q_function(phi_value * std::sqrt(static_cast<double>(t)));
}

double wrong_plays_bound(double phi_value, std::uint64_t n) {
  if (!(phi_value > 0.0)) {
    throw std::invalid_argument("wrong_plays_bound: phi must be > 0");
  }
  if (n < 1) throw std::invalid_argument("wrong_plays_bound: n must be >= 1");
  const double p2 = phi_value * phi_value;
  const double nd = static_cast<double>(n);
  return 0.5 - (std::exp(-0.5 * p2 * (nd - 1.0)) - 1.0) / p2;
}

double wrong_plays_bound_asymptote(double phi_value) {
  if (!(phi_value > 0.0)) {
    throw std::invalid_argument("wrong_plays_bound_asymptote: phi must be > 0");
  }
  return 0.5 + 1.0 / (phi_value * phi_value);
}

double regret_value(double mu_a, double mu_b, double expected_n_b) {
  if (mu_a < mu_b) {
    throw std::invalid_argument("regret_value: mu_a must be >= mu_b");
  }
  if (expected_n_b < 0.0) {
    throw std::invalid_argument("regret_value: E(N_B) must be >= 0");
  }
  return (mu_a - mu_b) * expected_n_b;
}

std::size_t cheater_select(const CheaterState& state, RandomStream& rng) {
  if (state.s_a == state.s_b) {
    const double u = rng.next_unit();
    return u < 0.5 ? 0 : 1;
  }
  return state.s_a > state.s_b ? 0 : 1;
}

std::pair<double, double> cheater_advance(CheaterState& state,
                                          const BanditEnvironment& env,
                                          RandomStream& rng, double k_adjust) {
  if (env.size() != 2) {
    throw std::invalid_argument("cheater_advance: two-machine environments only");
  }
  const double r_a = sample_reward(env, 0, rng);
  const double r_b = sample_reward(env, 1, rng);
  state.s_a += (r_a - k_adjust);
  state.s_b += (r_b - k_adjust);
  state.n += 1;
  return {r_a, r_b};
}

double imaginary_difference(double sum_ra, double sum_rb, std::uint64_t n_a,
                            std::uint64_t n_b, double gamma) {
  const double dn = static_cast<double>(n_a) - static_cast<double>(n_b);
  return (sum_ra - sum_rb) - (gamma * 0.5) * dn;
}

}  // namespace towbandit
