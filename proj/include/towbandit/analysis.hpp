#pragma once

/**
 * Closed-form performance theory: the Gaussian tail (Q-function), its
 * Chernoff bound, the drift ratios phi and phi_T, first/second moments of
 * the decision statistic S for the cheater and tug-of-war variants, the
 * expected-suboptimal-plays bound and the regret, plus the cheater oracle
 * itself and the known-gamma imaginary-system difference.
 *
 * The mean of S = S_A - S_B for the plain cheater is (mu_A - mu_B) * n,
 * the only form consistent with the definition of S and with phi.
 */

#include <cstdint>
#include <utility>

#include "towbandit/reward.hpp"
#include "towbandit/rng.hpp"

namespace towbandit {

/// Two-machine problem parameters for the bound chain.
struct BoundParams {
  double mu_a = 0.0;   // higher mean (analysis convention)
  double mu_b = 0.0;   // lower mean
  double sigma_a = 0.0;
  double sigma_b = 0.0;
  double k = 0.0;      // learning parameter, for the tug-of-war variant
};

/// Standard-normal upper-tail probability. Relative error <= 1e-10 on
/// [0, 8] (in practice ~1e-15; see the kernel accuracy tests).
double q_function(double x);

/// Batched q_function over a grid, using the active SIMD backend.
void q_function_grid(const double* x, double* out, std::size_t n);

/// (1/2) exp(-x^2 / 2); dominates q_function(x) for x >= 0.
/// Throws std::invalid_argument for x < 0.
double chernoff_bound(double x);

/// phi = (mu_a - mu_b) / sqrt(sigma_a^2 + sigma_b^2).
double phi(const BoundParams& params);

/// phi_T = (mu_a - mu_b) / (2 sigma); the tug-of-war ratio at K = K0 with
/// equal sigmas. Throws for sigma <= 0.
double phi_t(double mu_a, double mu_b, double sigma);

/// Mean and variance of S = S_A - S_B after n steps of the plain cheater:
/// ((mu_a - mu_b) n, (sigma_a^2 + sigma_b^2) n).
std::pair<double, double> cheater_stats(const BoundParams& params,
                                        std::uint64_t n);

/// Mean and variance of S for the K-adjusted (tug-of-war) variant with
/// N = n total plays and D = n_a - n_b = d:
///   E = (mu_a - mu_b)/2 n + ((mu_a + mu_b)/2 - k) d
///   V = (sigma_a^2 + sigma_b^2)/2 n + (sigma_a^2 - sigma_b^2)/2 d
/// Both D coefficients vanish exactly at k = K0 and equal sigmas.
/// Throws if |d| > n.
std::pair<double, double> tow_stats(const BoundParams& params, std::uint64_t n,
                                    std::int64_t d);

/// P(suboptimal play at step t+1) = Q(phi sqrt(t)).
double wrong_play_probability(double phi_value, std::uint64_t t);

/// Closed-form upper bound on E(N_B) after n plays:
///   1/2 - (exp(-phi^2 (n-1) / 2) - 1) / phi^2,
/// increasing in n toward 1/2 + 1/phi^2. Requires phi > 0 and n >= 1.
double wrong_plays_bound(double phi_value, std::uint64_t n);

/// Limit of wrong_plays_bound as n grows: 1/2 + 1/phi^2.
double wrong_plays_bound_asymptote(double phi_value);

/// regret = (mu_a - mu_b) * E(N_B).
double regret_value(double mu_a, double mu_b, double expected_n_b);

/**
 * The cheater oracle: samples both machines every step but declares a play
 * of only the current leader. S_A and S_B accumulate draw - k_adjust;
 * k_adjust = 0 is the plain cheater, k_adjust = K the variant used to
 * analyse the tug-of-war dynamics.
 */
struct CheaterState {
  double s_a = 0.0;
  double s_b = 0.0;
  std::uint64_t n = 0;
};

/// A if s_a > s_b, B if s_b > s_a, uniform random on an exact tie
/// (consumes one draw only in the tie case).
std::size_t cheater_select(const CheaterState& state, RandomStream& rng);

/// One step: draws a reward from each machine (A first, then B) and
/// accumulates draw - k_adjust into the matching sum. Returns the pair of
/// draws so the caller can credit the declared machine.
std::pair<double, double> cheater_advance(CheaterState& state,
                                          const BanditEnvironment& env,
                                          RandomStream& rng, double k_adjust);

/// Q''_A - Q''_B of the imaginary known-gamma system:
/// (sum_ra - sum_rb) - (gamma / 2)(n_a - n_b). Equals the tug-of-war
/// difference Q_A - Q_B whenever K = gamma / 2, for any history.
double imaginary_difference(double sum_ra, double sum_rb, std::uint64_t n_a,
                            std::uint64_t n_b, double gamma);

/// Everything the bound chain yields for one problem instance. The
/// phi_t-based entries are meaningful only when sigma_a == sigma_b
/// (has_phi_t); regret entries are (mu_a - mu_b) times the matching
/// expected-plays figure.
struct RegretReport {
  double phi = 0.0;
  double phi_t = 0.0;
  bool has_phi_t = false;
  double n_b_expected = 0.0;  // sum over t < n of Q(phi sqrt(t))
  double regret = 0.0;
  double bound_n_b = 0.0;  // closed form at n, via phi
  double bound_regret = 0.0;
  double bound_n_b_asymptote = 0.0;  // 1/2 + 1/phi^2
  double tow_bound_n_b = 0.0;        // via phi_t
  double tow_bound_regret = 0.0;
  double tow_bound_n_b_asymptote = 0.0;
};

}  // namespace towbandit
