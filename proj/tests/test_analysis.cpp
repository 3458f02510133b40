#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "towbandit/analysis.hpp"
#include "towbandit/harness.hpp"
#include "towbandit/tow.hpp"

using namespace towbandit;

namespace {
const BoundParams kFig2{0.6, 0.5, 0.2, 0.2, 0.55};
}

TEST_CASE("q_function anchors and reflection") {
  CHECK(q_function(0.0) == 0.5);
  // standard normal upper tail at the 97.5% quantile
  CHECK(q_function(1.959964) == doctest::Approx(0.025).epsilon(4e-5));
  CHECK(std::fabs(q_function(1.959964) - 0.024999999096442402) < 1e-12);
  for (double x : {0.1, 0.5, 1.0, 2.5, 4.0, 6.0}) {
    CHECK(std::fabs(q_function(-x) - (1.0 - q_function(x))) <= 1e-12);
  }
}

TEST_CASE("q_function matches a high-precision erfc oracle") {
  double max_rel = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = 8.0 * i / 1000.0;
    const long double oracle =
        0.5L * erfcl(static_cast<long double>(x) /
                     1.41421356237309504880168872420969808L);
    const double mine = q_function(x);
    const double rel = std::fabs(
        static_cast<double>((static_cast<long double>(mine) - oracle) / oracle));
    max_rel = std::max(max_rel, rel);
  }
  CHECK(max_rel <= 1e-10);
}

TEST_CASE("q_function via the grid path equals the scalar path") {
  std::vector<double> xs, out;
  for (int i = 0; i <= 997; ++i) xs.push_back(8.0 * i / 997.0);
  out.resize(xs.size());
  q_function_grid(xs.data(), out.data(), xs.size());
  bool equal = true;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    equal = equal && (out[i] == q_function(xs[i]));
  }
  CHECK(equal);
}

TEST_CASE("chernoff bound values and domination") {
  CHECK(chernoff_bound(0.0) == 0.5);
  CHECK(chernoff_bound(1.0) == doctest::Approx(0.303265).epsilon(1e-5));
  CHECK(std::fabs(chernoff_bound(1.0) - 0.30326532985631671) < 1e-15);
  CHECK_THROWS_AS((void)chernoff_bound(-0.1), std::invalid_argument);
  for (double x = 0.0; x <= 8.0001; x += 0.008) {
    CHECK(q_function(x) <= chernoff_bound(x));
  }
}

TEST_CASE("phi and phi_t") {
  CHECK(phi(kFig2) == doctest::Approx(0.3535534).epsilon(1e-6));
  CHECK(std::fabs(phi(kFig2) - 0.3535533905932738) < 1e-14);
  CHECK(phi({0.5, 0.5, 0.2, 0.2, 0.0}) == 0.0);
  const BoundParams doubled{0.6, 0.5, 0.4, 0.4, 0.55};
  CHECK(phi(doubled) == doctest::Approx(0.5 * phi(kFig2)).epsilon(1e-14));
  CHECK_THROWS_AS((void)phi({0.6, 0.5, 0.0, 0.0, 0.0}), std::invalid_argument);

  CHECK(phi_t(0.6, 0.5, 0.2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(phi_t(0.5, 0.5, 0.2) == 0.0);
  CHECK(phi_t(0.6, 0.5, 0.2) ==
        doctest::Approx(phi(kFig2) / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS((void)phi_t(0.6, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("cheater_stats moments") {
  const auto [mean, var] = cheater_stats(kFig2, 100);
  CHECK(mean == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(var == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(cheater_stats(kFig2, 0) == std::pair<double, double>{0.0, 0.0});
  // E / sqrt(V) == phi sqrt(n)
  for (std::uint64_t n : {1, 10, 100, 10000}) {
    const auto [e, v] = cheater_stats(kFig2, n);
    CHECK(std::fabs(e / std::sqrt(v) -
                    phi(kFig2) * std::sqrt(static_cast<double>(n))) <= 1e-12);
  }
}

TEST_CASE("tow_stats moments and the vanishing D coefficients") {
  // at K = K0 and equal sigmas both D coefficients are exactly zero
  BoundParams p = kFig2;
  p.k = k0_oracle({0.5, 0.6}, 1);
  const auto base = tow_stats(p, 100, 0);
  CHECK(base.first == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(base.second == doctest::Approx(4.0).epsilon(1e-12));
  for (std::int64_t d : {-100, -37, 12, 100}) {
    CHECK(tow_stats(p, 100, d) == base);  // bit-identical: coefficients are 0
  }
  // d = 0: mean independent of K
  for (double k : {0.0, 0.3, 0.9}) {
    BoundParams q = kFig2;
    q.k = k;
    CHECK(tow_stats(q, 100, 0).first == doctest::Approx(5.0).epsilon(1e-12));
  }
  // E / sqrt(V) == phi_t sqrt(n) at K0 and equal sigmas
  const auto [e, v] = tow_stats(p, 400, 0);
  CHECK(std::fabs(e / std::sqrt(v) - phi_t(0.6, 0.5, 0.2) * 20.0) <= 1e-12);
  CHECK_THROWS_AS((void)tow_stats(p, 10, 11), std::invalid_argument);
}

TEST_CASE("wrong_play_probability") {
  CHECK(wrong_play_probability(0.3536, 0) == 0.5);
  CHECK(wrong_play_probability(0.3536, 100) ==
        doctest::Approx(2.03e-4).epsilon(2e-3));
  CHECK(std::fabs(wrong_play_probability(0.3536, 100) -
                  0.00020311734675437894) < 1e-12);
  double prev = 1.0;
  for (std::uint64_t t : {0, 1, 2, 5, 10, 50, 100, 1000}) {
    const double p = wrong_play_probability(0.3536, t);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("wrong_plays_bound: anchors, monotonicity, convergence") {
  CHECK(wrong_plays_bound(0.3536, 1) == 0.5);
  CHECK(std::fabs(wrong_plays_bound(0.3536, 1000000) - 8.5) < 0.01);
  CHECK(wrong_plays_bound(0.25, 1000000) == 16.5);
  CHECK(wrong_plays_bound_asymptote(0.25) == 16.5);

  double prev = 0.0;
  for (std::uint64_t n : {1, 2, 5, 10, 100, 1000, 100000}) {
    const double b = wrong_plays_bound(0.3536, n);
    CHECK(b >= prev);
    prev = b;
  }
  for (double f = 0.1; f <= 1.0001; f += 0.1) {
    CHECK(std::fabs(wrong_plays_bound(f, 1000000) -
                    wrong_plays_bound_asymptote(f)) <= 1e-9);
  }
  CHECK_THROWS_AS((void)wrong_plays_bound(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS((void)wrong_plays_bound(-1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS((void)wrong_plays_bound(0.5, 0), std::invalid_argument);
}

TEST_CASE("regret_value") {
  CHECK(regret_value(0.6, 0.5, 16.5) == doctest::Approx(1.65).epsilon(1e-12));
  CHECK(regret_value(0.6, 0.5, 0.0) == 0.0);
  CHECK(regret_value(0.6, 0.5, 8.5) == doctest::Approx(0.85).epsilon(1e-12));
  CHECK_THROWS_AS((void)regret_value(0.5, 0.6, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)regret_value(0.6, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("cheater_select rules") {
  RandomStream rng(17);
  CHECK(cheater_select({1.2, 0.8, 0}, rng) == 0);
  CHECK(cheater_select({0.8, 1.2, 0}, rng) == 1);
  int a_count = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    RandomStream r(derive_run_seed(21, i));
    a_count += cheater_select({0.0, 0.0, 0}, r) == 0;
  }
  const double freq = static_cast<double>(a_count) / trials;
  CHECK(std::fabs(freq - 0.5) < 3.0 * std::sqrt(0.25 / trials));
}

TEST_CASE("cheater under identical machines is symmetric across runs") {
  // selection probability at any fixed step is exactly 1/2 by symmetry
  BanditEnvironment env({RewardDistribution::gaussian(0.5, 0.2),
                         RewardDistribution::gaussian(0.5, 0.2)},
                        31);
  const int runs = 3000;
  const int step = 50;
  int b_count = 0;
  for (int run = 0; run < runs; ++run) {
    RandomStream rng = env.run_stream(run);
    CheaterState st;
    std::size_t pick = 0;
    for (int t = 0; t <= step; ++t) {
      pick = cheater_select(st, rng);
      cheater_advance(st, env, rng, 0.0);
    }
    b_count += pick == 1;
  }
  const double freq = static_cast<double>(b_count) / runs;
  CHECK(std::fabs(freq - 0.5) < 3.0 * std::sqrt(0.25 / runs));
}

TEST_CASE("cheater bound chain: Monte Carlo <= Q-sum <= closed form") {
  const double f = phi(kFig2);
  BanditEnvironment env({RewardDistribution::gaussian(0.6, 0.2),
                         RewardDistribution::gaussian(0.5, 0.2)},
                        2025);
  const int runs = 400;
  std::vector<double> n_b_at(1001, 0.0);
  std::vector<double> per_run_nb(runs, 0.0);
  for (int run = 0; run < runs; ++run) {
    RandomStream rng = env.run_stream(run);
    CheaterState st;
    double nb = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const std::size_t pick = cheater_select(st, rng);
      cheater_advance(st, env, rng, 0.0);
      if (pick == 1) nb += 1.0;
      n_b_at[t + 1] += (pick == 1) ? 1.0 : 0.0;
    }
    per_run_nb[run] = nb;
  }
  for (std::uint64_t horizon : {10, 100, 1000}) {
    double mc = 0.0;
    for (std::uint64_t t = 1; t <= horizon; ++t) mc += n_b_at[t];
    mc /= runs;
    double qsum = 0.0;
    for (std::uint64_t t = 0; t < horizon; ++t) {
      qsum += wrong_play_probability(f, t);
    }
    const double bound = wrong_plays_bound(f, horizon);
    // per-run standard error at the full horizon dominates the shorter ones
    double mean_nb = 0.0;
    for (double v : per_run_nb) mean_nb += v;
    mean_nb /= runs;
    double var = 0.0;
    for (double v : per_run_nb) var += (v - mean_nb) * (v - mean_nb);
    var /= runs - 1;
    const double se = std::sqrt(var / runs);
    CHECK(mc <= qsum + 3.0 * se);
    CHECK(qsum <= bound);
  }
}

TEST_CASE("imaginary_difference and the equivalence to the learning rule") {
  CHECK(imaginary_difference(10.0, 8.0, 12, 10, 1.1) ==
        doctest::Approx(0.9).epsilon(1e-12));
  CHECK(imaginary_difference(4.0, 4.0, 6, 6, 0.77) == 0.0);

  RandomStream rng(515);
  int failures = 0;
  for (int hist = 0; hist < 2000; ++hist) {
    const double gamma = 0.1 + 1.9 * rng.next_unit();
    const double k = gamma * 0.5;
    TowConfig cfg;
    TowState st(cfg, 2);
    double sum_a = 0.0, sum_b = 0.0;
    const int len = 1 + static_cast<int>(rng.next_unit() * 127.0);
    for (int i = 0; i < len; ++i) {
      const std::size_t machine = rng.next_unit() < 0.5 ? 0 : 1;
      const double r = rng.next_unit() * 1.5;
      tow_update(st, machine, r, k);
      if (machine == 0) sum_a += r; else sum_b += r;
    }
    const double tow_diff = st.q[0] - st.q[1];
    const double imag = imaginary_difference(sum_a, sum_b, st.n[0], st.n[1], gamma);
    if (std::fabs(tow_diff - imag) > 1e-12) failures += 1;
  }
  CHECK(failures == 0);
}

TEST_CASE("bounds_report assembles the chain") {
  const RegretReport rep = bounds_report(kFig2, 1000);
  CHECK(rep.phi == doctest::Approx(0.3535533905932738).epsilon(1e-14));
  CHECK(rep.has_phi_t);
  CHECK(rep.phi_t == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rep.bound_n_b_asymptote == doctest::Approx(8.5).epsilon(1e-12));
  CHECK(rep.tow_bound_n_b_asymptote == doctest::Approx(16.5).epsilon(1e-12));
  CHECK(regret_value(0.6, 0.5, rep.tow_bound_n_b_asymptote) ==
        doctest::Approx(1.65).epsilon(1e-12));
  // the exact expected count is below the Chernoff-style bound
  CHECK(rep.n_b_expected <= rep.bound_n_b);
  CHECK(rep.regret == doctest::Approx((0.6 - 0.5) * rep.n_b_expected).epsilon(1e-12));
  // n_b_expected equals a direct scalar summation
  double direct = 0.0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    direct += wrong_play_probability(rep.phi, t);
  }
  CHECK(rep.n_b_expected == doctest::Approx(direct).epsilon(1e-12));

  CHECK_THROWS_AS((void)bounds_report({0.5, 0.6, 0.2, 0.2, 0.0}, 1000),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)bounds_report({0.6, 0.5, 0.0, 0.2, 0.0}, 1000),
                  std::invalid_argument);
}
