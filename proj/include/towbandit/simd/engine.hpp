#pragma once

/**
 * Batched Monte Carlo engines: one independent run per lane, stepped in
 * lockstep with masked updates and masked RNG advancement. The kernels are
 * templated over the batch backend; the scalar instantiation is the
 * reference and wider backends must reproduce it bit for bit (asserted by
 * the equivalence tests, and relied on for byte-identical CSV output
 * whichever backend the dispatcher picks).
 *
 * Engines cover the two-machine algorithms with the standard fluctuation
 * kinds; everything else takes the plain per-run reference path in the
 * harness. Per-run outputs are the two curves the harness aggregates:
 * cumulative reward and cumulative suboptimal plays after each step.
 */

#include <cstddef>
#include <cstdint>

#include "towbandit/simd/batch.hpp"
#include "towbandit/simd/math.hpp"
#include "towbandit/simd/xrng.hpp"

namespace towbandit::simd {

struct MachineParams {
  bool bernoulli = false;
  double mu = 0.0;
  double sigma = 0.0;
  double p = 0.0;
};

struct EngineEnv {
  MachineParams machine[2];
  int suboptimal = 0;  // index of the lower-true-mean machine
};

enum class EngineKMode { Fixed, Adaptive };

struct AsdmEngineParams {
  EngineEnv env;
  double x0 = 5.0;
  double th = 5.0;
  double amplitude = 1.0;  // 0 encodes FluctuationKind::None
  EngineKMode kmode = EngineKMode::Fixed;
  double k_fixed = 0.0;    // Fixed and OracleK0 (precomputed)
};

struct SoftmaxEngineParams {
  EngineEnv env;
  double tau = 0.3;
};

struct CheaterEngineParams {
  EngineEnv env;
  double k_adjust = 0.0;
};

/**
 * Function table for one backend. Run outputs are lane-major:
 * out[lane * plays + t]. seeds must hold `width` entries; every lane is
 * always computed.
 */
struct EngineOps {
  int width = 1;
  const char* name = "scalar";
  void (*asdm)(const AsdmEngineParams&, const std::uint64_t* seeds,
               std::size_t plays, double* out_cum, double* out_sub) = nullptr;
  void (*softmax)(const SoftmaxEngineParams&, const std::uint64_t* seeds,
                  std::size_t plays, double* out_cum, double* out_sub) = nullptr;
  void (*cheater)(const CheaterEngineParams&, const std::uint64_t* seeds,
                  std::size_t plays, double* out_cum, double* out_sub) = nullptr;
  void (*qfunc)(const double* x, double* out, std::size_t n) = nullptr;
};

/// The width-1 reference backend (always available).
const EngineOps& scalar_engine();

/// AVX2 backend, or nullptr when compiled out or not supported by the CPU.
const EngineOps* avx2_engine();

/// Backend chosen at startup: AVX2 when available, unless the environment
/// variable TOW_BANDIT_SIMD forces "scalar" (or "avx2").
const EngineOps& active_engine();

// ---------------------------------------------------------------------------
// Kernel templates (instantiated once per backend translation unit).
// ---------------------------------------------------------------------------

namespace kernel {

/// Reward draw for a fixed machine on masked lanes; consumes one uniform
/// per masked lane, exactly like towbandit::sample_reward.
template <class B>
inline typename B::vf draw_reward_masked(XoshiroBatch<B>& rng, typename B::vm m,
                                         const MachineParams& mp) {
  const auto u = rng.next_unit_masked(m);
  if (mp.bernoulli) {
    return B::blend(B::fset1(0.0), B::fset1(1.0), B::lt(u, B::fset1(mp.p)));
  }
  const auto z = normal_icdf_pd<B>(u);
  return B::fmadd(B::fset1(mp.sigma), z, B::fset1(mp.mu));
}

/// Reward draw where each lane plays the machine chosen by sel_a; one
/// uniform per lane.
template <class B>
inline typename B::vf draw_reward_lanes(XoshiroBatch<B>& rng,
                                        const EngineEnv& env,
                                        typename B::vm sel_a) {
  const auto u = rng.next_unit();
  const MachineParams& a = env.machine[0];
  const MachineParams& b = env.machine[1];
  const auto z = normal_icdf_pd<B>(u);
  const auto mu = B::blend(B::fset1(b.mu), B::fset1(a.mu), sel_a);
  const auto sg = B::blend(B::fset1(b.sigma), B::fset1(a.sigma), sel_a);
  const auto r_gauss = B::fmadd(sg, z, mu);
  const auto pp = B::blend(B::fset1(b.p), B::fset1(a.p), sel_a);
  const auto r_bern = B::blend(B::fset1(0.0), B::fset1(1.0), B::lt(u, pp));
  if (a.bernoulli == b.bernoulli) {
    return a.bernoulli ? r_bern : r_gauss;
  }
  const auto bern_mask = a.bernoulli ? sel_a : B::m_not(sel_a);
  return B::blend(r_gauss, r_bern, bern_mask);
}

template <class B>
void run_asdm(const AsdmEngineParams& pr, const std::uint64_t* seeds,
              std::size_t plays, double* out_cum, double* out_sub) {
  using vf = typename B::vf;
  using vm = typename B::vm;
  XoshiroBatch<B> rng(seeds);

  const vf zero = B::fset1(0.0);
  const vf one = B::fset1(1.0);
  const vf half = B::fset1(0.5);
  const vf x0 = B::fset1(pr.x0);
  const vf th = B::fset1(pr.th);
  vf q0 = zero, q1 = zero, sum0 = zero, sum1 = zero, n0 = zero, n1 = zero;
  vf cum = zero, nsub = zero;
  const bool sub_is_0 = pr.env.suboptimal == 0;

  for (std::size_t t = 0; t < plays; ++t) {
    const double dt = (t % 2 == 0) ? pr.amplitude : -pr.amplitude;
    const vf xa = B::add(B::sub(q0, q1), B::fset1(dt));
    vm sel_a = B::gt(B::add(x0, xa), th);
    vm sel_b = B::gt(B::sub(x0, xa), th);
    const vm none = B::m_not(B::m_or(sel_a, sel_b));
    if (B::any(none)) {
      // escape: one machine uniformly at random (u*2 < 1 <=> u < 0.5)
      const vf u = rng.next_unit_masked(none);
      const vm pick_a = B::lt(u, half);
      sel_a = B::m_or(sel_a, B::m_and(none, pick_a));
      sel_b = B::m_or(sel_b, B::m_and(none, B::m_not(pick_a)));
    }

    vf k;
    if (pr.kmode == EngineKMode::Fixed) {
      k = B::fset1(pr.k_fixed);
    } else {
      const vm played = B::m_and(B::gt(n0, zero), B::gt(n1, zero));
      const vf mean_sum = B::add(B::div(sum0, n0), B::div(sum1, n1));
      k = B::blend(zero, B::mul(mean_sum, half), played);
    }

    {
      const vf r = draw_reward_masked<B>(rng, sel_a, pr.env.machine[0]);
      q0 = B::blend(q0, B::add(q0, B::sub(r, k)), sel_a);
      sum0 = B::blend(sum0, B::add(sum0, r), sel_a);
      n0 = B::blend(n0, B::add(n0, one), sel_a);
      cum = B::blend(cum, B::add(cum, r), sel_a);
      if (sub_is_0) nsub = B::blend(nsub, B::add(nsub, one), sel_a);
    }
    {
      const vf r = draw_reward_masked<B>(rng, sel_b, pr.env.machine[1]);
      q1 = B::blend(q1, B::add(q1, B::sub(r, k)), sel_b);
      sum1 = B::blend(sum1, B::add(sum1, r), sel_b);
      n1 = B::blend(n1, B::add(n1, one), sel_b);
      cum = B::blend(cum, B::add(cum, r), sel_b);
      if (!sub_is_0) nsub = B::blend(nsub, B::add(nsub, one), sel_b);
    }

    for (int l = 0; l < B::width; ++l) {
      out_cum[static_cast<std::size_t>(l) * plays + t] = B::lane_f(cum, l);
      out_sub[static_cast<std::size_t>(l) * plays + t] = B::lane_f(nsub, l);
    }
  }
}

template <class B>
void run_softmax(const SoftmaxEngineParams& pr, const std::uint64_t* seeds,
                 std::size_t plays, double* out_cum, double* out_sub) {
  using vf = typename B::vf;
  using vm = typename B::vm;
  XoshiroBatch<B> rng(seeds);

  const vf zero = B::fset1(0.0);
  const vf one = B::fset1(1.0);
  vf sum0 = zero, sum1 = zero, n0 = zero, n1 = zero, cum = zero, nsub = zero;
  const bool sub_is_0 = pr.env.suboptimal == 0;

  for (std::size_t t = 0; t < plays; ++t) {
    const vf beta = B::fset1(pr.tau * static_cast<double>(t));
    const vf qa = B::blend(zero, B::div(sum0, n0), B::gt(n0, zero));
    const vf qb = B::blend(zero, B::div(sum1, n1), B::gt(n1, zero));
    const vf ba = B::mul(beta, qa);
    const vf bb = B::mul(beta, qb);
    const vf m = B::max(ba, bb);
    const vf ea = exp_pd<B>(B::sub(ba, m));
    const vf eb = exp_pd<B>(B::sub(bb, m));
    const vf pa = B::div(ea, B::add(ea, eb));
    const vf u = rng.next_unit();
    const vm sel_a = B::lt(u, pa);

    const vf r = draw_reward_lanes<B>(rng, pr.env, sel_a);
    sum0 = B::blend(sum0, B::add(sum0, r), sel_a);
    n0 = B::blend(n0, B::add(n0, one), sel_a);
    sum1 = B::blend(B::add(sum1, r), sum1, sel_a);
    n1 = B::blend(B::add(n1, one), n1, sel_a);
    cum = B::add(cum, r);
    const vm sel_sub = sub_is_0 ? sel_a : B::m_not(sel_a);
    nsub = B::blend(nsub, B::add(nsub, one), sel_sub);

    for (int l = 0; l < B::width; ++l) {
      out_cum[static_cast<std::size_t>(l) * plays + t] = B::lane_f(cum, l);
      out_sub[static_cast<std::size_t>(l) * plays + t] = B::lane_f(nsub, l);
    }
  }
}

template <class B>
void run_cheater(const CheaterEngineParams& pr, const std::uint64_t* seeds,
                 std::size_t plays, double* out_cum, double* out_sub) {
  using vf = typename B::vf;
  using vm = typename B::vm;
  XoshiroBatch<B> rng(seeds);

  const vf zero = B::fset1(0.0);
  const vf one = B::fset1(1.0);
  const vf half = B::fset1(0.5);
  const vf kadj = B::fset1(pr.k_adjust);
  vf sa = zero, sb = zero, cum = zero, nsub = zero;
  const bool sub_is_0 = pr.env.suboptimal == 0;

  for (std::size_t t = 0; t < plays; ++t) {
    const vm tie = B::eq(sa, sb);
    vm sel_a = B::m_and(B::m_not(tie), B::gt(sa, sb));
    if (B::any(tie)) {
      const vf u = rng.next_unit_masked(tie);
      sel_a = B::m_or(sel_a, B::m_and(tie, B::lt(u, half)));
    }

    // both machines sampled every step, A first
    const auto all = B::m_not(B::m_false());
    const vf r0 = draw_reward_masked<B>(rng, all, pr.env.machine[0]);
    const vf r1 = draw_reward_masked<B>(rng, all, pr.env.machine[1]);
    sa = B::add(sa, B::sub(r0, kadj));
    sb = B::add(sb, B::sub(r1, kadj));
    cum = B::add(cum, B::blend(r1, r0, sel_a));
    const vm sel_sub = sub_is_0 ? sel_a : B::m_not(sel_a);
    nsub = B::blend(nsub, B::add(nsub, one), sel_sub);

    for (int l = 0; l < B::width; ++l) {
      out_cum[static_cast<std::size_t>(l) * plays + t] = B::lane_f(cum, l);
      out_sub[static_cast<std::size_t>(l) * plays + t] = B::lane_f(nsub, l);
    }
  }
}

template <class B>
void run_qfunc(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + B::width <= n; i += B::width) {
    const auto v = qfunc_pd<B>(B::load_f(x + i));
    for (int l = 0; l < B::width; ++l) out[i + l] = B::lane_f(v, l);
  }
  for (; i < n; ++i) out[i] = qfunc_pd<ScalarBackend>(x[i]);
}

}  // namespace kernel

}  // namespace towbandit::simd
