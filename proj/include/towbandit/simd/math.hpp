#pragma once

/**
 * Batched special functions: exp, log, standard-normal inverse CDF and erfc.
 *
 * All kernels are branch-free (both sides of every region split are computed
 * and blended), use explicit fused multiply-adds, and perform the identical
 * operation sequence on every backend. Scalar and vector lanes therefore
 * agree bit for bit, which the engine equivalence tests assert. libm is
 * deliberately not used here: its results differ between scalar and vector
 * call sites and between platforms.
 *
 * Sources of the approximations:
 *  - exp: Cody-Waite range reduction + degree-13 Taylor polynomial.
 *  - log: exponent split + atanh-series on [sqrt(1/2), sqrt(2)).
 *  - normal inverse CDF: Wichura's AS241 (PPND16 rational approximations).
 *  - erfc: W. J. Cody's rational Chebyshev approximations (netlib CALERF),
 *    with the trunc-to-16ths split of exp(-x*x) for tail accuracy.
 */

#include <cstddef>

#include "towbandit/simd/batch.hpp"

namespace towbandit::simd {

namespace detail {

template <class B, std::size_t N>
inline typename B::vf horner(typename B::vf x, const double (&c)[N]) {
  // c[0] is the highest-order coefficient
  typename B::vf p = B::fset1(c[0]);
  for (std::size_t i = 1; i < N; ++i) p = B::fmadd(p, x, B::fset1(c[i]));
  return p;
}

// 1/k! for the exp Taylor polynomial, highest order first.
inline constexpr double kExpPoly[14] = {
    1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
    1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
    1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
    1.0,                1.0};

// atanh series: log(m) = 2y + 2y*z*Q(z), Q(z) = 1/3 + z/5 + ... + z^10/23.
inline constexpr double kLogPoly[11] = {
    1.0 / 23.0, 1.0 / 21.0, 1.0 / 19.0, 1.0 / 17.0, 1.0 / 15.0, 1.0 / 13.0,
    1.0 / 11.0, 1.0 / 9.0,  1.0 / 7.0,  1.0 / 5.0,  1.0 / 3.0};

// AS241 PPND16 coefficient tables, highest order first (denominators have
// an implicit trailing 1).
inline constexpr double kPpndA[8] = {
    2.5090809287301226727e+3, 3.3430575583588128105e+4,
    6.7265770927008700853e+4, 4.5921953931549871457e+4,
    1.3731693765509461125e+4, 1.9715909503065514427e+3,
    1.3314166789178437745e+2, 3.3871328727963666080e+0};
inline constexpr double kPpndB[8] = {
    5.2264952788528545610e+3, 2.8729085735721942674e+4,
    3.9307895800092710610e+4, 2.1213794301586595867e+4,
    5.3941960214247511077e+3, 6.8718700749205790830e+2,
    4.2313330701600911252e+1, 1.0};
inline constexpr double kPpndC[8] = {
    7.74545014278341407640e-4, 2.27238449892691845833e-2,
    2.41780725177450611770e-1, 1.27045825245236838258e+0,
    3.64784832476320460504e+0, 5.76949722146069140550e+0,
    4.63033784615654529590e+0, 1.42343711074968357734e+0};
inline constexpr double kPpndD[8] = {
    1.05075007164441684324e-9, 5.47593808499534494600e-4,
    1.51986665636164571966e-2, 1.48103976427480074590e-1,
    6.89767334985100004550e-1, 1.67638483018380384940e+0,
    2.05319162663775882187e+0, 1.0};
inline constexpr double kPpndE[8] = {
    2.01033439929228813265e-7, 2.71155556874348757815e-5,
    1.24266094738807843860e-3, 2.65321895265761230930e-2,
    2.96560571828504891230e-1, 1.78482653991729133580e+0,
    5.46378491116411436990e+0, 6.65790464350110377720e+0};
inline constexpr double kPpndF[8] = {
    2.04426310338993978564e-15, 1.42151175831644588870e-7,
    1.84631831751005468180e-5,  7.86869131145613259100e-4,
    1.48753612908506148525e-2,  1.36929880922735805310e-1,
    5.99832206555887937690e-1,  1.0};

// Cody CALERF tables (erf on [0, 0.46875], erfc on (0.46875, 4],
// erfc asymptotic beyond 4).
inline constexpr double kErfA[5] = {3.1611237438705656, 113.864154151050156,
                                    377.485237685302021, 3209.37758913846947,
                                    .185777706184603153};
inline constexpr double kErfB[4] = {23.6012909523441209, 244.024637934444173,
                                    1282.61652607737228, 2844.23683343917062};
inline constexpr double kErfC[9] = {
    .564188496988670089, 8.88314979438837594, 66.1191906371416295,
    298.635138197400131, 881.95222124176909,  1712.04761263407058,
    2051.07837782607147, 1230.33935479799725, 2.15311535474403846e-8};
inline constexpr double kErfD[8] = {
    15.7449261107098347, 117.693950891312499, 537.181101862009858,
    1621.38957456669019, 3290.79923573345963, 4362.61909014324716,
    3439.36767414372164, 1230.33935480374942};
inline constexpr double kErfP[6] = {.305326634961232344, .360344899949804439,
                                    .125781726111229246, .0160837851487422766,
                                    6.58749161529837803e-4,
                                    .0163153871373020978};
inline constexpr double kErfQ[5] = {2.56852019228982242, 1.87295284992346047,
                                    .527905102951428412, .0605183413124413191,
                                    .00233520497626869185};

}  // namespace detail

/// e^x. Results below exp(-708) flush to zero (no subnormal outputs).
template <class B>
inline typename B::vf exp_pd(typename B::vf x) {
  using vf = typename B::vf;
  const vf inv_ln2 = B::fset1(1.4426950408889634074);
  const vf neg_ln2_hi = B::fset1(-6.93145751953125e-1);
  const vf neg_ln2_lo = B::fset1(-1.42860682030941723212e-6);

  vf kd = B::round_nearest(B::mul(x, inv_ln2));
  // Keep the 2^k construction in range; out-of-range lanes are overridden
  // by the underflow blend (or overflow to inf in the final multiply).
  kd = B::max(B::min(kd, B::fset1(1023.0)), B::fset1(-1022.0));
  vf r = B::fmadd(kd, neg_ln2_hi, x);
  r = B::fmadd(kd, neg_ln2_lo, r);

  const vf p = detail::horner<B>(r, detail::kExpPoly);
  vf res = B::mul(p, B::pow2_int(kd));
  res = B::blend(res, B::fset1(0.0), B::lt(x, B::fset1(-708.0)));
  return res;
}

/// ln(x) for positive normal x.
template <class B>
inline typename B::vf log_pd(typename B::vf x) {
  using vf = typename B::vf;
  using vu = typename B::vu;

  const vu bits = B::f_bits(x);
  vf e = B::sub(B::u52_to_f(B::template ushr<52>(bits)), B::fset1(1023.0));
  const vu mant = B::uor(B::uand(bits, B::uset1(0x000FFFFFFFFFFFFFULL)),
                         B::uset1(0x3FF0000000000000ULL));
  vf m = B::bits_f(mant);  // in [1, 2)

  // renormalize to [sqrt(1/2), sqrt(2))
  const auto big = B::gt(m, B::fset1(1.41421356237309515));
  m = B::blend(m, B::mul(m, B::fset1(0.5)), big);
  e = B::blend(e, B::add(e, B::fset1(1.0)), big);

  const vf y = B::div(B::sub(m, B::fset1(1.0)), B::add(m, B::fset1(1.0)));
  const vf z = B::mul(y, y);
  const vf q = detail::horner<B>(z, detail::kLogPoly);
  const vf two_y = B::add(y, y);
  const vf log_m = B::fmadd(B::mul(two_y, z), q, two_y);

  const vf ln2_hi = B::fset1(6.93147180369123816490e-1);
  const vf ln2_lo = B::fset1(1.90821492927058770002e-10);
  const vf res = B::fmadd(e, ln2_lo, log_m);
  return B::fmadd(e, ln2_hi, res);
}

/// Standard-normal inverse CDF (AS241). u must lie strictly inside (0, 1).
template <class B>
inline typename B::vf normal_icdf_pd(typename B::vf u) {
  using vf = typename B::vf;

  const vf q = B::sub(u, B::fset1(0.5));

  // central region |q| <= 0.425
  const vf r = B::fmadd(B::neg(q), q, B::fset1(0.180625));
  const vf z_central = B::mul(
      q, B::div(detail::horner<B>(r, detail::kPpndA),
                detail::horner<B>(r, detail::kPpndB)));

  // tails
  const auto negative = B::lt(q, B::fset1(0.0));
  const vf rt = B::blend(B::sub(B::fset1(1.0), u), u, negative);
  const vf s = B::sqrt(B::neg(log_pd<B>(rt)));
  const vf z_near = B::div(detail::horner<B>(B::sub(s, B::fset1(1.6)), detail::kPpndC),
                           detail::horner<B>(B::sub(s, B::fset1(1.6)), detail::kPpndD));
  const vf z_far = B::div(detail::horner<B>(B::sub(s, B::fset1(5.0)), detail::kPpndE),
                          detail::horner<B>(B::sub(s, B::fset1(5.0)), detail::kPpndF));
  vf z_tail = B::blend(z_near, z_far, B::gt(s, B::fset1(5.0)));
  z_tail = B::blend(z_tail, B::neg(z_tail), negative);

  return B::blend(z_tail, z_central,
                  B::le(B::abs(q), B::fset1(0.425)));
}

/// erfc(x), Cody's CALERF with jint = 1.
template <class B>
inline typename B::vf erfc_pd(typename B::vf x) {
  using vf = typename B::vf;
  const vf zero = B::fset1(0.0);
  const vf one = B::fset1(1.0);
  const vf y = B::abs(x);

  // region 1: |x| <= 0.46875, erfc = 1 - erf
  vf ysq = B::blend(zero, B::mul(y, y), B::gt(y, B::fset1(1.11e-16)));
  vf xnum = B::mul(B::fset1(detail::kErfA[4]), ysq);
  vf xden = ysq;
  for (int i = 0; i < 3; ++i) {
    xnum = B::mul(B::add(xnum, B::fset1(detail::kErfA[i])), ysq);
    xden = B::mul(B::add(xden, B::fset1(detail::kErfB[i])), ysq);
  }
  const vf erf1 = B::mul(x, B::div(B::add(xnum, B::fset1(detail::kErfA[3])),
                                   B::add(xden, B::fset1(detail::kErfB[3]))));
  const vf r1 = B::sub(one, erf1);

  // shared tail factor exp(-y^2), split for accuracy
  const vf tq = B::mul(B::trunc(B::mul(y, B::fset1(16.0))), B::fset1(0.0625));
  const vf del = B::mul(B::sub(y, tq), B::add(y, tq));
  const vf texp = B::mul(exp_pd<B>(B::neg(B::mul(tq, tq))),
                         exp_pd<B>(B::neg(del)));

  // region 2: 0.46875 < |x| <= 4
  vf xnum2 = B::mul(B::fset1(detail::kErfC[8]), y);
  vf xden2 = y;
  for (int i = 0; i < 7; ++i) {
    xnum2 = B::mul(B::add(xnum2, B::fset1(detail::kErfC[i])), y);
    xden2 = B::mul(B::add(xden2, B::fset1(detail::kErfD[i])), y);
  }
  vf r2 = B::div(B::add(xnum2, B::fset1(detail::kErfC[7])),
                 B::add(xden2, B::fset1(detail::kErfD[7])));
  r2 = B::mul(texp, r2);

  // region 3: |x| > 4
  const vf inv_ysq = B::div(one, B::mul(y, y));
  vf xnum3 = B::mul(B::fset1(detail::kErfP[5]), inv_ysq);
  vf xden3 = inv_ysq;
  for (int i = 0; i < 4; ++i) {
    xnum3 = B::mul(B::add(xnum3, B::fset1(detail::kErfP[i])), inv_ysq);
    xden3 = B::mul(B::add(xden3, B::fset1(detail::kErfQ[i])), inv_ysq);
  }
  vf r3 = B::mul(inv_ysq, B::div(B::add(xnum3, B::fset1(detail::kErfP[4])),
                                 B::add(xden3, B::fset1(detail::kErfQ[4]))));
  r3 = B::div(B::sub(B::fset1(0.56418958354775628695), r3), y);
  r3 = B::mul(texp, r3);
  r3 = B::blend(r3, zero, B::ge(y, B::fset1(26.543)));

  vf res23 = B::blend(r3, r2, B::le(y, B::fset1(4.0)));
  res23 = B::blend(res23, B::sub(B::fset1(2.0), res23),
                   B::lt(x, zero));
  return B::blend(res23, r1, B::le(y, B::fset1(0.46875)));
}

/// Standard-normal upper-tail probability Q(x) = erfc(x / sqrt(2)) / 2.
template <class B>
inline typename B::vf qfunc_pd(typename B::vf x) {
  const auto e = erfc_pd<B>(B::mul(x, B::fset1(0.70710678118654752440)));
  return B::mul(e, B::fset1(0.5));
}

}  // namespace towbandit::simd
