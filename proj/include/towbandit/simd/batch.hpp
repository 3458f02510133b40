#pragma once

/**
 * Fixed-width batch backends for the Monte Carlo kernels.
 *
 * A backend packs `width` independent lanes of f64/u64 data and exposes the
 * small op set the kernels need. ScalarBackend (width 1) is the reference:
 * every wider backend must produce bit-identical lanes, which the kernels
 * guarantee by performing the same IEEE operations in the same order on
 * every backend (no contraction, fused multiply-add only where written).
 *
 * blend(a, b, m) selects b where m is set, a elsewhere, mirroring
 * _mm256_blendv_pd operand order.
 */

#include <bit>
#include <cmath>
#include <cstdint>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace towbandit::simd {

struct ScalarBackend {
  static constexpr int width = 1;
  static constexpr const char* name = "scalar";

  using vf = double;
  using vu = std::uint64_t;
  using vm = bool;

  static vf fset1(double x) { return x; }
  static vu uset1(std::uint64_t x) { return x; }

  static vf add(vf a, vf b) { return a + b; }
  static vf sub(vf a, vf b) { return a - b; }
  static vf mul(vf a, vf b) { return a * b; }
  static vf div(vf a, vf b) { return a / b; }
  static vf fmadd(vf a, vf b, vf c) { return std::fma(a, b, c); }
  static vf sqrt(vf a) { return std::sqrt(a); }
  static vf neg(vf a) { return -a; }
  static vf abs(vf a) { return std::fabs(a); }
  static vf min(vf a, vf b) { return a < b ? a : b; }
  static vf max(vf a, vf b) { return a > b ? a : b; }
  static vf round_nearest(vf a) { return std::nearbyint(a); }
  static vf trunc(vf a) { return std::trunc(a); }

  static vm lt(vf a, vf b) { return a < b; }
  static vm le(vf a, vf b) { return a <= b; }
  static vm gt(vf a, vf b) { return a > b; }
  static vm ge(vf a, vf b) { return a >= b; }
  static vm eq(vf a, vf b) { return a == b; }

  static vm m_and(vm a, vm b) { return a && b; }
  static vm m_or(vm a, vm b) { return a || b; }
  static vm m_not(vm a) { return !a; }
  static vm m_false() { return false; }
  static bool any(vm m) { return m; }
  static bool all(vm m) { return m; }

  static vf blend(vf a, vf b, vm m) { return m ? b : a; }
  static vu ublend(vu a, vu b, vm m) { return m ? b : a; }

  static vu uadd(vu a, vu b) { return a + b; }
  static vu uxor(vu a, vu b) { return a ^ b; }
  static vu uor(vu a, vu b) { return a | b; }
  static vu uand(vu a, vu b) { return a & b; }
  template <int K>
  static vu ushl(vu a) {
    return a << K;
  }
  template <int K>
  static vu ushr(vu a) {
    return a >> K;
  }
  template <int K>
  static vu urotl(vu a) {
    return (a << K) | (a >> (64 - K));
  }

  static vu f_bits(vf a) { return std::bit_cast<std::uint64_t>(a); }
  static vf bits_f(vu a) { return std::bit_cast<double>(a); }

  /// Exact u64 -> f64 conversion; requires a < 2^52.
  static vf u52_to_f(vu a) { return static_cast<double>(a); }

  /// 2^k as a double from an integral-valued double k in [-1022, 1023].
  static vf pow2_int(vf k) {
    const auto ki = static_cast<std::int64_t>(k);
    return std::bit_cast<double>(static_cast<std::uint64_t>(ki + 1023) << 52);
  }

  static double lane_f(vf a, int) { return a; }
  static std::uint64_t lane_u(vu a, int) { return a; }
  static vf load_f(const double* p) { return *p; }
  static vu load_u(const std::uint64_t* p) { return *p; }
};

#if defined(__AVX2__) && defined(__FMA__)

struct Avx2Backend {
  static constexpr int width = 4;
  static constexpr const char* name = "avx2";

  using vf = __m256d;
  using vu = __m256i;
  using vm = __m256d;  // all-ones / all-zeros lanes from cmp_pd

  static vf fset1(double x) { return _mm256_set1_pd(x); }
  static vu uset1(std::uint64_t x) {
    return _mm256_set1_epi64x(static_cast<long long>(x));
  }

  static vf add(vf a, vf b) { return _mm256_add_pd(a, b); }
  static vf sub(vf a, vf b) { return _mm256_sub_pd(a, b); }
  static vf mul(vf a, vf b) { return _mm256_mul_pd(a, b); }
  static vf div(vf a, vf b) { return _mm256_div_pd(a, b); }
  static vf fmadd(vf a, vf b, vf c) { return _mm256_fmadd_pd(a, b, c); }
  static vf sqrt(vf a) { return _mm256_sqrt_pd(a); }
  static vf neg(vf a) { return _mm256_xor_pd(a, _mm256_set1_pd(-0.0)); }
  static vf abs(vf a) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), a);
  }
  static vf min(vf a, vf b) { return _mm256_min_pd(a, b); }
  static vf max(vf a, vf b) { return _mm256_max_pd(a, b); }
  static vf round_nearest(vf a) {
    return _mm256_round_pd(a, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  }
  static vf trunc(vf a) {
    return _mm256_round_pd(a, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  }

  static vm lt(vf a, vf b) { return _mm256_cmp_pd(a, b, _CMP_LT_OQ); }
  static vm le(vf a, vf b) { return _mm256_cmp_pd(a, b, _CMP_LE_OQ); }
  static vm gt(vf a, vf b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
  static vm ge(vf a, vf b) { return _mm256_cmp_pd(a, b, _CMP_GE_OQ); }
  static vm eq(vf a, vf b) { return _mm256_cmp_pd(a, b, _CMP_EQ_OQ); }

  static vm m_and(vm a, vm b) { return _mm256_and_pd(a, b); }
  static vm m_or(vm a, vm b) { return _mm256_or_pd(a, b); }
  static vm m_not(vm a) {
    return _mm256_xor_pd(a, _mm256_castsi256_pd(_mm256_set1_epi64x(-1)));
  }
  static vm m_false() { return _mm256_setzero_pd(); }
  static bool any(vm m) { return _mm256_movemask_pd(m) != 0; }
  static bool all(vm m) { return _mm256_movemask_pd(m) == 0xF; }

  static vf blend(vf a, vf b, vm m) { return _mm256_blendv_pd(a, b, m); }
  static vu ublend(vu a, vu b, vm m) {
    return _mm256_castpd_si256(
        _mm256_blendv_pd(_mm256_castsi256_pd(a), _mm256_castsi256_pd(b), m));
  }

  static vu uadd(vu a, vu b) { return _mm256_add_epi64(a, b); }
  static vu uxor(vu a, vu b) { return _mm256_xor_si256(a, b); }
  static vu uor(vu a, vu b) { return _mm256_or_si256(a, b); }
  static vu uand(vu a, vu b) { return _mm256_and_si256(a, b); }
  template <int K>
  static vu ushl(vu a) {
    return _mm256_slli_epi64(a, K);
  }
  template <int K>
  static vu ushr(vu a) {
    return _mm256_srli_epi64(a, K);
  }
  template <int K>
  static vu urotl(vu a) {
    return _mm256_or_si256(_mm256_slli_epi64(a, K), _mm256_srli_epi64(a, 64 - K));
  }

  static vu f_bits(vf a) { return _mm256_castpd_si256(a); }
  static vf bits_f(vu a) { return _mm256_castsi256_pd(a); }

  static vf u52_to_f(vu a) {
    // Magic-number trick: for a < 2^52, OR in the exponent of 2^52 and
    // subtract 2^52; exact, so it matches the scalar cast bit for bit.
    const vu magic = uset1(0x4330000000000000ULL);  // 2^52
    return sub(bits_f(uor(a, magic)), fset1(0x1p52));
  }

  static vf pow2_int(vf k) {
    const __m128i k32 = _mm256_cvtpd_epi32(k);  // k is integral, in range
    const vu k64 = _mm256_cvtepi32_epi64(k32);
    const vu bits = _mm256_slli_epi64(
        _mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
    return bits_f(bits);
  }

  static double lane_f(vf a, int i) {
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, a);
    return tmp[i];
  }
  static std::uint64_t lane_u(vu a, int i) {
    alignas(32) std::uint64_t tmp[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(tmp), a);
    return tmp[i];
  }
  static vf load_f(const double* p) { return _mm256_loadu_pd(p); }
  static vu load_u(const std::uint64_t* p) {
    return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
  }
};

#endif  // __AVX2__ && __FMA__

}  // namespace towbandit::simd
