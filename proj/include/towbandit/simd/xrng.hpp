#pragma once

/**
 * Batched xoshiro256++: one independent stream per lane, stepped in
 * lockstep. Lane l seeded with seeds[l] exactly as towbandit::RandomStream,
 * so a batch lane and a scalar stream with equal seeds emit identical words.
 *
 * Masked draws advance only the selected lanes; the returned value is only
 * meaningful in those lanes. This mirrors conditional draws in the scalar
 * reference (e.g. tie-break uniforms) one-for-one.
 */

#include <cstdint>

#include "towbandit/rng.hpp"
#include "towbandit/simd/batch.hpp"

namespace towbandit::simd {

template <class B>
class XoshiroBatch {
 public:
  /// seeds must hold B::width values.
  explicit XoshiroBatch(const std::uint64_t* seeds) {
    std::uint64_t init[4][B::width];
    for (int l = 0; l < B::width; ++l) {
      std::uint64_t sm = seeds[l];
      for (int w = 0; w < 4; ++w) {
        sm += 0x9E3779B97F4A7C15ULL;
        init[w][l] = mix64(sm);
      }
    }
    s0_ = B::load_u(init[0]);
    s1_ = B::load_u(init[1]);
    s2_ = B::load_u(init[2]);
    s3_ = B::load_u(init[3]);
  }

  typename B::vu next_raw() {
    typename B::vu r, n0, n1, n2, n3;
    step(r, n0, n1, n2, n3);
    s0_ = n0;
    s1_ = n1;
    s2_ = n2;
    s3_ = n3;
    return r;
  }

  typename B::vu next_raw_masked(typename B::vm m) {
    typename B::vu r, n0, n1, n2, n3;
    step(r, n0, n1, n2, n3);
    s0_ = B::ublend(s0_, n0, m);
    s1_ = B::ublend(s1_, n1, m);
    s2_ = B::ublend(s2_, n2, m);
    s3_ = B::ublend(s3_, n3, m);
    return r;
  }

  typename B::vf next_unit() { return unit_from_raw(next_raw()); }

  typename B::vf next_unit_masked(typename B::vm m) {
    return unit_from_raw(next_raw_masked(m));
  }

  /// ((raw >> 12) + 0.5) * 2^-52, uniform in (0, 1); all steps exact.
  static typename B::vf unit_from_raw(typename B::vu raw) {
    const auto k = B::template ushr<12>(raw);
    return B::mul(B::add(B::u52_to_f(k), B::fset1(0.5)), B::fset1(0x1p-52));
  }

 private:
  void step(typename B::vu& r, typename B::vu& n0, typename B::vu& n1,
            typename B::vu& n2, typename B::vu& n3) const {
    r = B::uadd(B::template urotl<23>(B::uadd(s0_, s3_)), s0_);
    const auto t = B::template ushl<17>(s1_);
    n2 = B::uxor(s2_, s0_);
    n3 = B::uxor(s3_, s1_);
    n1 = B::uxor(s1_, n2);
    n0 = B::uxor(s0_, n3);
    n2 = B::uxor(n2, t);
    n3 = B::template urotl<45>(n3);
  }

  typename B::vu s0_, s1_, s2_, s3_;
};

}  // namespace towbandit::simd
