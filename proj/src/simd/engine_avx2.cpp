// Compiled with -mavx2 -mfma; only reached after the runtime CPU check in
// dispatch.cpp.

#include "towbandit/simd/engine.hpp"

#if defined(__AVX2__) && defined(__FMA__)

namespace towbandit::simd {

const EngineOps* avx2_engine_table() {
  static const EngineOps ops = {
      Avx2Backend::width,
      Avx2Backend::name,
      &kernel::run_asdm<Avx2Backend>,
      &kernel::run_softmax<Avx2Backend>,
      &kernel::run_cheater<Avx2Backend>,
      &kernel::run_qfunc<Avx2Backend>,
  };
  return &ops;
}

}  // namespace towbandit::simd

#endif
