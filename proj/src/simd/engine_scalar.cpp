#include "towbandit/simd/engine.hpp"

namespace towbandit::simd {

const EngineOps& scalar_engine() {
  static const EngineOps ops = {
      ScalarBackend::width,
      ScalarBackend::name,
      &kernel::run_asdm<ScalarBackend>,
      &kernel::run_softmax<ScalarBackend>,
      &kernel::run_cheater<ScalarBackend>,
      &kernel::run_qfunc<ScalarBackend>,
  };
  return ops;
}

}  // namespace towbandit::simd
