#include <cstdlib>
#include <string>

#include "towbandit/simd/engine.hpp"

namespace towbandit::simd {

#ifndef TOWBANDIT_NO_AVX2
const EngineOps* avx2_engine_table();
#endif

const EngineOps* avx2_engine() {
#ifndef TOWBANDIT_NO_AVX2
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return avx2_engine_table();
  }
#endif
  return nullptr;
}

const EngineOps& active_engine() {
  static const EngineOps* chosen = [] {
    const char* env = std::getenv("TOW_BANDIT_SIMD");
    const std::string mode = env ? env : "auto";
    if (mode == "scalar") return &scalar_engine();
    const EngineOps* avx2 = avx2_engine();
    if (avx2 && (mode == "auto" || mode == "avx2")) return avx2;
    return &scalar_engine();
  }();
  return *chosen;
}

}  // namespace towbandit::simd
