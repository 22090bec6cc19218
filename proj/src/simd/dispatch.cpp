#include <cstdlib>
#include <string>

#include "gedkit/simd/kernels.hpp"

namespace ged::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(GEDKIT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels(Isa isa) {
#if defined(GEDKIT_HAVE_AVX2)
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return detail::kAvx2Kernels;
#endif
  (void)isa;
  return detail::kScalarKernels;
}

const KernelTable& kernels() {
  static const KernelTable& selected = []() -> const KernelTable& {
    const char* forced = std::getenv("GEDKIT_SIMD");
    if (forced != nullptr && std::string(forced) == "scalar") return detail::kScalarKernels;
    return kernels(Isa::Avx2);
  }();
  return selected;
}

}  // namespace ged::simd
