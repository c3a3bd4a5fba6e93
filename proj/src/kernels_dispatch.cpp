#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace capx::kernels {

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar,         "scalar",         &scalar::rational_eval,
                                 &scalar::pole_column, &scalar::max_abs_diff, &scalar::dot,
                                 &scalar::axpy,        &scalar::clenshaw};
  return table;
}

const KernelTable* avx2_table() {
#if defined(CAPX_HAVE_AVX2_TU)
  static const bool supported = __builtin_cpu_supports("avx2");
  static const KernelTable table{Isa::avx2,          "avx2",          &avx2::rational_eval,
                                 &avx2::pole_column, &avx2::max_abs_diff, &avx2::dot,
                                 &avx2::axpy,        &avx2::clenshaw};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = [&]() -> const KernelTable& {
    const char* forced = std::getenv("CAPX_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
    if (const KernelTable* v = avx2_table()) return *v;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace capx::kernels
