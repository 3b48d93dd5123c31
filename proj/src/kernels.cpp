#include "welldist/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace welldist::kernels {

#ifdef WELLDIST_HAVE_AVX2
const KernelTable& avx2_table();
namespace {
bool avx2_usable() { return __builtin_cpu_supports("avx2"); }
}  // namespace
#endif

const KernelTable& active() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("WELLDIST_SIMD");
    const std::string_view want = env ? env : "";
    if (want == "scalar") return &scalar();
#ifdef WELLDIST_HAVE_AVX2
    if (avx2_usable() && (want.empty() || want == "avx2")) return &avx2_table();
#endif
    return &scalar();
  }();
  return *chosen;
}

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> v{&scalar()};
#ifdef WELLDIST_HAVE_AVX2
  if (avx2_usable()) v.push_back(&avx2_table());
#endif
  return v;
}

}  // namespace welldist::kernels
