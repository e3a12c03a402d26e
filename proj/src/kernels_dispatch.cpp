#include <cstdlib>
#include <string_view>

#include "spt/kernels.hpp"

namespace spt::kernels {

bool avx2_supported() {
#if defined(SPT_BUILD_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#if !defined(SPT_BUILD_AVX2)
const Ops& avx2() { return scalar(); }  // unreachable: avx2_supported() is false
#endif

namespace {

const Ops& choose() {
  if (const char* env = std::getenv("SPT_KERNELS")) {
    std::string_view want(env);
    if (want == "scalar") return scalar();
    if (want == "avx2" && avx2_supported()) return avx2();
  }
  return avx2_supported() ? avx2() : scalar();
}

}  // namespace

const Ops& active() {
  static const Ops& ops = choose();
  return ops;
}

std::vector<const Ops*> supported() {
  std::vector<const Ops*> v{&scalar()};
  if (avx2_supported()) v.push_back(&avx2());
  return v;
}

}  // namespace spt::kernels
