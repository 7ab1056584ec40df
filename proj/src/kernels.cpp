#include "wilcfar/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace wilcfar::kernels {

#if defined(WILCFAR_HAVE_AVX2)
const Ops& avx2_ops();
#endif
#if defined(WILCFAR_HAVE_NEON)
const Ops& neon_ops();
#endif

namespace {

const Ops* pick() {
  if (const char* want = std::getenv("WILCFAR_KERNELS")) {
    if (std::strcmp(want, "scalar") == 0) return &scalar();
#if defined(WILCFAR_HAVE_AVX2)
    if (std::strcmp(want, "avx2") == 0 && __builtin_cpu_supports("avx2")) return &avx2_ops();
#endif
#if defined(WILCFAR_HAVE_NEON)
    if (std::strcmp(want, "neon") == 0) return &neon_ops();
#endif
    return &scalar();
  }
#if defined(WILCFAR_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return &avx2_ops();
#endif
#if defined(WILCFAR_HAVE_NEON)
  return &neon_ops();
#endif
  return &scalar();
}

}  // namespace

const Ops& active() {
  static const Ops* chosen = pick();
  return *chosen;
}

std::vector<const Ops*> available() {
  std::vector<const Ops*> out{&scalar()};
#if defined(WILCFAR_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) out.push_back(&avx2_ops());
#endif
#if defined(WILCFAR_HAVE_NEON)
  out.push_back(&neon_ops());
#endif
  return out;
}

}  // namespace wilcfar::kernels
