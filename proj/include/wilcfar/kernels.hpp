#pragma once

// Arithmetic kernels for the hot per-window loops: the step-function count
// behind the rank statistic and the moment reductions used by the parametric
// estimators. A scalar reference implementation always exists; AVX2 (x86-64)
// and NEON (arm64) variants are picked at startup and equivalence-tested
// against the scalar one.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace wilcfar::kernels {

struct Ops {
  const char* name;
  // #{ i : x >= v[i] }
  std::int64_t (*count_ge)(double x, const double* v, std::size_t n);
  double (*sum)(const double* v, std::size_t n);
  double (*sum_sq)(const double* v, std::size_t n);
};

const Ops& scalar();

// Best variant for this machine. Override with WILCFAR_KERNELS=scalar|avx2|neon.
const Ops& active();

// Every variant usable on this machine, scalar first.
std::vector<const Ops*> available();

}  // namespace wilcfar::kernels
