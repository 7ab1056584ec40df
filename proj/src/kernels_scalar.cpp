#include "wilcfar/kernels.hpp"

namespace wilcfar::kernels {

namespace {

std::int64_t count_ge_scalar(double x, const double* v, std::size_t n) {
  std::int64_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (x >= v[i]) ? 1 : 0;
  return c;
}

double sum_scalar(const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += v[i];
  return s;
}

double sum_sq_scalar(const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += v[i] * v[i];
  return s;
}

}  // namespace

const Ops& scalar() {
  static const Ops ops{"scalar", &count_ge_scalar, &sum_scalar, &sum_sq_scalar};
  return ops;
}

}  // namespace wilcfar::kernels
