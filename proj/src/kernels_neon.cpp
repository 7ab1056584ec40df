// NEON variants for arm64. Baseline on that architecture, so there is no
// feature probe; the dispatcher uses these whenever they are compiled in.

#include "wilcfar/kernels.hpp"

#include <arm_neon.h>

namespace wilcfar::kernels {

namespace {

std::int64_t count_ge_neon(double x, const double* v, std::size_t n) {
  const float64x2_t vx = vdupq_n_f64(x);
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t m = vcgeq_f64(vx, vld1q_f64(v + i));
    acc = vaddq_u64(acc, vshrq_n_u64(m, 63));
  }
  std::int64_t c = static_cast<std::int64_t>(vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1));
  for (; i < n; ++i) c += (x >= v[i]) ? 1 : 0;
  return c;
}

double sum_neon(const double* v, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(v + i));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += v[i];
  return s;
}

double sum_sq_neon(const double* v, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(v + i);
    acc = vfmaq_f64(acc, a, a);
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += v[i] * v[i];
  return s;
}

}  // namespace

const Ops& neon_ops();
const Ops& neon_ops() {
  static const Ops ops{"neon", &count_ge_neon, &sum_neon, &sum_sq_neon};
  return ops;
}

}  // namespace wilcfar::kernels
