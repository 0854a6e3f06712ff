// NEON kernel variants for aarch64. float64x2 lanes; same contracts as the
// scalar reference.

#include "driftlab/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace drift::kernels {
namespace {

double dot_neon(const double* x, const double* y, size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_neon(double a, const double* x, double* y, size_t n) {
    float64x2_t av = vdupq_n_f64(a);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t yv = vld1q_f64(y + i);
        yv = vfmaq_f64(yv, av, vld1q_f64(x + i));
        vst1q_f64(y + i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_neon(double a, double* x, size_t n) {
    float64x2_t av = vdupq_n_f64(a);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(x + i, vmulq_f64(av, vld1q_f64(x + i)));
    }
    for (; i < n; ++i) x[i] *= a;
}

double nrm2sq_neon(const double* x, size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(x + i);
        acc = vfmaq_f64(acc, v, v);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

void axpy_sq_neon(double a, const double* x, double* y, size_t n) {
    float64x2_t av = vdupq_n_f64(a);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t xv = vld1q_f64(x + i);
        float64x2_t yv = vld1q_f64(y + i);
        yv = vfmaq_f64(yv, vmulq_f64(av, xv), xv);
        vst1q_f64(y + i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i] * x[i];
}

} // namespace

namespace detail {
const Ops neon_ops = {
    dot_neon, axpy_neon, scale_neon, nrm2sq_neon, axpy_sq_neon,
};
} // namespace detail

} // namespace drift::kernels

#endif // aarch64
