// Scalar reference kernels. These define the semantics the SIMD variants
// are tested against.

#include "driftlab/kernels.hpp"

namespace drift::kernels {
namespace {

double dot_scalar(const double* x, const double* y, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double a, double* x, size_t n) {
    for (size_t i = 0; i < n; ++i) x[i] *= a;
}

double nrm2sq_scalar(const double* x, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

void axpy_sq_scalar(double a, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += a * x[i] * x[i];
}

} // namespace

namespace detail {
const Ops scalar_ops = {
    dot_scalar, axpy_scalar, scale_scalar, nrm2sq_scalar, axpy_sq_scalar,
};
} // namespace detail

} // namespace drift::kernels
