#pragma once

// Dense double-precision kernels behind the classifier's inner loops.
// Scalar reference implementations always exist; an AVX2/FMA (x86-64) or
// NEON (aarch64) variant is selected at runtime when the CPU supports it.
// All variants satisfy the same contracts; they may differ in rounding at
// the level of reassociated floating-point sums.

#include <cstddef>
#include <string>

namespace drift::kernels {

enum class Backend { scalar, avx2, neon };

struct Ops {
    // sum_i x[i] * y[i]
    double (*dot)(const double* x, const double* y, size_t n);
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, size_t n);
    // x[i] *= a
    void (*scale)(double a, double* x, size_t n);
    // sum_i x[i]^2
    double (*nrm2sq)(const double* x, size_t n);
    // y[i] += a * x[i]^2   (diagonal Fisher accumulation)
    void (*axpy_sq)(double a, const double* x, double* y, size_t n);
};

// Kernel table for the active backend. Resolved once on first use:
// best supported variant, unless DRIFTLAB_KERNELS=scalar|avx2|neon
// overrides it.
const Ops& active();

Backend backend();
std::string backend_name();

// Force a specific backend (used by equivalence tests and the CLI).
// Throws ConfigError if the variant is not compiled in or not supported
// by this CPU.
void set_backend(Backend b);

// Table for an explicit backend; null pointers if unavailable.
const Ops* table_for(Backend b);

namespace detail {
extern const Ops scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
extern const Ops avx2_ops;
#endif
#if defined(__aarch64__)
extern const Ops neon_ops;
#endif
} // namespace detail

} // namespace drift::kernels
