#pragma once

// Small dense symmetric matrix helpers for the exact-solver path. These
// exist for modest dimensions (p <= a few hundred); the iterative code
// paths never touch them.

#include <cstddef>
#include <vector>

namespace drift::linalg {

struct Mat {
    size_t n = 0;
    std::vector<double> a; // row-major n*n

    Mat() = default;
    explicit Mat(size_t n_) : n(n_), a(n_ * n_, 0.0) {}
    double& at(size_t i, size_t j) { return a[i * n + j]; }
    double at(size_t i, size_t j) const { return a[i * n + j]; }
    double* row(size_t i) { return a.data() + i * n; }
    const double* row(size_t i) const { return a.data() + i * n; }
};

// Solve A x = b for symmetric positive definite A via Cholesky (LL^T).
// Throws RuntimeFailure if A is not positive definite.
std::vector<double> cholesky_solve(const Mat& a, const std::vector<double>& b);

// In-place Cholesky factor (lower triangle); shared by cholesky_solve.
void cholesky_factor(Mat& a);
void cholesky_apply(const Mat& chol, const double* b, double* x);

} // namespace drift::linalg
