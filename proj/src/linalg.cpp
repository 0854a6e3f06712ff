#include "driftlab/linalg.hpp"

#include <cmath>

#include "driftlab/errors.hpp"
#include "driftlab/kernels.hpp"

namespace drift::linalg {

void cholesky_factor(Mat& a) {
    const kernels::Ops& ops = kernels::active();
    const size_t n = a.n;
    for (size_t j = 0; j < n; ++j) {
        double diag = a.at(j, j) - ops.nrm2sq(a.row(j), j);
        if (!(diag > 0.0))
            throw RuntimeFailure("cholesky: matrix is not positive definite");
        diag = std::sqrt(diag);
        a.at(j, j) = diag;
        for (size_t i = j + 1; i < n; ++i)
            a.at(i, j) = (a.at(i, j) - ops.dot(a.row(i), a.row(j), j)) / diag;
    }
    // zero the strict upper triangle so the factor is unambiguous
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            a.at(i, j) = 0.0;
}

void cholesky_apply(const Mat& chol, const double* b, double* x) {
    const kernels::Ops& ops = kernels::active();
    const size_t n = chol.n;
    // forward: L y = b
    for (size_t i = 0; i < n; ++i)
        x[i] = (b[i] - ops.dot(chol.row(i), x, i)) / chol.at(i, i);
    // backward: L^T z = y
    for (size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (size_t k = ii + 1; k < n; ++k)
            s -= chol.at(k, ii) * x[k];
        x[ii] = s / chol.at(ii, ii);
    }
}

std::vector<double> cholesky_solve(const Mat& a, const std::vector<double>& b) {
    if (b.size() != a.n) throw RuntimeFailure("cholesky: size mismatch");
    Mat chol = a;
    cholesky_factor(chol);
    std::vector<double> x(a.n, 0.0);
    cholesky_apply(chol, b.data(), x.data());
    return x;
}

} // namespace drift::linalg
