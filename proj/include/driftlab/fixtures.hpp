#pragma once

// Deterministic oracle builders: a tolerance-converged optimum for any
// sample set (the "perfectly retrained" reference everything is measured
// against) and hand-constructed accuracy series with known metric answers.
// These paths favor obviousness over speed and do no cost accounting.

#include <string>
#include <vector>

#include "driftlab/linalg.hpp"
#include "driftlab/model.hpp"

namespace drift::fixtures {

struct OracleBundle {
    model::Theta theta_star;
    linalg::Mat hessian;      // dense Hessian at theta_star (empty when skipped)
    double grad_norm = 0.0;   // at stop; <= tol on success
    size_t iterations = 0;
};

// Full-batch gradient descent with Armijo backtracking until the gradient
// norm drops to tol. Strong convexity makes the minimizer unique, so the
// optional warm start changes the iteration count but never the answer.
// classes = 0 infers the count from labels (and the warm start, if any).
OracleBundle exact_optimum(model::DataSpan data, const model::LossParams& params,
                           double tol = 1e-8, size_t max_iters = 1000000,
                           bool with_hessian = false, const model::Theta* warm_start = nullptr,
                           size_t classes = 0);

struct FixtureSeries {
    std::vector<double> accuracy;
    size_t drift_chunk = 0;
    size_t baseline_window = 0;
    // documented expected metric values for this series
    int64_t expect_recovery = 0; // -1 = not recovered
    double expect_det_max = 0.0;
    double expect_det_avg = 0.0;
};

// known names: "flat09", "dip5", "never"
FixtureSeries fixture_series(const std::string& name);

} // namespace drift::fixtures
