#pragma once

// Removal of one chunk's influence by a single damped Newton step toward
// the retained-data minimizer, with three inverse-curvature backends of
// decreasing cost and fidelity: a dense solve, conjugate gradients on
// Hessian-vector products, and a diagonal empirical Fisher.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "driftlab/model.hpp"
#include "driftlab/train.hpp"

namespace drift::unlearn {

enum class Backend { newton_exact, newton_cg, diag_fisher };

Backend backend_from_name(std::string_view name); // "newton-exact" | "newton-cg" | "diag-fisher"
std::string backend_name(Backend b);

struct UnlearnConfig {
    Backend backend = Backend::newton_cg;
    size_t k = 64;         // curvature subsample size
    size_t max_iters = 10; // CG iteration cap: the i of the cost model
    double cg_tol = 1e-8;
    double damping = -1.0; // added to the Hessian diagonal; < 0 picks 1e-3*lambda
    uint64_t seed = 0;

    double effective_damping(const model::LossParams& params) const {
        return damping < 0.0 ? 1e-3 * params.lambda : damping;
    }
    void validate() const;
};

struct CgResult {
    std::vector<double> u;
    bool converged = true; // false: hit max_iters with the residual above tol
    size_t iters = 0;
};

// approximate solution of (H(theta; ref_data) + damping*I) u = v by
// conjugate gradients; H includes the ridge term
CgResult inverse_hvp_cg(const model::Theta& theta, model::DataSpan ref_data,
                        std::span<const double> v, const model::LossParams& params,
                        const UnlearnConfig& cfg, train::CostLedger& ledger);

// u_j = v_j / (F_jj + lambda + damping) with F_jj the mean squared
// per-sample cross-entropy gradient coordinate over ref_data
std::vector<double> diag_fisher_inverse(const model::Theta& theta, model::DataSpan ref_data,
                                        std::span<const double> v,
                                        const model::LossParams& params, double damping,
                                        train::CostLedger& ledger);

struct UnlearnResult {
    model::Theta theta;
    bool cg_converged = true;
    double forget_grad_norm = 0.0; // diagnostic from the forget-side bookkeeping
    double step_norm = 0.0;        // |theta' - theta|
};

// One damped Newton step: theta' = theta - (H_k + damping*I)^{-1} grad
// F_ret(theta). The gradient is exact over the full retained span; the
// curvature backend sees a k-subsample keyed on (cfg.seed, step).
UnlearnResult unlearn_chunk(const model::Theta& theta, const model::DataView& forget,
                            model::DataSpan retained, const model::LossParams& params,
                            const UnlearnConfig& cfg, uint64_t step, train::CostLedger& ledger);

} // namespace drift::unlearn
