#include "driftlab/unlearn.hpp"

#include <cmath>
#include <cstring>

#include "driftlab/errors.hpp"
#include "driftlab/kernels.hpp"
#include "driftlab/linalg.hpp"
#include "driftlab/rng.hpp"

namespace drift::unlearn {

Backend backend_from_name(std::string_view name) {
    if (name == "newton-exact") return Backend::newton_exact;
    if (name == "newton-cg") return Backend::newton_cg;
    if (name == "diag-fisher") return Backend::diag_fisher;
    throw ConfigError("unlearn.backend must be newton-exact, newton-cg, or diag-fisher (got \"" +
                      std::string(name) + "\")");
}

std::string backend_name(Backend b) {
    switch (b) {
    case Backend::newton_exact: return "newton-exact";
    case Backend::newton_cg: return "newton-cg";
    case Backend::diag_fisher: return "diag-fisher";
    }
    return "?";
}

void UnlearnConfig::validate() const {
    if (k < 1) throw ConfigError("unlearn.k must be at least 1");
    if (max_iters < 1) throw ConfigError("unlearn.max_iters must be at least 1");
    if (cg_tol <= 0.0) throw ConfigError("unlearn.cg_tol must be positive");
}

CgResult inverse_hvp_cg(const model::Theta& theta, model::DataSpan ref_data,
                        std::span<const double> v, const model::LossParams& params,
                        const UnlearnConfig& cfg, train::CostLedger& ledger) {
    const kernels::Ops& ops = kernels::active();
    const size_t p = theta.p();
    if (v.size() != p) throw RuntimeFailure("inverse_hvp_cg: vector length != p");
    const size_t n_ref = model::total_samples(ref_data);
    if (n_ref == 0) throw RuntimeFailure("inverse_hvp_cg: empty reference data");
    const double damping = cfg.effective_damping(params);
    const uint64_t row = train::sample_bytes(theta.d);

    CgResult out;
    out.u.assign(p, 0.0);
    double bnorm = std::sqrt(ops.nrm2sq(v.data(), p));
    if (bnorm == 0.0) return out; // zero RHS solves exactly

    std::vector<double> r(v.begin(), v.end()); // residual: b - A*0
    std::vector<double> dir = r;
    std::vector<double> ad(p);
    double rs = ops.nrm2sq(r.data(), p);

    out.converged = false;
    for (size_t it = 0; it < cfg.max_iters; ++it) {
        model::hvp_into(theta, ref_data, dir.data(), params, ad.data());
        ops.axpy(damping, dir.data(), ad.data(), p);
        ledger.hvp_evals += n_ref;
        ledger.bytes_touched += n_ref * row;

        double dad = ops.dot(dir.data(), ad.data(), p);
        if (dad <= 0.0) { // numerically exhausted; H is PD so this is round-off
            out.iters = it;
            out.converged = true;
            return out;
        }
        double alpha = rs / dad;
        ops.axpy(alpha, dir.data(), out.u.data(), p);
        ops.axpy(-alpha, ad.data(), r.data(), p);
        double rs_new = ops.nrm2sq(r.data(), p);
        out.iters = it + 1;
        if (std::sqrt(rs_new) <= cfg.cg_tol * bnorm) {
            out.converged = true;
            return out;
        }
        ops.scale(rs_new / rs, dir.data(), p);
        ops.axpy(1.0, r.data(), dir.data(), p);
        rs = rs_new;
    }
    return out; // best iterate, converged = false
}

std::vector<double> diag_fisher_inverse(const model::Theta& theta, model::DataSpan ref_data,
                                        std::span<const double> v,
                                        const model::LossParams& params, double damping,
                                        train::CostLedger& ledger) {
    const size_t p = theta.p();
    if (v.size() != p) throw RuntimeFailure("diag_fisher_inverse: vector length != p");
    const size_t n_ref = model::total_samples(ref_data);
    if (n_ref == 0) throw RuntimeFailure("diag_fisher_inverse: empty reference data");

    std::vector<double> fisher(p, 0.0);
    std::vector<double> g(p);
    for (const model::DataView& view : ref_data) {
        for (size_t i = 0; i < view.n; ++i) {
            std::memset(g.data(), 0, p * sizeof(double));
            model::accum_ce_grad(theta, view.sample(i), view.y[i], 1.0, g.data());
            for (size_t j = 0; j < p; ++j) fisher[j] += g[j] * g[j];
        }
    }
    ledger.hvp_evals += n_ref;
    ledger.bytes_touched += n_ref * train::sample_bytes(theta.d);

    std::vector<double> u(p);
    double ridge = params.lambda + damping;
    for (size_t j = 0; j < p; ++j) u[j] = v[j] / (fisher[j] / double(n_ref) + ridge);
    return u;
}

UnlearnResult unlearn_chunk(const model::Theta& theta, const model::DataView& forget,
                            model::DataSpan retained, const model::LossParams& params,
                            const UnlearnConfig& cfg, uint64_t step, train::CostLedger& ledger) {
    cfg.validate();
    const kernels::Ops& ops = kernels::active();
    const size_t p = theta.p();
    const size_t n_ret = model::total_samples(retained);
    if (n_ret == 0) throw RuntimeFailure("unlearn_chunk: retained window is empty");
    const double damping = cfg.effective_damping(params);
    const uint64_t row = train::sample_bytes(theta.d);

    UnlearnResult out;

    // forget-side bookkeeping: its gradient norm is the logged diagnostic
    if (forget.n > 0) {
        std::vector<double> gf = model::grad(theta, forget, params);
        out.forget_grad_norm = std::sqrt(ops.nrm2sq(gf.data(), p));
        ledger.sample_grad_evals += forget.n;
        ledger.bytes_touched += forget.n * row;
    }

    // exact gradient of the retained objective at the current parameters
    std::vector<double> g_ret = model::grad(theta, retained, params);
    ledger.sample_grad_evals += n_ret;
    ledger.bytes_touched += n_ret * row;

    // curvature subsample: k rows gathered from the retained span
    size_t k_eff = std::min(cfg.k, n_ret);
    std::vector<size_t> starts(retained.size() + 1, 0);
    for (size_t b = 0; b < retained.size(); ++b) starts[b + 1] = starts[b] + retained[b].n;
    std::vector<uint32_t> order =
        rng::permutation(rng::key({cfg.seed, rng::kSubsample, step}), uint32_t(n_ret));

    std::vector<double> sub_x(k_eff * theta.d);
    std::vector<int32_t> sub_y(k_eff);
    for (size_t i = 0; i < k_eff; ++i) {
        size_t idx = order[i];
        size_t block = 0;
        while (starts[block + 1] <= idx) ++block;
        const model::DataView& view = retained[block];
        const double* x = view.sample(idx - starts[block]);
        std::copy(x, x + theta.d, sub_x.data() + i * theta.d);
        sub_y[i] = view.y[idx - starts[block]];
    }
    model::DataView sub(sub_x.data(), sub_y.data(), k_eff, theta.d);
    model::DataSpan sub_span(&sub, 1);

    std::vector<double> u;
    switch (cfg.backend) {
    case Backend::newton_exact: {
        linalg::Mat h = model::hessian_dense(theta, sub_span, params);
        for (size_t j = 0; j < p; ++j) h.at(j, j) += damping;
        u = linalg::cholesky_solve(h, g_ret); // PD by lambda + damping > 0
        ledger.hvp_evals += k_eff * p;        // dense assembly + solve work bound
        ledger.bytes_touched += k_eff * row;
        break;
    }
    case Backend::newton_cg: {
        CgResult cg = inverse_hvp_cg(theta, sub_span, g_ret, params, cfg, ledger);
        u = std::move(cg.u);
        out.cg_converged = cg.converged;
        break;
    }
    case Backend::diag_fisher:
        u = diag_fisher_inverse(theta, sub_span, g_ret, params, damping, ledger);
        break;
    }

    out.theta = theta;
    ops.axpy(-1.0, u.data(), out.theta.v.data(), p);
    out.step_norm = std::sqrt(ops.nrm2sq(u.data(), p));
    return out;
}

} // namespace drift::unlearn
