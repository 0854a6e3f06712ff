#include "driftlab/theory.hpp"

#include <algorithm>
#include <cmath>

#include "driftlab/errors.hpp"

namespace drift::theory {

void TheoryTrace::validate() const {
    if (e.empty()) throw RuntimeFailure("theory trace: empty error series");
    if (delta.size() != e.size()) throw RuntimeFailure("theory trace: delta length mismatch");
    if (has_eps() && (eps_unlearn_hat.size() != e.size() ||
                      eps_forgetting_hat.size() != e.size()))
        throw RuntimeFailure("theory trace: epsilon series length mismatch");
    for (double v : e)
        if (v < 0.0 || !std::isfinite(v))
            throw RuntimeFailure("theory trace: e_t must be finite and non-negative");
}

AccumulationReport accumulation_check(const TheoryTrace& trace) {
    trace.validate();
    if (trace.e.size() < trace.L + 1)
        throw RuntimeFailure("accumulation_check: trace shorter than L shifts");

    AccumulationReport rep;
    rep.e_L = trace.e[trace.L];
    for (size_t t = 1; t <= trace.L; ++t) rep.delta_max = std::max(rep.delta_max, trace.delta[t]);
    rep.bound = double(trace.L) * rep.delta_max;
    rep.slack = rep.bound - rep.e_L;
    rep.holds = rep.e_L <= rep.bound + 1e-9;
    return rep;
}

Theorem1Report theorem1_check(const model::Theta& theta_model, const model::Theta& theta_oracle,
                              double beta, size_t L, double delta_max, model::DataSpan eval_data,
                              const model::LossParams& params) {
    size_t n = model::total_samples(eval_data);
    if (n == 0) throw RuntimeFailure("theorem1_check: empty evaluation data");

    // Paired per-sample cross-entropy differences give the stochastic part
    // of the gap and its standard error; the ridge difference is a
    // deterministic shift with no sampling variance.
    model::LossParams no_ridge{0.0};
    double sum = 0.0, sum_sq = 0.0;
    for (const model::DataView& view : eval_data) {
        for (size_t i = 0; i < view.n; ++i) {
            model::DataView one(view.sample(i), view.y + i, 1, view.d);
            double diff = model::loss(theta_model, one, no_ridge) -
                          model::loss(theta_oracle, one, no_ridge);
            sum += diff;
            sum_sq += diff * diff;
        }
    }
    double mean = sum / double(n);
    double var = std::max(0.0, sum_sq / double(n) - mean * mean);
    double se = std::sqrt(var / double(n));

    Theorem1Report rep;
    rep.n_eval = n;
    rep.loss_model = model::loss(theta_model, eval_data, params);
    rep.loss_oracle = model::loss(theta_oracle, eval_data, params);
    rep.gap = rep.loss_model - rep.loss_oracle;
    rep.bound = 0.5 * beta * (double(L) * delta_max) * (double(L) * delta_max);
    rep.stat_slack = 3.0 * se;
    rep.holds = rep.gap <= rep.bound + rep.stat_slack;
    return rep;
}

StabilityReport stability_check(const TheoryTrace& trace) {
    trace.validate();
    if (!trace.has_eps())
        throw RuntimeFailure("stability_check: trace lacks epsilon estimates");

    StabilityReport rep;
    double em = trace.eta * trace.mu;
    size_t stable = 0;
    for (size_t t = 1; t < trace.e.size(); ++t) {
        StabilityStep step;
        step.lhs = em * trace.e[t - 1];
        step.rhs = (1.0 - em) * trace.eps_unlearn_hat[t] + trace.eps_forgetting_hat[t];
        step.stable = step.lhs >= step.rhs;
        stable += step.stable;
        rep.steps.push_back(step);
    }
    rep.stable_fraction = rep.steps.empty() ? 1.0 : double(stable) / double(rep.steps.size());
    return rep;
}

double e_infinity(double eta, double mu, double eps_unlearn, double eps_forgetting) {
    double em = eta * mu;
    if (!(em > 0.0) || !(em < 1.0))
        throw ConfigError("e_infinity: eta*mu must lie in (0, 1)");
    return ((1.0 - em) * eps_unlearn + eps_forgetting) / em;
}

} // namespace drift::theory
