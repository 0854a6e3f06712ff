#pragma once

// Checks of the analytical claims on instrumented runs: the telescoped
// error-accumulation bound, the smoothness-based loss-gap bound after a
// window of new data, the per-step stability condition, and the fixed
// point the error settles at on stationary streams.

#include <cstddef>
#include <vector>

#include "driftlab/model.hpp"

namespace drift::theory {

// Per window-shift instrumentation from an oracle-tracked run. Index 0 is
// the end of warm-up, where the oracle is anchored to the model itself, so
// e[0] == 0 by construction.
struct TheoryTrace {
    std::vector<double> e;     // |theta_t - theta*_t| per shift
    std::vector<double> delta; // delta[t] = max(0, e[t] - e[t-1]); delta[0] = 0
    std::vector<double> eps_unlearn_hat;    // |post-unlearn theta - retained optimum|
    std::vector<double> eps_forgetting_hat; // max(0, delta[t] - eps_unlearn_hat[t])
    double mu = 0.0;
    double beta = 0.0;
    double eta = 0.0;
    size_t L = 0;

    bool has_eps() const { return !eps_unlearn_hat.empty(); }
    void validate() const; // length/sign invariants
};

struct AccumulationReport {
    double e_L = 0.0;
    double delta_max = 0.0;
    double bound = 0.0; // L * delta_max
    double slack = 0.0; // bound - e_L
    bool holds = false;
};

// e_L <= L * max_t delta_t (+1e-9 float fuzz), exact by telescoping when
// e[0] == 0; delta_max is taken over shifts 1..L
AccumulationReport accumulation_check(const TheoryTrace& trace);

struct Theorem1Report {
    double loss_model = 0.0;  // held-out expected loss of the tracked model
    double loss_oracle = 0.0; // same for the perfectly retrained reference
    double gap = 0.0;
    double bound = 0.0;     // (beta/2) * (L * delta_max)^2
    double stat_slack = 0.0; // 3 standard errors of the paired gap estimate
    size_t n_eval = 0;
    bool holds = false;
};

// held-out check of gap <= (beta/2)(L*delta_max)^2 + 3 SE on eval data
// drawn from the post-drift distribution
Theorem1Report theorem1_check(const model::Theta& theta_model, const model::Theta& theta_oracle,
                              double beta, size_t L, double delta_max, model::DataSpan eval_data,
                              const model::LossParams& params);

struct StabilityStep {
    double lhs = 0.0; // eta*mu * e_{t-1}: the corrective pull
    double rhs = 0.0; // (1 - eta*mu) * eps_unlearn + eps_forgetting
    bool stable = false;
};

struct StabilityReport {
    std::vector<StabilityStep> steps; // one per shift t >= 1
    double stable_fraction = 0.0;
};

// flags shifts where the accumulated error outruns the corrective pull
StabilityReport stability_check(const TheoryTrace& trace);

// fixed point ((1 - eta*mu) * eps_u + eps_f) / (eta*mu); requires
// 0 < eta*mu < 1
double e_infinity(double eta, double mu, double eps_unlearn, double eps_forgetting);

} // namespace drift::theory
