#pragma once

// Minibatch SGD drivers shared by both algorithms, plus the closed-form
// cost models they are audited against. Cost accounting is explicit: one
// grad unit = one per-sample forward+backward pass, one hvp unit = one
// per-sample curvature contribution, bytes = training rows read.

#include <cstdint>

#include "driftlab/datastream.hpp"
#include "driftlab/model.hpp"

namespace drift::train {

struct TrainConfig {
    double eta = 0.1;
    size_t epochs = 1;    // E_ret when retraining from scratch, E_inc when incremental
    size_t minibatch = 32;
    uint64_t seed = 0;
    double convergence_tol = 0.0; // scratch only: stop once the full-window gradient
                                  // norm falls below this (0 disables the check)
    bool random_init = false;     // scratch: seeded gaussian init instead of zeros
    double init_scale = 0.01;

    void validate(const model::LossParams& params) const;
};

struct CostLedger {
    uint64_t sample_grad_evals = 0;
    uint64_t hvp_evals = 0;
    uint64_t wall_ns = 0;
    uint64_t bytes_touched = 0;

    void add(const CostLedger& o) {
        sample_grad_evals += o.sample_grad_evals;
        hvp_evals += o.hvp_evals;
        wall_ns += o.wall_ns;
        bytes_touched += o.bytes_touched;
    }
    CostLedger delta_since(const CostLedger& earlier) const {
        return {sample_grad_evals - earlier.sample_grad_evals, hvp_evals - earlier.hvp_evals,
                wall_ns - earlier.wall_ns, bytes_touched - earlier.bytes_touched};
    }
};

// bytes one training row occupies (features + label)
inline uint64_t sample_bytes(size_t d) {
    return uint64_t(d) * sizeof(double) + sizeof(int32_t);
}

// Reset to zero (or a seeded init) and run cfg.epochs of minibatch SGD over
// every block in the window. The shuffle is keyed on (seed, epoch) only, so
// the result depends on window content, never on arrival history. classes
// fixes the parameter shape regardless of which labels the window contains.
model::Theta train_scratch(model::DataSpan window, size_t classes,
                           const model::LossParams& params, const TrainConfig& cfg,
                           CostLedger& ledger);

// Continue from theta over one chunk for cfg.epochs; the shuffle is keyed
// on (seed, chunk index, epoch).
void train_incremental(model::Theta& theta, const stream::Chunk& chunk,
                       const model::LossParams& params, const TrainConfig& cfg,
                       CostLedger& ledger);

// closed-form cost models, in sample-gradient units times parameter count
uint64_t predicted_cost_sw(uint64_t L, uint64_t m, uint64_t e_ret, uint64_t p);
uint64_t predicted_cost_uil(uint64_t m, uint64_t e_inc, uint64_t k, uint64_t i, uint64_t p);

} // namespace drift::train
