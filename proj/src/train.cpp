#include "driftlab/train.hpp"

#include <cmath>
#include <cstring>

#include "driftlab/errors.hpp"
#include "driftlab/kernels.hpp"
#include "driftlab/rng.hpp"

namespace drift::train {

void TrainConfig::validate(const model::LossParams& params) const {
    if (eta <= 0.0) throw ConfigError("train.eta must be positive");
    if (eta * params.lambda >= 1.0)
        throw ConfigError("train.eta too high: eta*mu must stay below 1");
    if (minibatch == 0) throw ConfigError("train.minibatch must be positive");
    if (convergence_tol < 0.0) throw ConfigError("train.convergence_tol must be >= 0");
    if (init_scale < 0.0) throw ConfigError("train.init_scale must be >= 0");
}

namespace {

// minibatch SGD epochs over a multi-block span; shuffle keys carry the
// extra words so scratch and per-chunk orders never alias
void sgd_epochs(model::Theta& theta, model::DataSpan data, const model::LossParams& params,
                const TrainConfig& cfg, const int64_t* chunk_tag, CostLedger& ledger) {
    const kernels::Ops& ops = kernels::active();
    const size_t N = model::total_samples(data);
    const size_t p = theta.p();
    if (N == 0) throw RuntimeFailure("train: empty data");

    // prefix starts for global-index -> (block, offset) lookup
    std::vector<size_t> starts(data.size() + 1, 0);
    for (size_t b = 0; b < data.size(); ++b) starts[b + 1] = starts[b] + data[b].n;

    const uint64_t row = sample_bytes(theta.d);
    std::vector<double> g(p);

    for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        uint64_t key = chunk_tag ? rng::key({cfg.seed, rng::kShuffle, uint64_t(*chunk_tag),
                                             uint64_t(epoch)})
                                 : rng::key({cfg.seed, rng::kShuffle, uint64_t(epoch)});
        std::vector<uint32_t> perm = rng::permutation(key, uint32_t(N));

        for (size_t start = 0; start < N; start += cfg.minibatch) {
            size_t bn = std::min(cfg.minibatch, N - start);
            std::memset(g.data(), 0, p * sizeof(double));
            double w = 1.0 / double(bn);
            for (size_t b = 0; b < bn; ++b) {
                size_t idx = perm[start + b];
                size_t block = 0;
                while (starts[block + 1] <= idx) ++block;
                const model::DataView& view = data[block];
                size_t off = idx - starts[block];
                model::accum_ce_grad(theta, view.sample(off), view.y[off], w, g.data());
            }
            ops.axpy(params.lambda, theta.v.data(), g.data(), p);
            ops.axpy(-cfg.eta, g.data(), theta.v.data(), p);
            ledger.sample_grad_evals += bn;
            ledger.bytes_touched += bn * row;
        }

        if (!std::isfinite(ops.nrm2sq(theta.v.data(), p)))
            throw RuntimeFailure("training diverged: loss is non-finite");

        if (cfg.convergence_tol > 0.0) {
            model::grad_into(theta, data, params, g.data());
            ledger.sample_grad_evals += N;
            ledger.bytes_touched += N * row;
            if (std::sqrt(ops.nrm2sq(g.data(), p)) <= cfg.convergence_tol) break;
        }
    }
}

} // namespace

model::Theta train_scratch(model::DataSpan window, size_t classes,
                           const model::LossParams& params, const TrainConfig& cfg,
                           CostLedger& ledger) {
    if (window.empty() || model::total_samples(window) == 0)
        throw RuntimeFailure("train_scratch: empty window");
    if (classes < 2) throw ConfigError("train: classes must be at least 2");

    model::Theta theta(window[0].d, classes);
    if (cfg.random_init) {
        rng::Counter gen(rng::key({cfg.seed, rng::kInit}));
        for (double& v : theta.v) v = cfg.init_scale * gen.gaussian();
    }
    sgd_epochs(theta, window, params, cfg, nullptr, ledger);
    return theta;
}

void train_incremental(model::Theta& theta, const stream::Chunk& chunk,
                       const model::LossParams& params, const TrainConfig& cfg,
                       CostLedger& ledger) {
    if (chunk.n == 0) throw RuntimeFailure("train_incremental: empty chunk");
    model::DataView view(chunk);
    sgd_epochs(theta, model::DataSpan(&view, 1), params, cfg, &chunk.index, ledger);
}

uint64_t predicted_cost_sw(uint64_t L, uint64_t m, uint64_t e_ret, uint64_t p) {
    return L * m * e_ret * p;
}

uint64_t predicted_cost_uil(uint64_t m, uint64_t e_inc, uint64_t k, uint64_t i, uint64_t p) {
    return ((1 + e_inc) * m + k * i) * p;
}

} // namespace drift::train
