#include "driftlab/scheduler.hpp"

#include <chrono>
#include <cmath>

#include "driftlab/errors.hpp"
#include "driftlab/kernels.hpp"

namespace drift::sched {

Algo algo_from_name(std::string_view name) {
    if (name == "sw") return Algo::sw;
    if (name == "uil") return Algo::uil;
    throw ConfigError("run.algo must be sw or uil (got \"" + std::string(name) + "\")");
}

std::string algo_name(Algo a) { return a == Algo::sw ? "sw" : "uil"; }

void RunConfig::validate(const model::LossParams& params) const {
    if (L < 1) throw ConfigError("run.L must be at least 1");
    train.validate(params);
    if (algo == Algo::uil) unlearn.validate();
    if (oracle_tracking && algo != Algo::uil)
        throw ConfigError("run.oracle_tracking requires algo uil");
    if (eps_tracking && !oracle_tracking)
        throw ConfigError("run.eps_tracking requires oracle_tracking");
}

Window::Window(size_t L) : buf_(L) {
    if (L == 0) throw ConfigError("window length must be at least 1");
}

void Window::push(stream::Chunk c) {
    if (count_ < buf_.size()) {
        buf_[(head_ + count_) % buf_.size()] = std::move(c);
        ++count_;
    } else {
        buf_[head_] = std::move(c);
        head_ = (head_ + 1) % buf_.size();
    }
}

const stream::Chunk& Window::oldest() const {
    if (count_ == 0) throw RuntimeFailure("window is empty");
    return buf_[head_];
}

const stream::Chunk& Window::at(size_t i) const {
    if (i >= count_) throw RuntimeFailure("window index out of range");
    return buf_[(head_ + i) % buf_.size()];
}

std::vector<model::DataView> Window::views() const {
    std::vector<model::DataView> out;
    out.reserve(count_);
    for (size_t i = 0; i < count_; ++i) out.emplace_back(at(i));
    return out;
}

std::vector<model::DataView> Window::views_without_oldest() const {
    std::vector<model::DataView> out;
    if (count_ == 0) return out;
    out.reserve(count_ - 1);
    for (size_t i = 1; i < count_; ++i) out.emplace_back(at(i));
    return out;
}

namespace {

uint64_t now_ns() {
    return uint64_t(std::chrono::duration_cast<std::chrono::nanoseconds>(
                        std::chrono::steady_clock::now().time_since_epoch())
                        .count());
}

struct Eval {
    double acc = 0.0;
    double loss = 0.0;
};

// Test-Then-Train: score the incoming chunk before the model trains on it
Eval evaluate(const model::Theta& theta, const stream::Chunk& chunk,
              const model::LossParams& params) {
    size_t correct = 0;
    for (size_t i = 0; i < chunk.n; ++i)
        correct += model::predict_class(theta, chunk.features.data() + i * chunk.d) ==
                   chunk.labels[i];
    model::DataView view(chunk);
    return {double(correct) / double(chunk.n), model::loss(theta, view, params)};
}

train::TrainConfig with_epochs(const train::TrainConfig& base, size_t epochs) {
    train::TrainConfig cfg = base;
    cfg.epochs = epochs;
    return cfg;
}

double param_distance(const model::Theta& a, const model::Theta& b) {
    const kernels::Ops& ops = kernels::active();
    std::vector<double> diff = a.v;
    ops.axpy(-1.0, b.v.data(), diff.data(), diff.size());
    return std::sqrt(ops.nrm2sq(diff.data(), diff.size()));
}

} // namespace

RunLog run_sw(const stream::Stream& s, const model::LossParams& params, const RunConfig& cfg) {
    cfg.validate(params);
    const size_t C = s.num_classes();
    model::Theta theta(s.feature_dim(), C);
    Window window(cfg.L);
    train::CostLedger total;
    RunLog log;

    for (size_t k = 0; k < s.n_chunks(); ++k) {
        stream::Chunk chunk = s.chunk(k);
        Eval ev = evaluate(theta, chunk, params);
        train::CostLedger before = total;
        uint64_t t0 = now_ns();

        if (!window.full()) { // warm-up: incremental updates while the window fills
            train_incremental(theta, chunk, params, with_epochs(cfg.train, cfg.e_inc), total);
            window.push(std::move(chunk));
        } else { // reset and retrain on the shifted window
            window.push(std::move(chunk));
            std::vector<model::DataView> views = window.views();
            theta = train_scratch(views, C, params, with_epochs(cfg.train, cfg.e_ret), total);
        }

        train::CostLedger delta = total.delta_since(before);
        delta.wall_ns = now_ns() - t0;
        log.records.push_back({int64_t(k), ev.acc, ev.loss, delta,
                               std::numeric_limits<double>::quiet_NaN()});
    }
    log.final_theta = std::move(theta);
    return log;
}

RunLog run_uil(const stream::Stream& s, const model::LossParams& params, const RunConfig& cfg) {
    cfg.validate(params);
    const size_t C = s.num_classes();
    model::Theta theta(s.feature_dim(), C);
    Window window(cfg.L);
    train::CostLedger total;
    RunLog log;

    for (size_t k = 0; k < s.n_chunks(); ++k) {
        stream::Chunk chunk = s.chunk(k);
        Eval ev = evaluate(theta, chunk, params);
        train::CostLedger before = total;
        uint64_t t0 = now_ns();

        if (!window.full()) { // warm-up, identical to the sliding-window run
            train_incremental(theta, chunk, params, with_epochs(cfg.train, cfg.e_inc), total);
            window.push(std::move(chunk));
        } else {
            size_t shift_no = k - cfg.L + 1;
            if (cfg.anchor_period > 0 && shift_no % cfg.anchor_period == 0) {
                // anchor: fall back to the full scratch retrain
                window.push(std::move(chunk));
                std::vector<model::DataView> views = window.views();
                theta =
                    train_scratch(views, C, params, with_epochs(cfg.train, cfg.e_ret), total);
            } else {
                const stream::Chunk& forget = window.oldest();
                std::vector<model::DataView> retained = window.views_without_oldest();
                unlearn::UnlearnResult res = unlearn::unlearn_chunk(
                    theta, model::DataView(forget), retained, params, cfg.unlearn, k, total);
                theta = std::move(res.theta);
                window.push(std::move(chunk));
                train_incremental(theta, window.at(window.size() - 1), params,
                                  with_epochs(cfg.train, cfg.e_inc), total);
            }
        }

        train::CostLedger delta = total.delta_since(before);
        delta.wall_ns = now_ns() - t0;
        log.records.push_back({int64_t(k), ev.acc, ev.loss, delta,
                               std::numeric_limits<double>::quiet_NaN()});
    }
    log.final_theta = std::move(theta);
    return log;
}

RunLog run(const stream::Stream& s, const model::LossParams& params, const RunConfig& cfg) {
    return cfg.algo == Algo::sw ? run_sw(s, params, cfg) : run_uil(s, params, cfg);
}

PairResult run_pair_with_oracle(const stream::Stream& s, const model::LossParams& params,
                                RunConfig cfg) {
    cfg.algo = Algo::uil;
    cfg.oracle_tracking = true;
    cfg.validate(params);

    const size_t C = s.num_classes();
    model::Theta theta(s.feature_dim(), C);
    model::Theta oracle_theta = theta;
    Window window(cfg.L);
    train::CostLedger total;

    PairResult out;
    out.trace.mu = params.lambda;
    out.trace.eta = cfg.train.eta;
    out.trace.L = cfg.L;
    out.trace.e.push_back(0.0); // anchored at the end of warm-up
    out.trace.delta.push_back(0.0);
    if (cfg.eps_tracking) {
        out.trace.eps_unlearn_hat.push_back(0.0);
        out.trace.eps_forgetting_hat.push_back(0.0);
    }

    for (size_t k = 0; k < s.n_chunks(); ++k) {
        stream::Chunk chunk = s.chunk(k);
        Eval ev = evaluate(theta, chunk, params);
        Eval oev = evaluate(oracle_theta, chunk, params);
        train::CostLedger before = total;
        uint64_t t0 = now_ns();
        double param_dist = 0.0;
        double eps_u = 0.0;
        bool shifted = false;

        if (!window.full()) {
            train_incremental(theta, chunk, params, with_epochs(cfg.train, cfg.e_inc), total);
            window.push(std::move(chunk));
            oracle_theta = theta; // the oracle is the warm-up model itself
        } else {
            shifted = true;
            size_t shift_no = k - cfg.L + 1;
            if (cfg.anchor_period > 0 && shift_no % cfg.anchor_period == 0) {
                window.push(std::move(chunk));
                std::vector<model::DataView> views = window.views();
                theta =
                    train_scratch(views, C, params, with_epochs(cfg.train, cfg.e_ret), total);
            } else {
                const stream::Chunk& forget = window.oldest();
                std::vector<model::DataView> retained = window.views_without_oldest();
                unlearn::UnlearnResult res = unlearn::unlearn_chunk(
                    theta, model::DataView(forget), retained, params, cfg.unlearn, k, total);
                if (cfg.eps_tracking) {
                    // distance from the post-unlearn parameters to the
                    // retained-window optimum (oracle work, not charged)
                    fixtures::OracleBundle ret = fixtures::exact_optimum(
                        retained, params, 1e-8, 1000000, false, &res.theta, C);
                    eps_u = param_distance(res.theta, ret.theta_star);
                }
                theta = std::move(res.theta);
                window.push(std::move(chunk));
                train_incremental(theta, window.at(window.size() - 1), params,
                                  with_epochs(cfg.train, cfg.e_inc), total);
            }
        }

        train::CostLedger delta = total.delta_since(before);
        delta.wall_ns = now_ns() - t0;

        if (shifted) {
            // perfectly retrained reference for the new window
            std::vector<model::DataView> views = window.views();
            fixtures::OracleBundle bundle =
                fixtures::exact_optimum(views, params, 1e-8, 1000000, false, &oracle_theta, C);
            oracle_theta = std::move(bundle.theta_star);

            double e_t = param_distance(theta, oracle_theta);
            double d_t = std::max(0.0, e_t - out.trace.e.back());
            out.trace.e.push_back(e_t);
            out.trace.delta.push_back(d_t);
            if (cfg.eps_tracking) {
                out.trace.eps_unlearn_hat.push_back(eps_u);
                out.trace.eps_forgetting_hat.push_back(std::max(0.0, d_t - eps_u));
            }
            out.trace.beta = std::max(
                out.trace.beta, model::convexity_constants(views, params).beta);
            param_dist = e_t;
        }

        out.uil.records.push_back({int64_t(k), ev.acc, ev.loss, delta, param_dist});
        out.oracle.records.push_back({int64_t(k), oev.acc, oev.loss, train::CostLedger{},
                                      std::numeric_limits<double>::quiet_NaN()});
    }

    out.uil.final_theta = std::move(theta);
    out.oracle.final_theta = std::move(oracle_theta);
    return out;
}

} // namespace drift::sched
