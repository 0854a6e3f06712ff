#pragma once

// Test-Then-Train execution of both algorithms over a chunk stream. The
// sliding-window baseline resets and retrains on every shift once the
// window is full; the unlearning variant removes the evicted chunk with one
// Newton step and continues incrementally. Warm-up is shared verbatim.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "driftlab/datastream.hpp"
#include "driftlab/fixtures.hpp"
#include "driftlab/model.hpp"
#include "driftlab/theory.hpp"
#include "driftlab/train.hpp"
#include "driftlab/unlearn.hpp"

namespace drift::sched {

enum class Algo { sw, uil };

Algo algo_from_name(std::string_view name); // "sw" | "uil"
std::string algo_name(Algo a);

struct RunConfig {
    Algo algo = Algo::sw;
    size_t L = 5;
    train::TrainConfig train; // eta/minibatch/seed template; epochs set per phase
    size_t e_ret = 10;        // epochs for scratch retraining
    size_t e_inc = 2;         // epochs for incremental updates (and warm-up)
    unlearn::UnlearnConfig unlearn;
    size_t anchor_period = 0;    // uil: scratch retrain every n-th shift (0 = never)
    bool oracle_tracking = false; // track |theta_t - theta*_t| per shift
    bool eps_tracking = false;    // also estimate the unlearning error per shift
    std::string run_id;

    void validate(const model::LossParams& params) const;
};

struct ChunkRecord {
    int64_t chunk = 0;
    double accuracy = 0.0; // on the incoming chunk, before training on it
    double loss = 0.0;     // mean cross-entropy + ridge, same model
    train::CostLedger cost; // this chunk's update only
    double param_dist = std::numeric_limits<double>::quiet_NaN();
};

struct RunLog {
    std::vector<ChunkRecord> records;
    model::Theta final_theta;
};

// ring buffer of the L most recent chunks, arrival order preserved
class Window {
public:
    explicit Window(size_t L);
    size_t size() const { return count_; }
    size_t capacity() const { return buf_.size(); }
    bool full() const { return count_ == buf_.size(); }
    void push(stream::Chunk c); // evicts the oldest once full
    const stream::Chunk& oldest() const;
    const stream::Chunk& at(size_t i) const; // 0 = oldest
    std::vector<model::DataView> views() const;
    std::vector<model::DataView> views_without_oldest() const;

private:
    std::vector<stream::Chunk> buf_;
    size_t head_ = 0;  // slot of the oldest chunk
    size_t count_ = 0;
};

RunLog run_sw(const stream::Stream& s, const model::LossParams& params, const RunConfig& cfg);
RunLog run_uil(const stream::Stream& s, const model::LossParams& params, const RunConfig& cfg);
RunLog run(const stream::Stream& s, const model::LossParams& params, const RunConfig& cfg);

struct PairResult {
    RunLog uil;
    RunLog oracle; // tolerance-retrained reference trajectory (costs untracked)
    theory::TheoryTrace trace;
};

// Runs the unlearning algorithm with a perfectly retrained reference in
// lockstep: e[0] anchors to 0 at the end of warm-up, then every shift logs
// |theta_t - theta*_t| (and, when eps_tracking is on, the distance from the
// post-unlearn parameters to the retained-window optimum).
PairResult run_pair_with_oracle(const stream::Stream& s, const model::LossParams& params,
                                RunConfig cfg);

} // namespace drift::sched
