#pragma once

// Evaluation metrics over run logs: prequential accuracy, drift recovery
// time, deterioration depth, and per-chunk resource use. All pure
// post-processing.

#include <cstdint>
#include <vector>

#include "driftlab/scheduler.hpp"

namespace drift::metrics {

struct RecoveryConfig {
    size_t baseline_window = 5; // pre-drift chunks averaged into the reference
    double epsilon = 0.05;      // recovered when smoothed acc >= (1-epsilon)*baseline
    size_t smoothing = 3;       // trailing moving-average width

    void validate() const;
};

inline constexpr int64_t kNotRecovered = -1;

std::vector<double> accuracy_series(const std::vector<sched::ChunkRecord>& log);
double mean_accuracy(const std::vector<sched::ChunkRecord>& log);

// smallest t >= drift_chunk whose trailing smoothed accuracy clears
// (1-epsilon)*baseline, as an offset t - drift_chunk; kNotRecovered if the
// series never gets there
int64_t recovery_time(const std::vector<double>& acc, size_t drift_chunk,
                      const RecoveryConfig& cfg);

struct Deterioration {
    double max_pct = 0.0; // worst post-drift drop, percent of baseline
    double avg_pct = 0.0; // mean drop over the drift..recovery span
};
Deterioration deterioration(const std::vector<double>& acc, size_t drift_chunk,
                            const RecoveryConfig& cfg);

struct ResourceSummary {
    double s_per_chunk = 0.0;
    double mb_per_chunk = 0.0;
    uint64_t grad_evals = 0;
    uint64_t hvp_units = 0;
};
ResourceSummary resource_summary(const std::vector<sched::ChunkRecord>& log);

} // namespace drift::metrics
