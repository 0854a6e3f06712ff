#include "driftlab/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "driftlab/errors.hpp"

namespace drift::metrics {

void RecoveryConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ConfigError("recovery.epsilon must lie in (0, 1)");
    if (baseline_window < 1) throw ConfigError("recovery.baseline_window must be at least 1");
    if (smoothing < 1) throw ConfigError("recovery.smoothing must be at least 1");
}

std::vector<double> accuracy_series(const std::vector<sched::ChunkRecord>& log) {
    if (log.empty()) throw RuntimeFailure("metrics: empty run log");
    std::vector<double> acc;
    acc.reserve(log.size());
    for (const sched::ChunkRecord& r : log) acc.push_back(r.accuracy);
    return acc;
}

double mean_accuracy(const std::vector<sched::ChunkRecord>& log) {
    if (log.empty()) throw RuntimeFailure("metrics: empty run log");
    double sum = 0.0;
    for (const sched::ChunkRecord& r : log) sum += r.accuracy;
    return sum / double(log.size());
}

namespace {

void check_series(const std::vector<double>& acc, size_t drift_chunk,
                  const RecoveryConfig& cfg) {
    cfg.validate();
    if (drift_chunk >= acc.size())
        throw ConfigError("recovery: drift_chunk lies beyond the series");
    if (drift_chunk < cfg.baseline_window)
        throw ConfigError("recovery: fewer than baseline_window chunks before the drift");
}

double baseline_mean(const std::vector<double>& acc, size_t drift_chunk,
                     const RecoveryConfig& cfg) {
    double sum = 0.0;
    for (size_t t = drift_chunk - cfg.baseline_window; t < drift_chunk; ++t) sum += acc[t];
    return sum / double(cfg.baseline_window);
}

// trailing moving average over the last `width` points ending at t
double smoothed_at(const std::vector<double>& acc, size_t t, size_t width) {
    size_t lo = (t + 1 >= width) ? t + 1 - width : 0;
    double sum = 0.0;
    for (size_t i = lo; i <= t; ++i) sum += acc[i];
    return sum / double(t - lo + 1);
}

} // namespace

int64_t recovery_time(const std::vector<double>& acc, size_t drift_chunk,
                      const RecoveryConfig& cfg) {
    check_series(acc, drift_chunk, cfg);
    double threshold = (1.0 - cfg.epsilon) * baseline_mean(acc, drift_chunk, cfg);
    for (size_t t = drift_chunk; t < acc.size(); ++t)
        if (smoothed_at(acc, t, cfg.smoothing) >= threshold) return int64_t(t - drift_chunk);
    return kNotRecovered;
}

Deterioration deterioration(const std::vector<double>& acc, size_t drift_chunk,
                            const RecoveryConfig& cfg) {
    check_series(acc, drift_chunk, cfg);
    double baseline = baseline_mean(acc, drift_chunk, cfg);

    Deterioration det;
    double min_acc = acc[drift_chunk];
    for (size_t t = drift_chunk; t < acc.size(); ++t) min_acc = std::min(min_acc, acc[t]);
    det.max_pct = std::max(0.0, 100.0 * (baseline - min_acc) / baseline);

    // average the raw (unsmoothed) drops from drift up to the recovery
    // point, or the series end when recovery never happens
    int64_t rec = recovery_time(acc, drift_chunk, cfg);
    size_t span_end = rec == kNotRecovered ? acc.size() - 1 : drift_chunk + size_t(rec);
    double sum = 0.0;
    for (size_t t = drift_chunk; t <= span_end; ++t)
        sum += std::max(0.0, (baseline - acc[t]) / baseline);
    det.avg_pct = 100.0 * sum / double(span_end - drift_chunk + 1);
    return det;
}

ResourceSummary resource_summary(const std::vector<sched::ChunkRecord>& log) {
    if (log.empty()) throw RuntimeFailure("metrics: empty run log");
    ResourceSummary out;
    double ns = 0.0, bytes = 0.0;
    for (const sched::ChunkRecord& r : log) {
        ns += double(r.cost.wall_ns);
        bytes += double(r.cost.bytes_touched);
        out.grad_evals += r.cost.sample_grad_evals;
        out.hvp_units += r.cost.hvp_evals;
    }
    out.s_per_chunk = ns / double(log.size()) / 1e9;
    out.mb_per_chunk = bytes / double(log.size()) / double(1 << 20);
    return out;
}

} // namespace drift::metrics
