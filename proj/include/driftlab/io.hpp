#pragma once

// Flat-file plumbing: the pinned CSV schemas for run logs and metrics
// summaries, a small strict CSV codec, and deterministic number formatting
// so identical inputs always produce identical bytes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftlab/metrics.hpp"
#include "driftlab/scheduler.hpp"

namespace drift::io {

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // column index by name; throws RuntimeFailure naming the column
    size_t column(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

// round-trip-exact formatting: shortest decimal that parses back to the
// same double; empty for NaN (the schema's "not applicable" marker)
std::string format_double(double v);

std::string to_string(const Csv& csv);
Csv parse_csv(const std::string& text); // strict: rectangular, no quoting
Csv read_csv_file(const std::string& path);
void write_csv_file(const std::string& path, const Csv& csv);

// throws RuntimeFailure naming the first missing column
void require_columns(const Csv& csv, const std::vector<std::string>& names);

extern const std::vector<std::string> kRunLogHeader;
extern const std::vector<std::string> kMetricsHeader;

// one run-log row per processed chunk
Csv run_log_csv(const std::string& run_id, sched::Algo algo, size_t L, uint64_t seed,
                const sched::RunLog& log);

// single metrics-summary row; drift-dependent cells are empty when the
// stream has no drift (or too little pre-drift history for a baseline)
std::vector<std::string> metrics_row(const std::string& run_id, sched::Algo algo, size_t L,
                                     uint64_t seed, const sched::RunLog& log,
                                     std::optional<size_t> drift_chunk,
                                     const metrics::RecoveryConfig& rc);

} // namespace drift::io
