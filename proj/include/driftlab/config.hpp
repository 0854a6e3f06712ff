#pragma once

// Experiment configuration: a single JSON document describing the stream,
// the model, and a list of runs. Parsing is strict — every diagnostic names
// the offending field — and dotted-path overrides allow one-off tweaks from
// the command line without editing the file.

#include <string>
#include <vector>

#include "driftlab/datastream.hpp"
#include "driftlab/metrics.hpp"
#include "driftlab/model.hpp"
#include "driftlab/scheduler.hpp"

namespace drift::config {

struct ExperimentConfig {
    stream::StreamSpec stream;
    model::LossParams params;
    std::vector<sched::RunConfig> runs;
    metrics::RecoveryConfig recovery;
    std::string output_dir = "out";
    bool chart = false;
    size_t workers = 1;

    void validate() const; // throws ConfigError naming the field
};

// parse + validate a JSON document (throws ConfigError with field names,
// RuntimeFailure on unreadable files)
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

// apply "runs[0].L=8" style assignments to the raw JSON text; the path must
// name an existing field (typo protection)
std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides);

// human-readable schema for --print-schema
std::string config_schema();

} // namespace drift::config
