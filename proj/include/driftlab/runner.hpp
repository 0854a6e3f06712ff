#pragma once

// Executes every run of an experiment, dispatching to a bounded pool of
// worker threads. Results come back in config order regardless of which
// worker finished first, and a failure in any run surfaces after all
// workers have drained.

#include <optional>
#include <vector>

#include "driftlab/config.hpp"
#include "driftlab/scheduler.hpp"

namespace drift::runner {

struct RunOutcome {
    sched::RunConfig cfg;
    sched::RunLog log;
    // filled for oracle-tracked runs: the lockstep reference and the
    // instrumented error trace
    std::optional<sched::PairResult> pair;
};

std::vector<RunOutcome> execute_runs(const config::ExperimentConfig& cfg);

} // namespace drift::runner
