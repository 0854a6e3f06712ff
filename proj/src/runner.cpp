#include "driftlab/runner.hpp"

#include <atomic>
#include <exception>
#include <thread>

namespace drift::runner {

std::vector<RunOutcome> execute_runs(const config::ExperimentConfig& cfg) {
    cfg.validate();
    const stream::Stream s = stream::make_stream(cfg.stream);
    const size_t n = cfg.runs.size();

    std::vector<RunOutcome> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                RunOutcome& o = out[i];
                o.cfg = cfg.runs[i];
                if (o.cfg.oracle_tracking) {
                    o.pair = sched::run_pair_with_oracle(s, cfg.params, o.cfg);
                    o.log = o.pair->uil;
                } else {
                    o.log = sched::run(s, cfg.params, o.cfg);
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    size_t pool = std::min(cfg.workers, n);
    if (pool <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (size_t t = 0; t < pool; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    for (size_t i = 0; i < n; ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);
    return out;
}

} // namespace drift::runner
