// Command-line front end: configuration-driven runs, side-by-side
// comparisons, parameter sweeps, chart emission, and verification of the
// analytical bounds on instrumented runs.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure,
// 4 bound violation reported by verify-theory.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driftlab/chart.hpp"
#include "driftlab/config.hpp"
#include "driftlab/errors.hpp"
#include "driftlab/io.hpp"
#include "driftlab/runner.hpp"
#include "driftlab/theory.hpp"

namespace fs = std::filesystem;
using namespace drift;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitBound = 4;

// CLI flag beats the environment, which beats the config file
std::string resolve_output_dir(const config::ExperimentConfig& cfg,
                               const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("DRIFTLAB_OUTPUT_DIR"); env && *env) return env;
    return cfg.output_dir;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw RuntimeFailure("cannot create output directory " + dir + ": " + ec.message());
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure("cannot write file: " + path);
    out << text;
    if (!out) throw RuntimeFailure("write failed: " + path);
}

std::optional<size_t> drift_chunk_of(const config::ExperimentConfig& cfg) {
    if (!cfg.stream.has_drift()) return std::nullopt;
    return size_t(cfg.stream.drift.drift_chunk);
}

// ===== Shared artifact emission =====

io::Csv merged_run_log(const std::vector<runner::RunOutcome>& outcomes) {
    io::Csv all;
    all.header = io::kRunLogHeader;
    for (const runner::RunOutcome& o : outcomes) {
        io::Csv one = io::run_log_csv(o.cfg.run_id, o.cfg.algo, o.cfg.L, o.cfg.train.seed,
                                      o.log);
        for (auto& row : one.rows) all.rows.push_back(std::move(row));
    }
    return all;
}

io::Csv merged_metrics(const config::ExperimentConfig& cfg,
                       const std::vector<runner::RunOutcome>& outcomes) {
    io::Csv csv;
    csv.header = io::kMetricsHeader;
    for (const runner::RunOutcome& o : outcomes)
        csv.rows.push_back(io::metrics_row(o.cfg.run_id, o.cfg.algo, o.cfg.L,
                                           o.cfg.train.seed, o.log, drift_chunk_of(cfg),
                                           cfg.recovery));
    return csv;
}

struct TheoryFindings {
    std::string report;   // key-value text, one section per tracked run
    bool any_tracked = false;
    bool all_bounds_hold = true;
};

TheoryFindings theory_findings(const config::ExperimentConfig& cfg,
                               const std::vector<runner::RunOutcome>& outcomes) {
    TheoryFindings out;
    std::ostringstream rep;

    for (const runner::RunOutcome& o : outcomes) {
        if (!o.pair) continue;
        out.any_tracked = true;
        const theory::TheoryTrace& trace = o.pair->trace;
        size_t shifts = trace.e.size() - 1;

        rep << "run: " << o.cfg.run_id << "\n";
        rep << "shifts: " << shifts << "\n";
        rep << "mu: " << io::format_double(trace.mu) << "\n";
        rep << "beta: " << io::format_double(trace.beta) << "\n";
        rep << "eta: " << io::format_double(trace.eta) << "\n";

        if (shifts >= o.cfg.L) {
            theory::AccumulationReport acc = theory::accumulation_check(trace);
            rep << "e_L: " << io::format_double(acc.e_L) << "\n";
            rep << "delta_max: " << io::format_double(acc.delta_max) << "\n";
            rep << "accumulation_bound: " << io::format_double(acc.bound) << "\n";
            rep << "accumulation_slack: " << io::format_double(acc.slack) << "\n";
            rep << "accumulation_holds: " << (acc.holds ? "yes" : "no") << "\n";
            out.all_bounds_hold = out.all_bounds_hold && acc.holds;

            // held-out loss gap against the lockstep reference, evaluated on
            // fresh post-drift data
            stream::Stream s = stream::make_stream(cfg.stream);
            stream::Chunk eval = s.eval_set(5000, stream::Concept::new_concept);
            model::DataView ev(eval);
            theory::Theorem1Report t1 = theory::theorem1_check(
                o.log.final_theta, o.pair->oracle.final_theta, trace.beta, o.cfg.L,
                acc.delta_max, model::DataSpan(&ev, 1), cfg.params);
            rep << "loss_gap: " << io::format_double(t1.gap) << "\n";
            rep << "loss_gap_bound: " << io::format_double(t1.bound) << "\n";
            rep << "loss_gap_stat_slack: " << io::format_double(t1.stat_slack) << "\n";
            rep << "loss_gap_holds: " << (t1.holds ? "yes" : "no") << "\n";
            out.all_bounds_hold = out.all_bounds_hold && t1.holds;
        } else {
            rep << "accumulation_holds: skipped (needs " << o.cfg.L << " shifts, have "
                << shifts << ")\n";
        }

        if (trace.has_eps() && shifts >= 1) {
            theory::StabilityReport st = theory::stability_check(trace);
            rep << "stability_stable_fraction: " << io::format_double(st.stable_fraction)
                << "\n";

            double mean_eu = 0.0, mean_ef = 0.0;
            for (size_t t = 1; t <= shifts; ++t) {
                mean_eu += trace.eps_unlearn_hat[t];
                mean_ef += trace.eps_forgetting_hat[t];
            }
            mean_eu /= double(shifts);
            mean_ef /= double(shifts);
            double em = trace.eta * trace.mu;
            if (em > 0.0 && em < 1.0) {
                double e_inf = theory::e_infinity(trace.eta, trace.mu, mean_eu, mean_ef);
                double e_max = 0.0;
                for (double e : trace.e) e_max = std::max(e_max, e);
                rep << "e_infinity_hat: " << io::format_double(e_inf) << "\n";
                rep << "e_max: " << io::format_double(e_max) << "\n";
            }
        }
        rep << "\n";
    }

    if (!out.any_tracked) rep << "no oracle-tracked runs\n";
    out.report = rep.str();
    return out;
}

void emit_charts(const std::string& dir, const config::ExperimentConfig& cfg,
                 const std::vector<runner::RunOutcome>& outcomes) {
    chart::ChartSpec acc;
    acc.title = "Prequential accuracy";
    acc.x_label = "chunk";
    acc.y_label = "accuracy";
    if (auto dc = drift_chunk_of(cfg)) acc.marker_x = double(*dc);
    for (const runner::RunOutcome& o : outcomes) {
        chart::Series s;
        s.label = o.cfg.run_id;
        for (const sched::ChunkRecord& r : o.log.records) {
            s.x.push_back(double(r.chunk));
            s.y.push_back(r.accuracy);
        }
        acc.series.push_back(std::move(s));
    }
    write_text_file(dir + "/accuracy.svg", chart::render_line_chart(acc));

    chart::ChartSpec err;
    err.title = "Parameter error vs. retrained reference";
    err.x_label = "window shift";
    err.y_label = "|theta - theta*|";
    for (const runner::RunOutcome& o : outcomes) {
        if (!o.pair) continue;
        chart::Series s;
        s.label = o.cfg.run_id;
        for (size_t t = 0; t < o.pair->trace.e.size(); ++t) {
            s.x.push_back(double(t));
            s.y.push_back(o.pair->trace.e[t]);
        }
        err.series.push_back(std::move(s));
    }
    if (!err.series.empty())
        write_text_file(dir + "/error_trace.svg", chart::render_line_chart(err));
}

// ===== Subcommand bodies =====

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_flag) {
    config::ExperimentConfig cfg = config::load_config(config_path, overrides);
    std::string dir = resolve_output_dir(cfg, out_flag);
    ensure_dir(dir);

    std::vector<runner::RunOutcome> outcomes = runner::execute_runs(cfg);

    io::write_csv_file(dir + "/run_log.csv", merged_run_log(outcomes));
    io::write_csv_file(dir + "/metrics.csv", merged_metrics(cfg, outcomes));
    write_text_file(dir + "/theory.txt", theory_findings(cfg, outcomes).report);
    if (cfg.chart) emit_charts(dir, cfg, outcomes);

    std::cout << "wrote " << dir << "/run_log.csv, metrics.csv, theory.txt";
    if (cfg.chart) std::cout << ", charts";
    std::cout << "\n";
    return kExitOk;
}

int cmd_compare(const std::string& config_path, const std::vector<std::string>& overrides,
                const std::string& out_flag) {
    config::ExperimentConfig cfg = config::load_config(config_path, overrides);
    bool has_sw = false, has_uil = false;
    for (const sched::RunConfig& r : cfg.runs) {
        has_sw = has_sw || r.algo == sched::Algo::sw;
        has_uil = has_uil || r.algo == sched::Algo::uil;
    }
    if (!has_sw || !has_uil)
        throw ConfigError("compare requires both algorithms: add at least one sw run and one "
                          "uil run");

    std::string dir = resolve_output_dir(cfg, out_flag);
    ensure_dir(dir);
    std::vector<runner::RunOutcome> outcomes = runner::execute_runs(cfg);

    // pinned per-run metrics (the machine-readable artifact) ...
    io::Csv metrics = merged_metrics(cfg, outcomes);
    io::write_csv_file(dir + "/metrics.csv", metrics);
    io::write_csv_file(dir + "/run_log.csv", merged_run_log(outcomes));

    // ... and the transposed comparison: one column per run, one row per
    // metric, mirroring the summary-table layout
    const std::vector<std::string> rows = {"s_per_chunk", "MB_per_chunk", "recovery",
                                           "det_max",     "det_avg",      "grad_evals"};
    const std::vector<std::string> source_cols = {"s_per_chunk", "mb_per_chunk", "recovery",
                                                  "det_max",     "det_avg",      "grad_evals"};

    io::Csv cmp;
    cmp.header.push_back("metric");
    for (const runner::RunOutcome& o : outcomes) cmp.header.push_back(o.cfg.run_id);
    for (size_t m = 0; m < rows.size(); ++m) {
        std::vector<std::string> row = {rows[m]};
        size_t col = metrics.column(source_cols[m]);
        for (const auto& mrow : metrics.rows) row.push_back(mrow[col]);
        cmp.rows.push_back(std::move(row));
    }
    io::write_csv_file(dir + "/compare.csv", cmp);

    // aligned text table on stdout
    std::vector<size_t> widths(cmp.header.size());
    for (size_t c = 0; c < cmp.header.size(); ++c) {
        widths[c] = cmp.header[c].size();
        for (const auto& row : cmp.rows) widths[c] = std::max(widths[c], row[c].size());
    }
    auto print_row = [&](const std::vector<std::string>& row) {
        for (size_t c = 0; c < row.size(); ++c) {
            std::cout << (c ? "  " : "");
            std::cout << row[c] << std::string(widths[c] - row[c].size(), ' ');
        }
        std::cout << "\n";
    };
    print_row(cmp.header);
    for (const auto& row : cmp.rows) print_row(row);
    std::cout << "\nwrote " << dir << "/compare.csv, metrics.csv, run_log.csv\n";
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& param, const std::vector<std::string>& values,
              const std::string& out_flag) {
    if (values.empty()) throw ConfigError("sweep requires at least one --values entry");

    // resolve the output root from the base config before any override
    config::ExperimentConfig base = config::load_config(config_path, overrides);
    std::string root = resolve_output_dir(base, out_flag);
    ensure_dir(root);

    std::string short_name = param.substr(param.find_last_of('.') + 1);
    io::Csv merged;
    merged.header = io::kMetricsHeader;

    for (const std::string& value : values) {
        std::vector<std::string> ov = overrides;
        ov.push_back(param + "=" + value);
        config::ExperimentConfig cfg = config::load_config(config_path, ov);

        std::string tag = short_name + "=" + value;
        std::string dir = root + "/" + tag;
        ensure_dir(dir);

        std::vector<runner::RunOutcome> outcomes = runner::execute_runs(cfg);
        io::write_csv_file(dir + "/run_log.csv", merged_run_log(outcomes));
        io::Csv metrics = merged_metrics(cfg, outcomes);
        io::write_csv_file(dir + "/metrics.csv", metrics);

        for (auto row : metrics.rows) {
            row[0] += "@" + tag; // keep merged run ids unique per sweep point
            merged.rows.push_back(std::move(row));
        }
    }

    io::write_csv_file(root + "/sweep_metrics.csv", merged);
    std::cout << "wrote " << root << "/sweep_metrics.csv (" << values.size()
              << " sweep points)\n";
    return kExitOk;
}

int cmd_chart(const std::string& log_path, const std::string& metrics_path,
              const std::string& out_dir, double drift_chunk) {
    ensure_dir(out_dir);
    bool wrote = false;

    if (!log_path.empty()) {
        io::Csv log = io::read_csv_file(log_path);
        io::require_columns(log, {"run_id", "chunk", "accuracy", "param_dist"});
        size_t c_id = log.column("run_id"), c_chunk = log.column("chunk");
        size_t c_acc = log.column("accuracy"), c_dist = log.column("param_dist");

        // group rows by run id, preserving first-appearance order
        std::vector<std::string> order;
        std::map<std::string, chart::Series> acc_series, err_series;
        for (const auto& row : log.rows) {
            const std::string& id = row[c_id];
            if (!acc_series.count(id)) order.push_back(id);
            chart::Series& s = acc_series[id];
            s.label = id;
            s.x.push_back(std::strtod(row[c_chunk].c_str(), nullptr));
            s.y.push_back(std::strtod(row[c_acc].c_str(), nullptr));
            if (!row[c_dist].empty()) {
                chart::Series& e = err_series[id];
                e.label = id;
                e.x.push_back(std::strtod(row[c_chunk].c_str(), nullptr));
                e.y.push_back(std::strtod(row[c_dist].c_str(), nullptr));
            }
        }

        chart::ChartSpec acc;
        acc.title = "Prequential accuracy";
        acc.x_label = "chunk";
        acc.y_label = "accuracy";
        if (drift_chunk >= 0) acc.marker_x = drift_chunk;
        for (const std::string& id : order) acc.series.push_back(acc_series[id]);
        write_text_file(out_dir + "/accuracy.svg", chart::render_line_chart(acc));
        wrote = true;

        if (!err_series.empty()) {
            chart::ChartSpec err;
            err.title = "Parameter error vs. retrained reference";
            err.x_label = "chunk";
            err.y_label = "|theta - theta*|";
            for (const std::string& id : order)
                if (err_series.count(id)) err.series.push_back(err_series[id]);
            write_text_file(out_dir + "/error_trace.svg", chart::render_line_chart(err));
        }
    }

    if (!metrics_path.empty()) {
        io::Csv metrics = io::read_csv_file(metrics_path);
        io::require_columns(metrics, {"algo", "L", "grad_evals"});
        size_t c_algo = metrics.column("algo"), c_l = metrics.column("L");
        size_t c_grad = metrics.column("grad_evals");

        std::map<std::string, std::multimap<double, double>> by_algo;
        for (const auto& row : metrics.rows)
            by_algo[row[c_algo]].emplace(std::strtod(row[c_l].c_str(), nullptr),
                                         std::strtod(row[c_grad].c_str(), nullptr));

        chart::ChartSpec cost;
        cost.title = "Gradient evaluations vs. window length";
        cost.x_label = "L";
        cost.y_label = "grad_evals";
        for (const auto& [algo, points] : by_algo) {
            chart::Series s;
            s.label = algo;
            for (const auto& [l, g] : points) {
                s.x.push_back(l);
                s.y.push_back(g);
            }
            cost.series.push_back(std::move(s));
        }
        write_text_file(out_dir + "/cost_vs_L.svg", chart::render_line_chart(cost));
        wrote = true;
    }

    if (!wrote) throw ConfigError("chart requires --log and/or --metrics input");
    std::cout << "wrote charts to " << out_dir << "\n";
    return kExitOk;
}

int cmd_verify_theory(const std::string& config_path,
                      const std::vector<std::string>& overrides,
                      const std::string& out_flag) {
    config::ExperimentConfig cfg = config::load_config(config_path, overrides);
    bool any = false;
    for (const sched::RunConfig& r : cfg.runs) any = any || r.oracle_tracking;
    if (!any)
        throw ConfigError("verify-theory requires at least one run with oracle_tracking");

    std::string dir = resolve_output_dir(cfg, out_flag);
    ensure_dir(dir);

    std::vector<runner::RunOutcome> outcomes = runner::execute_runs(cfg);
    TheoryFindings findings = theory_findings(cfg, outcomes);
    write_text_file(dir + "/theory.txt", findings.report);
    std::cout << findings.report;
    return findings.all_bounds_hold ? kExitOk : kExitBound;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"concept-drift window learning: sliding-window retraining vs. "
                 "unlearning-based incremental updates"};
    app.require_subcommand(1);
    app.add_flag_callback(
        "--print-schema",
        [] {
            std::cout << config::config_schema();
            throw CLI::Success{};
        },
        "print the config schema and exit");

    std::string config_path, out_flag;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* sub, bool needs_config = true) {
        if (needs_config)
            sub->add_option("-c,--config", config_path, "experiment config (json)")
                ->required();
        sub->add_option("--override", overrides,
                        "dotted-path config override, e.g. runs[0].L=8");
        sub->add_option("-o,--output-dir", out_flag,
                        "output directory (beats DRIFTLAB_OUTPUT_DIR and the config)");
    };

    CLI::App* run = app.add_subcommand("run", "execute all configured runs");
    add_common(run);

    CLI::App* cmp = app.add_subcommand("compare", "side-by-side sw vs uil metrics table");
    add_common(cmp);

    std::string sweep_param;
    std::vector<std::string> sweep_values;
    CLI::App* sweep = app.add_subcommand("sweep", "repeat the experiment over a value grid");
    add_common(sweep);
    sweep->add_option("--param", sweep_param, "dotted config path to vary, e.g. runs[0].L")
        ->required();
    sweep->add_option("--values", sweep_values, "values for the swept parameter")
        ->required()
        ->delimiter(',');

    std::string chart_log, chart_metrics, chart_out = "out";
    double chart_drift = -1.0;
    CLI::App* chart_cmd = app.add_subcommand("chart", "render SVG charts from CSV artifacts");
    chart_cmd->add_option("--log", chart_log, "run-log csv (accuracy and error charts)");
    chart_cmd->add_option("--metrics", chart_metrics, "metrics csv (cost-vs-L chart)");
    chart_cmd->add_option("-o,--output-dir", chart_out, "output directory");
    chart_cmd->add_option("--drift-chunk", chart_drift,
                          "draw the drift marker at this chunk index");

    CLI::App* verify = app.add_subcommand("verify-theory",
                                          "check the analytical bounds on tracked runs");
    add_common(verify);

    CLI::App* schema = app.add_subcommand("print-schema", "print the config schema");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run)) return cmd_run(config_path, overrides, out_flag);
        if (app.got_subcommand(cmp)) return cmd_compare(config_path, overrides, out_flag);
        if (app.got_subcommand(sweep))
            return cmd_sweep(config_path, overrides, sweep_param, sweep_values, out_flag);
        if (app.got_subcommand(chart_cmd))
            return cmd_chart(chart_log, chart_metrics, chart_out, chart_drift);
        if (app.got_subcommand(verify))
            return cmd_verify_theory(config_path, overrides, out_flag);
        if (app.got_subcommand(schema)) {
            std::cout << config::config_schema();
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const RuntimeFailure& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
