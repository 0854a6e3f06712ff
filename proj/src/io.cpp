#include "driftlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "driftlab/errors.hpp"

namespace drift::io {

const std::vector<std::string> kRunLogHeader = {
    "run_id", "algo",       "L",          "seed",  "chunk", "accuracy",
    "loss",   "wall_ns",    "grad_evals", "hvp_units", "bytes", "param_dist"};

const std::vector<std::string> kMetricsHeader = {
    "run_id",  "algo",    "L",           "seed",         "mean_acc",   "recovery",
    "det_max", "det_avg", "s_per_chunk", "mb_per_chunk", "grad_evals", "hvp_units"};

size_t Csv::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw RuntimeFailure("csv: missing column \"" + name + "\"");
}

bool Csv::has_column(const std::string& name) const {
    for (const std::string& h : header)
        if (h == name) return true;
    return false;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    // shortest representation that round-trips; probe increasing precision
    char buf[40];
    for (int prec = 6; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

std::string to_string(const Csv& csv) {
    std::ostringstream out;
    for (size_t i = 0; i < csv.header.size(); ++i)
        out << (i ? "," : "") << csv.header[i];
    out << "\n";
    for (const auto& row : csv.rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    for (;;) {
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

} // namespace

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw RuntimeFailure("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    csv.header = split_line(line);

    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> row = split_line(line);
        if (row.size() != csv.header.size())
            throw RuntimeFailure("csv: line " + std::to_string(line_no) + " has " +
                                 std::to_string(row.size()) + " fields, header has " +
                                 std::to_string(csv.header.size()));
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

Csv read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeFailure("cannot open csv file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

void write_csv_file(const std::string& path, const Csv& csv) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure("cannot write csv file: " + path);
    out << to_string(csv);
    if (!out) throw RuntimeFailure("write failed: " + path);
}

void require_columns(const Csv& csv, const std::vector<std::string>& names) {
    for (const std::string& n : names)
        if (!csv.has_column(n)) throw RuntimeFailure("csv: missing column \"" + n + "\"");
}

Csv run_log_csv(const std::string& run_id, sched::Algo algo, size_t L, uint64_t seed,
                const sched::RunLog& log) {
    Csv csv;
    csv.header = kRunLogHeader;
    for (const sched::ChunkRecord& r : log.records) {
        csv.rows.push_back({run_id, sched::algo_name(algo), std::to_string(L),
                            std::to_string(seed), std::to_string(r.chunk),
                            format_double(r.accuracy), format_double(r.loss),
                            std::to_string(r.cost.wall_ns),
                            std::to_string(r.cost.sample_grad_evals),
                            std::to_string(r.cost.hvp_evals),
                            std::to_string(r.cost.bytes_touched),
                            format_double(r.param_dist)});
    }
    return csv;
}

std::vector<std::string> metrics_row(const std::string& run_id, sched::Algo algo, size_t L,
                                     uint64_t seed, const sched::RunLog& log,
                                     std::optional<size_t> drift_chunk,
                                     const metrics::RecoveryConfig& rc) {
    metrics::ResourceSummary res = metrics::resource_summary(log.records);

    std::string recovery, det_max, det_avg;
    if (drift_chunk && *drift_chunk >= rc.baseline_window &&
        *drift_chunk < log.records.size()) {
        std::vector<double> acc = metrics::accuracy_series(log.records);
        recovery = std::to_string(metrics::recovery_time(acc, *drift_chunk, rc));
        metrics::Deterioration det = metrics::deterioration(acc, *drift_chunk, rc);
        det_max = format_double(det.max_pct);
        det_avg = format_double(det.avg_pct);
    }

    return {run_id,
            sched::algo_name(algo),
            std::to_string(L),
            std::to_string(seed),
            format_double(metrics::mean_accuracy(log.records)),
            recovery,
            det_max,
            det_avg,
            format_double(res.s_per_chunk),
            format_double(res.mb_per_chunk),
            std::to_string(res.grad_evals),
            std::to_string(res.hvp_units)};
}

} // namespace drift::io
