#include "driftlab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "driftlab/errors.hpp"
#include "driftlab/unlearn.hpp"

namespace drift::config {

using nlohmann::json;

namespace {

// ===== Typed field extraction with path-qualified diagnostics =====

std::string joined(const std::string& ctx, const std::string& key) {
    return ctx.empty() ? key : ctx + "." + key;
}

const json* find(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

void expect_object(const json& j, const std::string& ctx) {
    if (!j.is_object())
        throw ConfigError("config field " + (ctx.empty() ? "(root)" : ctx) +
                          " must be an object");
}

double take_number(const json& j, const std::string& ctx, const std::string& key,
                   double dflt) {
    const json* v = find(j, key);
    if (!v) return dflt;
    if (!v->is_number()) throw ConfigError("config field " + joined(ctx, key) +
                                           " must be a number");
    return v->get<double>();
}

uint64_t take_uint(const json& j, const std::string& ctx, const std::string& key,
                   uint64_t dflt) {
    const json* v = find(j, key);
    if (!v) return dflt;
    if (!v->is_number_integer() || v->get<int64_t>() < 0)
        throw ConfigError("config field " + joined(ctx, key) +
                          " must be a non-negative integer");
    return v->get<uint64_t>();
}

int64_t take_int(const json& j, const std::string& ctx, const std::string& key, int64_t dflt) {
    const json* v = find(j, key);
    if (!v) return dflt;
    if (!v->is_number_integer())
        throw ConfigError("config field " + joined(ctx, key) + " must be an integer");
    return v->get<int64_t>();
}

bool take_bool(const json& j, const std::string& ctx, const std::string& key, bool dflt) {
    const json* v = find(j, key);
    if (!v) return dflt;
    if (!v->is_boolean())
        throw ConfigError("config field " + joined(ctx, key) + " must be a boolean");
    return v->get<bool>();
}

std::string take_string(const json& j, const std::string& ctx, const std::string& key,
                        const std::string& dflt) {
    const json* v = find(j, key);
    if (!v) return dflt;
    if (!v->is_string())
        throw ConfigError("config field " + joined(ctx, key) + " must be a string");
    return v->get<std::string>();
}

// ===== Section parsers =====

stream::StreamSpec parse_stream(const json& j) {
    expect_object(j, "stream");
    stream::StreamSpec spec;

    std::string source = take_string(j, "stream", "source", "synthetic");
    if (source == "synthetic") spec.source = stream::Source::synthetic_gaussians;
    else if (source == "idx") spec.source = stream::Source::idx_files;
    else throw ConfigError("config field stream.source must be synthetic or idx (got \"" +
                           source + "\")");

    spec.m = take_uint(j, "stream", "m", spec.m);
    spec.n_chunks = take_uint(j, "stream", "n_chunks", spec.n_chunks);
    spec.seed = take_uint(j, "stream", "seed", spec.seed);

    if (const json* s = find(j, "synth")) {
        expect_object(*s, "stream.synth");
        spec.synth.d = take_uint(*s, "stream.synth", "d", spec.synth.d);
        spec.synth.classes = take_uint(*s, "stream.synth", "classes", spec.synth.classes);
        spec.synth.cov_scale = take_number(*s, "stream.synth", "cov_scale",
                                           spec.synth.cov_scale);
        spec.synth.mean_lo = take_number(*s, "stream.synth", "mean_lo", spec.synth.mean_lo);
        spec.synth.mean_hi = take_number(*s, "stream.synth", "mean_hi", spec.synth.mean_hi);
    }
    if (const json* s = find(j, "idx")) {
        expect_object(*s, "stream.idx");
        spec.idx.images = take_string(*s, "stream.idx", "images", "");
        spec.idx.labels = take_string(*s, "stream.idx", "labels", "");
    }
    if (const json* dj = find(j, "drift")) {
        expect_object(*dj, "stream.drift");
        std::string kind = take_string(*dj, "stream.drift", "kind", "none");
        if (kind == "none") spec.drift.kind = stream::DriftKind::none;
        else if (kind == "sudden-noise") spec.drift.kind = stream::DriftKind::sudden_noise;
        else if (kind == "semantic-regroup")
            spec.drift.kind = stream::DriftKind::semantic_regroup;
        else if (kind == "mean-shift") spec.drift.kind = stream::DriftKind::mean_shift;
        else throw ConfigError("config field stream.drift.kind must be none, sudden-noise, "
                               "semantic-regroup, or mean-shift (got \"" + kind + "\")");

        spec.drift.drift_chunk = take_int(*dj, "stream.drift", "drift_chunk",
                                          spec.drift.drift_chunk);
        spec.drift.sigma = take_number(*dj, "stream.drift", "sigma", spec.drift.sigma);
        spec.drift.sigma_before = take_number(*dj, "stream.drift", "sigma_before",
                                              spec.drift.sigma_before);
        spec.drift.offset_scale = take_number(*dj, "stream.drift", "offset_scale",
                                              spec.drift.offset_scale);
        if (const json* off = find(*dj, "offset")) {
            if (!off->is_array())
                throw ConfigError("config field stream.drift.offset must be an array");
            for (const json& x : *off) {
                if (!x.is_number())
                    throw ConfigError(
                        "config field stream.drift.offset must hold numbers only");
                spec.drift.offset.push_back(x.get<double>());
            }
        }
    }
    return spec;
}

sched::RunConfig parse_run(const json& j, size_t index) {
    std::string ctx = "runs[" + std::to_string(index) + "]";
    expect_object(j, ctx);
    sched::RunConfig cfg;

    cfg.run_id = take_string(j, ctx, "id", "run" + std::to_string(index));
    cfg.algo = sched::algo_from_name(take_string(j, ctx, "algo", "sw"));
    cfg.L = take_uint(j, ctx, "L", cfg.L);
    cfg.e_ret = take_uint(j, ctx, "e_ret", cfg.e_ret);
    cfg.e_inc = take_uint(j, ctx, "e_inc", cfg.e_inc);
    cfg.anchor_period = take_uint(j, ctx, "anchor_period", cfg.anchor_period);
    cfg.oracle_tracking = take_bool(j, ctx, "oracle_tracking", cfg.oracle_tracking);
    cfg.eps_tracking = take_bool(j, ctx, "eps_tracking", cfg.eps_tracking);

    cfg.train.eta = take_number(j, ctx, "eta", cfg.train.eta);
    cfg.train.minibatch = take_uint(j, ctx, "minibatch", cfg.train.minibatch);
    cfg.train.seed = take_uint(j, ctx, "seed", cfg.train.seed);
    cfg.train.convergence_tol = take_number(j, ctx, "convergence_tol",
                                            cfg.train.convergence_tol);
    cfg.train.random_init = take_bool(j, ctx, "random_init", cfg.train.random_init);
    cfg.train.init_scale = take_number(j, ctx, "init_scale", cfg.train.init_scale);

    if (const json* u = find(j, "unlearn")) {
        std::string uctx = ctx + ".unlearn";
        expect_object(*u, uctx);
        cfg.unlearn.backend =
            unlearn::backend_from_name(take_string(*u, uctx, "backend", "newton-cg"));
        cfg.unlearn.k = take_uint(*u, uctx, "k", cfg.unlearn.k);
        cfg.unlearn.max_iters = take_uint(*u, uctx, "max_iters", cfg.unlearn.max_iters);
        cfg.unlearn.cg_tol = take_number(*u, uctx, "cg_tol", cfg.unlearn.cg_tol);
        cfg.unlearn.damping = take_number(*u, uctx, "damping", cfg.unlearn.damping);
    }
    cfg.unlearn.seed = cfg.train.seed; // one seed steers the whole run
    return cfg;
}

} // namespace

void ExperimentConfig::validate() const {
    stream.validate();
    if (runs.empty()) throw ConfigError("config field runs must list at least one run");
    for (const sched::RunConfig& r : runs) r.validate(params);
    recovery.validate();
    if (output_dir.empty()) throw ConfigError("config field output_dir must not be empty");
    if (workers < 1) throw ConfigError("config field workers must be at least 1");
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid json: ") + e.what());
    }
    expect_object(j, "");

    ExperimentConfig cfg;
    if (const json* s = find(j, "stream")) cfg.stream = parse_stream(*s);
    if (const json* m = find(j, "model")) {
        expect_object(*m, "model");
        cfg.params.lambda = take_number(*m, "model", "lambda", cfg.params.lambda);
    }
    if (const json* r = find(j, "runs")) {
        if (!r->is_array()) throw ConfigError("config field runs must be an array");
        for (size_t i = 0; i < r->size(); ++i) cfg.runs.push_back(parse_run((*r)[i], i));
    }
    if (const json* rec = find(j, "recovery")) {
        expect_object(*rec, "recovery");
        cfg.recovery.baseline_window = take_uint(*rec, "recovery", "baseline_window",
                                                 cfg.recovery.baseline_window);
        cfg.recovery.epsilon = take_number(*rec, "recovery", "epsilon", cfg.recovery.epsilon);
        cfg.recovery.smoothing = take_uint(*rec, "recovery", "smoothing",
                                           cfg.recovery.smoothing);
    }
    cfg.output_dir = take_string(j, "", "output_dir", cfg.output_dir);
    cfg.chart = take_bool(j, "", "chart", cfg.chart);
    cfg.workers = take_uint(j, "", "workers", cfg.workers);

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeFailure("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (!overrides.empty()) text = apply_overrides(text, overrides);
    return parse_config(text);
}

namespace {

// one path step: an object key or a [index] subscript
json* descend(json& node, const std::string& token, const std::string& full) {
    size_t bracket = token.find('[');
    std::string key = token.substr(0, bracket);
    json* cur = &node;
    if (!key.empty()) {
        if (!cur->is_object() || !cur->contains(key))
            throw ConfigError("override path " + full + " does not name a config field (at \"" +
                              key + "\")");
        cur = &(*cur)[key];
    }
    while (bracket != std::string::npos) {
        size_t close = token.find(']', bracket);
        if (close == std::string::npos)
            throw ConfigError("override path " + full + " has an unterminated subscript");
        std::string idx_text = token.substr(bracket + 1, close - bracket - 1);
        size_t idx = 0;
        try {
            idx = std::stoul(idx_text);
        } catch (...) {
            throw ConfigError("override path " + full + " has a non-numeric subscript \"" +
                              idx_text + "\"");
        }
        if (!cur->is_array() || idx >= cur->size())
            throw ConfigError("override path " + full + " indexes beyond the array (at [" +
                              idx_text + "])");
        cur = &(*cur)[idx];
        bracket = token.find('[', close);
    }
    return cur;
}

} // namespace

std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid json: ") + e.what());
    }

    for (const std::string& ov : overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override \"" + ov + "\" must look like path=value");
        std::string path = ov.substr(0, eq);
        std::string value = ov.substr(eq + 1);

        json* cur = &j;
        size_t start = 0;
        for (;;) {
            size_t dot = path.find('.', start);
            std::string token =
                dot == std::string::npos ? path.substr(start) : path.substr(start, dot - start);
            if (token.empty())
                throw ConfigError("override path " + path + " has an empty segment");
            cur = descend(*cur, token, path);
            if (dot == std::string::npos) break;
            start = dot + 1;
        }

        // interpret the value as JSON when it parses (numbers, booleans,
        // arrays); anything else is taken as a bare string
        json parsed = json::parse(value, nullptr, false);
        *cur = parsed.is_discarded() ? json(value) : parsed;
    }
    return j.dump(2);
}

std::string config_schema() {
    return R"schema({
  "stream": {
    "source": "synthetic | idx          (default synthetic)",
    "m": "samples per chunk             (positive integer)",
    "n_chunks": "stream length          (positive integer)",
    "seed": "stream randomness          (non-negative integer)",
    "synth": {
      "d": "feature dimension",
      "classes": "class count (>= 2)",
      "cov_scale": "per-coordinate spread around the class mean",
      "mean_lo": "class-mean range low edge",
      "mean_hi": "class-mean range high edge"
    },
    "idx": { "images": "path to idx image file", "labels": "path to idx label file" },
    "drift": {
      "kind": "none | sudden-noise | semantic-regroup | mean-shift",
      "drift_chunk": "first chunk drawn from the new concept",
      "sigma": "sudden-noise: post-drift noise level",
      "sigma_before": "sudden-noise: pre-drift noise level",
      "offset": "mean-shift: explicit per-coordinate offset (array, optional)",
      "offset_scale": "mean-shift: offset length along a seeded direction"
    }
  },
  "model": { "lambda": "ridge strength (> 0)" },
  "runs": [
    {
      "id": "run identifier (default runN)",
      "algo": "sw | uil",
      "L": "window length in chunks",
      "eta": "SGD learning rate",
      "minibatch": "SGD minibatch size",
      "seed": "training randomness for this run",
      "e_ret": "epochs for scratch retraining",
      "e_inc": "epochs for incremental updates",
      "anchor_period": "uil: scratch retrain every n-th shift (0 = never)",
      "oracle_tracking": "log |theta - theta*| per shift (bool)",
      "eps_tracking": "also estimate per-shift unlearning error (bool)",
      "convergence_tol": "scratch early-stop gradient norm (0 = fixed epochs)",
      "random_init": "gaussian parameter init instead of zeros (bool)",
      "init_scale": "scale of the random init",
      "unlearn": {
        "backend": "newton-exact | newton-cg | diag-fisher",
        "k": "curvature subsample size",
        "max_iters": "CG iteration cap",
        "cg_tol": "CG relative residual tolerance",
        "damping": "Hessian diagonal damping (< 0 picks 1e-3 * lambda)"
      }
    }
  ],
  "recovery": {
    "baseline_window": "pre-drift chunks averaged into the baseline",
    "epsilon": "recovered when smoothed acc >= (1-eps) * baseline",
    "smoothing": "trailing moving-average width"
  },
  "output_dir": "artifact directory (default out; DRIFTLAB_OUTPUT_DIR overrides)",
  "chart": "emit SVG charts after runs (bool)",
  "workers": "worker threads for multi-run dispatch"
}
)schema";
}

} // namespace drift::config
