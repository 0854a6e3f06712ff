#include "driftlab/datastream.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "driftlab/errors.hpp"
#include "driftlab/rng.hpp"

namespace drift::stream {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

std::string hex32(uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%08x", v);
    return buf;
}

uint32_t read_u32_be(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw RuntimeFailure("truncated idx file: " + path);
    return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) | (uint32_t(b[2]) << 8) | uint32_t(b[3]);
}

constexpr uint32_t kImageMagic = 0x00000803; // unsigned byte, 3 dimensions
constexpr uint32_t kLabelMagic = 0x00000801; // unsigned byte, 1 dimension

} // namespace

void StreamSpec::validate() const {
    if (m == 0) throw ConfigError("stream.m must be positive");
    if (n_chunks == 0) throw ConfigError("stream.n_chunks must be positive");
    if (has_drift()) {
        if (drift.drift_chunk < 1 || size_t(drift.drift_chunk) >= n_chunks)
            throw ConfigError("stream.drift.drift_chunk must lie in [1, n_chunks)");
    }
    switch (drift.kind) {
    case DriftKind::none:
        break;
    case DriftKind::sudden_noise:
        if (drift.sigma < 0.0 || drift.sigma_before < 0.0)
            throw ConfigError("stream.drift.sigma must be non-negative");
        break;
    case DriftKind::semantic_regroup:
        if (source == Source::synthetic_gaussians && synth.classes != 10)
            throw ConfigError("stream.synth.classes must be 10 for semantic_regroup drift");
        break;
    case DriftKind::mean_shift:
        if (source == Source::idx_files)
            throw ConfigError("stream.drift.kind mean_shift requires a synthetic source");
        if (drift.offset.empty() && drift.offset_scale <= 0.0)
            throw ConfigError("stream.drift.offset or offset_scale must be set for mean_shift");
        if (!drift.offset.empty() && drift.offset.size() != synth.d)
            throw ConfigError("stream.drift.offset length must equal stream.synth.d");
        break;
    }
    if (source == Source::synthetic_gaussians) {
        if (synth.d == 0) throw ConfigError("stream.synth.d must be positive");
        if (synth.classes < 2) throw ConfigError("stream.synth.classes must be at least 2");
        if (!(synth.mean_lo < synth.mean_hi))
            throw ConfigError("stream.synth.mean_lo must be below mean_hi");
        if (synth.cov_scale <= 0.0) throw ConfigError("stream.synth.cov_scale must be positive");
    } else {
        if (idx.images.empty()) throw ConfigError("stream.idx.images path is required");
        if (idx.labels.empty()) throw ConfigError("stream.idx.labels path is required");
    }
}

int32_t semantic_relabel(int32_t label, Concept phase) {
    if (label < 0 || label >= 10)
        throw RuntimeFailure("semantic_relabel: label " + std::to_string(label) +
                             " outside [0, 10)");
    // positive concept before drift: {0,2,4,7,9}; after: {1,3,5}
    static constexpr bool old_pos[10] = {true, false, true, false, true,
                                         false, false, true, false, true};
    static constexpr bool new_pos[10] = {false, true, false, true, false,
                                         true, false, false, false, false};
    const bool* pos = (phase == Concept::old_concept) ? old_pos : new_pos;
    return pos[label] ? 1 : 0;
}

Chunk apply_noise(const Chunk& chunk, double sigma, uint64_t seed) {
    if (sigma < 0.0) throw ConfigError("noise sigma must be non-negative");
    Chunk out = chunk;
    if (sigma == 0.0) return out;
    for (size_t i = 0; i < out.n; ++i) {
        rng::Counter gen(rng::key({seed, rng::kNoise, uint64_t(out.index), i}));
        double* x = out.features.data() + i * out.d;
        for (size_t j = 0; j < out.d; ++j)
            x[j] = clamp01(x[j] + sigma * gen.gaussian());
    }
    return out;
}

Dataset read_idx_images(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeFailure("cannot open idx file: " + path);
    uint32_t magic = read_u32_be(in, path);
    if (magic != kImageMagic)
        throw RuntimeFailure("idx magic mismatch in " + path + ": expected " +
                             hex32(kImageMagic) + ", got " + hex32(magic));
    uint32_t n = read_u32_be(in, path);
    uint32_t rows = read_u32_be(in, path);
    uint32_t cols = read_u32_be(in, path);
    Dataset out;
    out.n = n;
    out.d = size_t(rows) * cols;
    std::vector<unsigned char> raw(out.n * out.d);
    if (!in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size())))
        throw RuntimeFailure("truncated idx file: " + path);
    out.features.resize(raw.size());
    for (size_t i = 0; i < raw.size(); ++i)
        out.features[i] = double(raw[i]) / 255.0;
    return out;
}

std::vector<int32_t> read_idx_labels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeFailure("cannot open idx file: " + path);
    uint32_t magic = read_u32_be(in, path);
    if (magic != kLabelMagic)
        throw RuntimeFailure("idx magic mismatch in " + path + ": expected " +
                             hex32(kLabelMagic) + ", got " + hex32(magic));
    uint32_t n = read_u32_be(in, path);
    std::vector<unsigned char> raw(n);
    if (!in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size())))
        throw RuntimeFailure("truncated idx file: " + path);
    return {raw.begin(), raw.end()};
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    Dataset data = read_idx_images(images_path);
    std::vector<int32_t> labels = read_idx_labels(labels_path);
    if (labels.size() != data.n)
        throw RuntimeFailure("idx image/label count mismatch: " + std::to_string(data.n) +
                             " images vs " + std::to_string(labels.size()) + " labels");
    data.labels = std::move(labels);
    return data;
}

Stream::Stream(StreamSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const bool semantic = spec_.drift.kind == DriftKind::semantic_regroup;

    if (spec_.source == Source::synthetic_gaussians) {
        d_ = spec_.synth.d;
        raw_classes_ = spec_.synth.classes;
    } else {
        data_ = load_idx(spec_.idx.images, spec_.idx.labels);
        d_ = data_.d;
        int32_t max_label = -1;
        for (int32_t y : data_.labels) {
            if (y < 0) throw RuntimeFailure("idx labels must be non-negative");
            max_label = std::max(max_label, y);
        }
        raw_classes_ = size_t(max_label) + 1;
        if (semantic && raw_classes_ > 10)
            throw ConfigError("semantic_regroup drift needs labels in [0, 10)");
        if (raw_classes_ < 2) throw ConfigError("stream.idx data has fewer than 2 classes");

        // disjoint per-phase sample orders over the dataset
        pool_old_ = rng::permutation(rng::key({spec_.seed, rng::kPhasePerm, 0}), uint32_t(data_.n));
        size_t pre = spec_.has_drift() ? size_t(spec_.drift.drift_chunk) : spec_.n_chunks;
        if (pre * spec_.m > data_.n)
            throw ConfigError("stream.idx dataset too small for pre-drift chunks");
        if (spec_.has_drift()) {
            pool_new_ =
                rng::permutation(rng::key({spec_.seed, rng::kPhasePerm, 1}), uint32_t(data_.n));
            if ((spec_.n_chunks - pre) * spec_.m > data_.n)
                throw ConfigError("stream.idx dataset too small for post-drift chunks");
        }
    }
    classes_ = semantic ? 2 : raw_classes_;

    if (spec_.drift.kind == DriftKind::mean_shift) {
        if (!spec_.drift.offset.empty()) {
            drift_offset_ = spec_.drift.offset;
        } else {
            // seeded unit direction, scaled
            drift_offset_.resize(d_);
            rng::Counter gen(rng::key({spec_.seed, rng::kDriftDirection}));
            double nrm = 0.0;
            for (size_t j = 0; j < d_; ++j) {
                drift_offset_[j] = gen.gaussian();
                nrm += drift_offset_[j] * drift_offset_[j];
            }
            nrm = std::sqrt(nrm);
            for (size_t j = 0; j < d_; ++j)
                drift_offset_[j] *= spec_.drift.offset_scale / nrm;
        }
    }
}

std::vector<double> Stream::class_mean(size_t raw_class, Concept phase) const {
    const SyntheticParams& sp = spec_.synth;
    std::vector<double> mean(d_);
    rng::Counter gen(rng::key({spec_.seed, rng::kClassMeans, raw_class}));
    for (size_t j = 0; j < d_; ++j)
        mean[j] = sp.mean_lo + (sp.mean_hi - sp.mean_lo) * gen.uniform();
    if (phase == Concept::new_concept && spec_.drift.kind == DriftKind::mean_shift)
        for (size_t j = 0; j < d_; ++j)
            mean[j] += drift_offset_[j];
    return mean;
}

Chunk Stream::synthetic_chunk(int64_t index, size_t n, Concept phase, uint64_t tag) const {
    Chunk out;
    out.index = index;
    out.n = n;
    out.d = d_;
    out.phase = phase;
    out.features.resize(n * d_);
    out.labels.resize(n);

    std::vector<std::vector<double>> means(raw_classes_);
    for (size_t c = 0; c < raw_classes_; ++c)
        means[c] = class_mean(c, phase);

    const bool semantic = spec_.drift.kind == DriftKind::semantic_regroup;
    for (size_t i = 0; i < n; ++i) {
        rng::Counter lgen(rng::key({spec_.seed, tag, rng::kLabel, uint64_t(index), i}));
        auto raw = int32_t(lgen.below(raw_classes_));
        out.labels[i] = semantic ? semantic_relabel(raw, phase) : raw;
        rng::Counter fgen(rng::key({spec_.seed, tag, rng::kFeature, uint64_t(index), i}));
        double* x = out.features.data() + i * d_;
        for (size_t j = 0; j < d_; ++j)
            x[j] = clamp01(means[raw][j] + spec_.synth.cov_scale * fgen.gaussian());
    }

    if (spec_.drift.kind == DriftKind::sudden_noise) {
        double sigma = (phase == Concept::new_concept) ? spec_.drift.sigma
                                                       : spec_.drift.sigma_before;
        if (sigma > 0.0) out = apply_noise(out, sigma, spec_.seed);
    }
    return out;
}

Chunk Stream::idx_chunk(int64_t index, size_t n, Concept phase, size_t pool_offset) const {
    const std::vector<uint32_t>& pool =
        (phase == Concept::new_concept) ? pool_new_ : pool_old_;
    if (pool_offset + n > pool.size())
        throw ConfigError("stream.idx dataset exhausted at chunk " + std::to_string(index));

    Chunk out;
    out.index = index;
    out.n = n;
    out.d = d_;
    out.phase = phase;
    out.features.resize(n * d_);
    out.labels.resize(n);

    const bool semantic = spec_.drift.kind == DriftKind::semantic_regroup;
    for (size_t i = 0; i < n; ++i) {
        uint32_t src = pool[pool_offset + i];
        const double* from = data_.features.data() + size_t(src) * d_;
        std::copy(from, from + d_, out.features.data() + i * d_);
        int32_t raw = data_.labels[src];
        out.labels[i] = semantic ? semantic_relabel(raw, phase) : raw;
    }

    if (spec_.drift.kind == DriftKind::sudden_noise) {
        double sigma = (phase == Concept::new_concept) ? spec_.drift.sigma
                                                       : spec_.drift.sigma_before;
        if (sigma > 0.0) out = apply_noise(out, sigma, spec_.seed);
    }
    return out;
}

Chunk Stream::chunk(size_t k) const {
    if (k >= spec_.n_chunks)
        throw RuntimeFailure("chunk index " + std::to_string(k) + " beyond stream end");
    Concept phase = (spec_.has_drift() && int64_t(k) >= spec_.drift.drift_chunk)
                        ? Concept::new_concept
                        : Concept::old_concept;
    if (spec_.source == Source::synthetic_gaussians)
        return synthetic_chunk(int64_t(k), spec_.m, phase, /*tag=*/0);
    size_t pool_offset = (phase == Concept::new_concept)
                             ? (k - size_t(spec_.drift.drift_chunk)) * spec_.m
                             : k * spec_.m;
    return idx_chunk(int64_t(k), spec_.m, phase, pool_offset);
}

Chunk Stream::eval_set(size_t n_samples, Concept phase) const {
    // negative indices keep eval streams disjoint from every chunk stream
    int64_t index = (phase == Concept::old_concept) ? -1 : -2;
    if (spec_.source == Source::synthetic_gaussians)
        return synthetic_chunk(index, n_samples, phase, /*tag=*/rng::kEval);

    size_t pre = spec_.has_drift() ? size_t(spec_.drift.drift_chunk) : spec_.n_chunks;
    size_t used = (phase == Concept::new_concept) ? (spec_.n_chunks - pre) * spec_.m
                                                  : pre * spec_.m;
    if (phase == Concept::new_concept && !spec_.has_drift())
        throw ConfigError("stream has no post-drift phase to evaluate");
    return idx_chunk(index, n_samples, phase, used);
}

Stream make_stream(const StreamSpec& spec) { return Stream(spec); }

} // namespace drift::stream
