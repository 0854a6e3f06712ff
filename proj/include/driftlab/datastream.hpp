#pragma once

// Deterministic chunked streams: synthetic Gaussian class blobs or
// IDX-format image files, with sudden drift injected at a chunk boundary.
// A stream is a pure function of its spec; chunks can be materialized in
// any order and always come out bit-identical.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace drift::stream {

enum class Concept { old_concept, new_concept };

struct Chunk {
    int64_t index = 0;
    size_t n = 0;
    size_t d = 0;
    Concept phase = Concept::old_concept;
    std::vector<double> features; // n * d, row-major, coordinates in [0,1]
    std::vector<int32_t> labels;  // n, each in [0, C)

    std::span<const double> x(size_t i) const { return {features.data() + i * d, d}; }
    int32_t y(size_t i) const { return labels[i]; }
};

enum class DriftKind { none, sudden_noise, semantic_regroup, mean_shift };

struct DriftSpec {
    DriftKind kind = DriftKind::none;
    int64_t drift_chunk = 1;    // first chunk drawn from the new concept
    double sigma = 0.0;         // sudden-noise: post-drift noise level
    double sigma_before = 0.0;  // sudden-noise: pre-drift level (reverse scenarios)
    std::vector<double> offset; // mean-shift: explicit mean offset (optional)
    double offset_scale = 0.0;  // mean-shift: |offset| along a seeded direction
};

enum class Source { synthetic_gaussians, idx_files };

struct SyntheticParams {
    size_t d = 10;
    size_t classes = 3;
    double cov_scale = 0.08;    // per-coordinate Gaussian spread around the class mean
    double mean_lo = 0.2;       // class means drawn uniformly from [mean_lo, mean_hi]
    double mean_hi = 0.8;
};

struct IdxParams {
    std::string images;
    std::string labels;
};

struct StreamSpec {
    Source source = Source::synthetic_gaussians;
    size_t m = 100;
    size_t n_chunks = 10;
    uint64_t seed = 0;
    DriftSpec drift;
    SyntheticParams synth;
    IdxParams idx;

    bool has_drift() const { return drift.kind != DriftKind::none; }
    // throws ConfigError naming the offending field
    void validate() const;
};

struct Dataset {
    size_t n = 0;
    size_t d = 0;
    std::vector<double> features;
    std::vector<int32_t> labels;
};

// Gaussian feature noise, coordinates clamped back to [0,1]; labels
// untouched. Per-sample streams keyed on (seed, chunk index, sample index).
Chunk apply_noise(const Chunk& chunk, double sigma, uint64_t seed);

// Binary relabeling for the semantic drift scenario: the positive concept
// is {0,2,4,7,9} before drift and {1,3,5} after. label must be in [0,10).
int32_t semantic_relabel(int32_t label, Concept phase);

// IDX readers: big-endian, magic 0x00000803 for 3-D image tensors and
// 0x00000801 for label vectors; pixel bytes rescaled to [0,1].
Dataset read_idx_images(const std::string& path);
std::vector<int32_t> read_idx_labels(const std::string& path);
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// Lazy chunk producer. Stateless after construction; chunk(k) may be
// called concurrently.
class Stream {
public:
    explicit Stream(StreamSpec spec);

    const StreamSpec& spec() const { return spec_; }
    size_t n_chunks() const { return spec_.n_chunks; }
    size_t chunk_size() const { return spec_.m; }
    size_t feature_dim() const { return d_; }
    // effective label count (2 under semantic regrouping)
    size_t num_classes() const { return classes_; }

    Chunk chunk(size_t k) const;

    // Held-out samples from the given phase's distribution, disjoint from
    // every stream chunk.
    Chunk eval_set(size_t n_samples, Concept phase) const;

private:
    Chunk synthetic_chunk(int64_t index, size_t n, Concept phase, uint64_t tag) const;
    Chunk idx_chunk(int64_t index, size_t n, Concept phase, size_t pool_offset) const;
    std::vector<double> class_mean(size_t raw_class, Concept phase) const;

    StreamSpec spec_;
    size_t d_ = 0;
    size_t classes_ = 0;
    size_t raw_classes_ = 0;
    std::vector<double> drift_offset_; // resolved mean-shift offset
    Dataset data_;                     // idx source only
    std::vector<uint32_t> pool_old_;   // per-phase sample order over data_
    std::vector<uint32_t> pool_new_;
};

Stream make_stream(const StreamSpec& spec);

} // namespace drift::stream
