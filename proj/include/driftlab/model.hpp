#pragma once

// L2-regularized softmax classifier. Everything here is a pure function of
// (parameters, data): loss, gradient, Hessian-vector product, and a dense
// Hessian assembled by an independent route for cross-checking. Data is
// consumed as a span of contiguous blocks so a multi-chunk window never
// needs to be copied.

#include <cstdint>
#include <span>
#include <vector>

#include "driftlab/datastream.hpp"
#include "driftlab/linalg.hpp"

namespace drift::model {

struct Theta {
    size_t d = 0;
    size_t C = 0;
    std::vector<double> v; // C*d, class-major: v[c*d + j]

    Theta() = default;
    Theta(size_t d_, size_t C_) : d(d_), C(C_), v(d_ * C_, 0.0) {}
    size_t p() const { return v.size(); }
    double* row(size_t c) { return v.data() + c * d; }
    const double* row(size_t c) const { return v.data() + c * d; }
};

struct LossParams {
    double lambda = 0.1; // ridge strength; also the strong-convexity constant
};

// Non-owning view of a contiguous block of samples.
struct DataView {
    const double* x = nullptr;
    const int32_t* y = nullptr;
    size_t n = 0;
    size_t d = 0;

    DataView() = default;
    DataView(const double* x_, const int32_t* y_, size_t n_, size_t d_)
        : x(x_), y(y_), n(n_), d(d_) {}
    DataView(const stream::Chunk& c) : x(c.features.data()), y(c.labels.data()), n(c.n), d(c.d) {}
    const double* sample(size_t i) const { return x + i * d; }
};

using DataSpan = std::span<const DataView>;

size_t total_samples(DataSpan data);

// class probabilities for one sample; probs must hold C doubles
void predict_into(const Theta& theta, const double* x, double* probs);
std::vector<double> predict(const Theta& theta, std::span<const double> x);
int32_t predict_class(const Theta& theta, const double* x);

// mean cross-entropy over all samples plus (lambda/2)*|theta|^2
double loss(const Theta& theta, DataSpan data, const LossParams& params);
double loss(const Theta& theta, const DataView& data, const LossParams& params);

// gradient of the regularized loss; out must hold p() doubles
void grad_into(const Theta& theta, DataSpan data, const LossParams& params, double* out);
std::vector<double> grad(const Theta& theta, DataSpan data, const LossParams& params);
std::vector<double> grad(const Theta& theta, const DataView& data, const LossParams& params);

// Hessian-vector product of the regularized loss at theta
void hvp_into(const Theta& theta, DataSpan data, const double* vec, const LossParams& params,
              double* out);
std::vector<double> hvp(const Theta& theta, DataSpan data, std::span<const double> vec,
                        const LossParams& params);

// Per-sample accumulators used by the minibatch loops: add w * (sample
// term) to out, excluding the ridge term. Callers fold in lambda once.
void accum_ce_grad(const Theta& theta, const double* x, int32_t y, double w, double* out);
void accum_ce_hvp(const Theta& theta, const double* x, const double* vec, double w, double* out);

// Dense Hessian assembled from per-sample outer products — an independent
// route from hvp_into, kept for exact solves and cross-checks. Refuses
// p() > p_cap.
linalg::Mat hessian_dense(const Theta& theta, DataSpan data, const LossParams& params,
                          size_t p_cap = 200);

struct ConvexityConstants {
    double mu = 0.0;   // strong convexity: the ridge strength
    double beta = 0.0; // smoothness: lambda + max_i |x_i|^2 / 2
};
ConvexityConstants convexity_constants(DataSpan data, const LossParams& params);

} // namespace drift::model
