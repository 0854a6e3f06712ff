#include "driftlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "driftlab/errors.hpp"
#include "driftlab/kernels.hpp"

namespace drift::model {

namespace {

// softmax probabilities from raw scores, max-shifted for stability;
// returns logsumexp(scores) so loss can reuse the same pass
double softmax_inplace(double* scores, size_t C) {
    double mx = scores[0];
    for (size_t c = 1; c < C; ++c) mx = std::max(mx, scores[c]);
    double sum = 0.0;
    for (size_t c = 0; c < C; ++c) {
        scores[c] = std::exp(scores[c] - mx);
        sum += scores[c];
    }
    double inv = 1.0 / sum;
    for (size_t c = 0; c < C; ++c) scores[c] *= inv;
    return mx + std::log(sum);
}

thread_local std::vector<double> tl_probs;
thread_local std::vector<double> tl_sv; // per-class dot products in hvp

double* probs_scratch(size_t C) {
    if (tl_probs.size() < C) tl_probs.resize(C);
    return tl_probs.data();
}

} // namespace

size_t total_samples(DataSpan data) {
    size_t n = 0;
    for (const DataView& v : data) n += v.n;
    return n;
}

void predict_into(const Theta& theta, const double* x, double* probs) {
    const kernels::Ops& ops = kernels::active();
    for (size_t c = 0; c < theta.C; ++c)
        probs[c] = ops.dot(theta.row(c), x, theta.d);
    softmax_inplace(probs, theta.C);
}

std::vector<double> predict(const Theta& theta, std::span<const double> x) {
    std::vector<double> probs(theta.C);
    predict_into(theta, x.data(), probs.data());
    return probs;
}

int32_t predict_class(const Theta& theta, const double* x) {
    double* probs = probs_scratch(theta.C);
    predict_into(theta, x, probs);
    int32_t best = 0;
    for (size_t c = 1; c < theta.C; ++c)
        if (probs[c] > probs[best]) best = int32_t(c);
    return best;
}

double loss(const Theta& theta, DataSpan data, const LossParams& params) {
    const kernels::Ops& ops = kernels::active();
    size_t N = total_samples(data);
    if (N == 0) throw RuntimeFailure("loss: empty data span");
    double* scores = probs_scratch(theta.C);
    double ce = 0.0;
    for (const DataView& view : data) {
        for (size_t i = 0; i < view.n; ++i) {
            const double* x = view.sample(i);
            for (size_t c = 0; c < theta.C; ++c)
                scores[c] = ops.dot(theta.row(c), x, theta.d);
            double score_y = scores[view.y[i]];
            ce += softmax_inplace(scores, theta.C) - score_y;
        }
    }
    return ce / double(N) + 0.5 * params.lambda * ops.nrm2sq(theta.v.data(), theta.p());
}

double loss(const Theta& theta, const DataView& data, const LossParams& params) {
    return loss(theta, DataSpan(&data, 1), params);
}

void accum_ce_grad(const Theta& theta, const double* x, int32_t y, double w, double* out) {
    const kernels::Ops& ops = kernels::active();
    double* probs = probs_scratch(theta.C);
    predict_into(theta, x, probs);
    for (size_t c = 0; c < theta.C; ++c) {
        double coef = probs[c] - (int32_t(c) == y ? 1.0 : 0.0);
        ops.axpy(w * coef, x, out + c * theta.d, theta.d);
    }
}

void accum_ce_hvp(const Theta& theta, const double* x, const double* vec, double w, double* out) {
    const kernels::Ops& ops = kernels::active();
    double* probs = probs_scratch(theta.C);
    predict_into(theta, x, probs);
    if (tl_sv.size() < theta.C) tl_sv.resize(theta.C);
    double* sv = tl_sv.data();
    double q = 0.0;
    for (size_t c = 0; c < theta.C; ++c) {
        sv[c] = ops.dot(vec + c * theta.d, x, theta.d);
        q += probs[c] * sv[c];
    }
    for (size_t c = 0; c < theta.C; ++c) {
        double t = probs[c] * (sv[c] - q);
        ops.axpy(w * t, x, out + c * theta.d, theta.d);
    }
}

void grad_into(const Theta& theta, DataSpan data, const LossParams& params, double* out) {
    const kernels::Ops& ops = kernels::active();
    size_t N = total_samples(data);
    if (N == 0) throw RuntimeFailure("grad: empty data span");
    std::memset(out, 0, theta.p() * sizeof(double));
    double w = 1.0 / double(N);
    for (const DataView& view : data)
        for (size_t i = 0; i < view.n; ++i)
            accum_ce_grad(theta, view.sample(i), view.y[i], w, out);
    ops.axpy(params.lambda, theta.v.data(), out, theta.p());
}

std::vector<double> grad(const Theta& theta, DataSpan data, const LossParams& params) {
    std::vector<double> out(theta.p());
    grad_into(theta, data, params, out.data());
    return out;
}

std::vector<double> grad(const Theta& theta, const DataView& data, const LossParams& params) {
    return grad(theta, DataSpan(&data, 1), params);
}

void hvp_into(const Theta& theta, DataSpan data, const double* vec, const LossParams& params,
              double* out) {
    const kernels::Ops& ops = kernels::active();
    size_t N = total_samples(data);
    if (N == 0) throw RuntimeFailure("hvp: empty data span");
    std::memset(out, 0, theta.p() * sizeof(double));
    double w = 1.0 / double(N);
    for (const DataView& view : data)
        for (size_t i = 0; i < view.n; ++i)
            accum_ce_hvp(theta, view.sample(i), vec, w, out);
    ops.axpy(params.lambda, vec, out, theta.p());
}

std::vector<double> hvp(const Theta& theta, DataSpan data, std::span<const double> vec,
                        const LossParams& params) {
    std::vector<double> out(theta.p());
    hvp_into(theta, data, vec.data(), params, out.data());
    return out;
}

linalg::Mat hessian_dense(const Theta& theta, DataSpan data, const LossParams& params,
                          size_t p_cap) {
    const kernels::Ops& ops = kernels::active();
    size_t p = theta.p();
    if (p > p_cap)
        throw RuntimeFailure("hessian_dense: p=" + std::to_string(p) + " exceeds cap " +
                             std::to_string(p_cap));
    size_t N = total_samples(data);
    if (N == 0) throw RuntimeFailure("hessian_dense: empty data span");

    linalg::Mat h(p);
    double* probs = probs_scratch(theta.C);
    double w = 1.0 / double(N);
    // per-sample blocks: (diag(p) - p p^T) (x) x x^T, assembled from outer
    // products rather than matvecs so this stays independent of hvp_into
    for (const DataView& view : data) {
        for (size_t i = 0; i < view.n; ++i) {
            const double* x = view.sample(i);
            predict_into(theta, x, probs);
            for (size_t c1 = 0; c1 < theta.C; ++c1) {
                for (size_t c2 = 0; c2 < theta.C; ++c2) {
                    double wcc =
                        w * (probs[c1] * (c1 == c2 ? 1.0 : 0.0) - probs[c1] * probs[c2]);
                    if (wcc == 0.0) continue;
                    for (size_t j1 = 0; j1 < theta.d; ++j1)
                        ops.axpy(wcc * x[j1], x, h.row(c1 * theta.d + j1) + c2 * theta.d,
                                 theta.d);
                }
            }
        }
    }
    for (size_t r = 0; r < p; ++r) h.at(r, r) += params.lambda;
    return h;
}

ConvexityConstants convexity_constants(DataSpan data, const LossParams& params) {
    const kernels::Ops& ops = kernels::active();
    double max_sq = 0.0;
    for (const DataView& view : data)
        for (size_t i = 0; i < view.n; ++i)
            max_sq = std::max(max_sq, ops.nrm2sq(view.sample(i), view.d));
    return {params.lambda, params.lambda + 0.5 * max_sq};
}

} // namespace drift::model
