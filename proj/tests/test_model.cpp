#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "driftlab/errors.hpp"
#include "driftlab/model.hpp"
#include "oracles.hpp"

using namespace drift;
using model::DataView;
using model::LossParams;
using model::Theta;

namespace {

struct Problem {
    size_t d, C, n;
    std::vector<double> x;
    std::vector<int32_t> y;
    Theta theta;
    LossParams params;

    DataView view() const { return {x.data(), y.data(), n, d}; }
};

Problem make_problem(size_t d, size_t C, size_t n, uint32_t seed, double lambda = 0.1) {
    std::mt19937 g(seed);
    Problem p{d, C, n, oracle::random_vec(g, n * d, 0.0, 1.0),
              oracle::random_labels(g, n, int32_t(C)), Theta(d, C), LossParams{lambda}};
    p.theta.v = oracle::random_vec(g, d * C, -0.5, 0.5);
    return p;
}

} // namespace

TEST_CASE("predictions are proper distributions") {
    Problem p = make_problem(6, 4, 10, 1);
    for (size_t i = 0; i < p.n; ++i) {
        auto probs = model::predict(p.theta, {p.x.data() + i * p.d, p.d});
        double sum = 0.0;
        for (double v : probs) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    // zero parameters give the uniform distribution
    Theta zero(6, 4);
    auto probs = model::predict(zero, {p.x.data(), 6});
    for (double v : probs) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("loss at zero parameters is log C") {
    Problem p = make_problem(5, 3, 40, 2);
    Theta zero(5, 3);
    DataView v = p.view();
    CHECK(model::loss(zero, v, p.params) == doctest::Approx(std::log(3.0)).epsilon(1e-13));
}

TEST_CASE("gradient matches central finite differences") {
    Problem p = make_problem(6, 3, 20, 3);
    DataView v = p.view();

    auto f = [&](const std::vector<double>& vec) {
        Theta t = p.theta;
        t.v = vec;
        return model::loss(t, v, p.params);
    };
    auto want = oracle::fd_gradient(f, p.theta.v, 1e-5);
    auto got = model::grad(p.theta, v, p.params);
    CHECK(oracle::rel_err(got, want) < 1e-7);
}

TEST_CASE("hvp agrees with the dense Hessian") {
    Problem p = make_problem(5, 3, 25, 4); // p = 15
    DataView v = p.view();
    linalg::Mat h = model::hessian_dense(p.theta, model::DataSpan(&v, 1), p.params);

    std::mt19937 g(99);
    for (int trial = 0; trial < 10; ++trial) {
        auto vec = oracle::random_vec(g, p.theta.p(), -1.0, 1.0);
        auto want = oracle::matvec(h, vec);
        auto got = model::hvp(p.theta, model::DataSpan(&v, 1), vec, p.params);
        CHECK(oracle::rel_err(got, want) < 1e-12);
    }
}

TEST_CASE("dense Hessian is symmetric and lambda-strongly convex") {
    Problem p = make_problem(6, 3, 30, 5, 0.05); // p = 18
    DataView v = p.view();
    linalg::Mat h = model::hessian_dense(p.theta, model::DataSpan(&v, 1), p.params);

    for (size_t i = 0; i < h.n; ++i)
        for (size_t j = 0; j < i; ++j)
            CHECK(std::abs(h.at(i, j) - h.at(j, i)) <= 1e-14);

    auto eig = oracle::jacobi_eigenvalues(h);
    CHECK(eig.front() >= p.params.lambda - 1e-10);
}

TEST_CASE("finite-difference directional derivative confirms the hvp route") {
    // d/dh grad(theta + h*vec) at h=0 equals H*vec — checks hvp against the
    // gradient itself rather than the dense assembly
    Problem p = make_problem(4, 3, 15, 6);
    DataView v = p.view();
    std::mt19937 g(17);
    auto vec = oracle::random_vec(g, p.theta.p(), -1.0, 1.0);

    const double h = 1e-6;
    Theta up = p.theta, down = p.theta;
    for (size_t i = 0; i < vec.size(); ++i) {
        up.v[i] += h * vec[i];
        down.v[i] -= h * vec[i];
    }
    auto gu = model::grad(up, v, p.params);
    auto gd = model::grad(down, v, p.params);
    std::vector<double> want(vec.size());
    for (size_t i = 0; i < vec.size(); ++i) want[i] = (gu[i] - gd[i]) / (2.0 * h);

    auto got = model::hvp(p.theta, model::DataSpan(&v, 1), vec, p.params);
    CHECK(oracle::rel_err(got, want) < 1e-6);
}

TEST_CASE("multi-block spans equal their concatenation") {
    Problem p = make_problem(5, 3, 30, 7);
    DataView whole = p.view();
    DataView parts[2] = {{p.x.data(), p.y.data(), 12, p.d},
                         {p.x.data() + 12 * p.d, p.y.data() + 12, 18, p.d}};

    CHECK(model::loss(p.theta, model::DataSpan(parts, 2), p.params) ==
          model::loss(p.theta, model::DataSpan(&whole, 1), p.params));

    auto g1 = model::grad(p.theta, model::DataSpan(parts, 2), p.params);
    auto g2 = model::grad(p.theta, model::DataSpan(&whole, 1), p.params);
    CHECK(g1 == g2);
}

TEST_CASE("convexity constants come from the data radius") {
    Problem p = make_problem(4, 3, 20, 8, 0.2);
    DataView v = p.view();
    auto cc = model::convexity_constants(model::DataSpan(&v, 1), p.params);
    CHECK(cc.mu == 0.2);

    double max_sq = 0.0;
    for (size_t i = 0; i < p.n; ++i) {
        double s = 0.0;
        for (size_t j = 0; j < p.d; ++j) s += p.x[i * p.d + j] * p.x[i * p.d + j];
        max_sq = std::max(max_sq, s);
    }
    CHECK(cc.beta == doctest::Approx(0.2 + 0.5 * max_sq).epsilon(1e-15));
}

TEST_CASE("degenerate inputs are rejected") {
    Problem p = make_problem(4, 3, 10, 9);
    CHECK_THROWS_AS(model::loss(p.theta, model::DataSpan{}, p.params), RuntimeFailure);

    Theta big(40, 6); // p = 240 > default cap
    DataView v = p.view();
    CHECK_THROWS_AS(model::hessian_dense(big, model::DataSpan(&v, 1), p.params),
                    RuntimeFailure);
}

TEST_CASE("cholesky solve inverts the dense Hessian") {
    Problem p = make_problem(4, 3, 20, 10);
    DataView v = p.view();
    linalg::Mat h = model::hessian_dense(p.theta, model::DataSpan(&v, 1), p.params);

    std::mt19937 g(23);
    auto b = oracle::random_vec(g, h.n, -1.0, 1.0);
    auto x = linalg::cholesky_solve(h, b);
    auto back = oracle::matvec(h, x);
    CHECK(oracle::rel_err(back, b) < 1e-10);

    linalg::Mat indef(2);
    indef.at(0, 0) = 1.0;
    indef.at(1, 1) = -1.0;
    std::vector<double> rhs = {1.0, 1.0};
    CHECK_THROWS_AS(linalg::cholesky_solve(indef, rhs), RuntimeFailure);
}
