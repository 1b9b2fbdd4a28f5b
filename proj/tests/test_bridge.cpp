#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fracbridge/bridge.hpp"
#include "fracbridge/rng.hpp"

using namespace fracbridge;
using rng::RngStream;

namespace {

// Deterministic driver B_t = t. Along it every stochastic integral becomes a
// Riemann integral with a closed form, which pins down the discretization.
GaussianPath ramp_path(const TimeGrid& grid) {
    GaussianPath p;
    p.grid = grid;
    p.hurst = HurstParam{0.7};
    p.values = grid.times();
    return p;
}

// int_0^t (T-s)^{-alpha} ds for alpha != 1.
double ramp_xi_exact(double t, double horizon, double alpha) {
    return (std::pow(horizon - t, 1.0 - alpha) - std::pow(horizon, 1.0 - alpha)) /
           (alpha - 1.0);
}

// int_0^t (T-u)^{alpha-1} xi_u du with the ramp xi above, alpha != 1.
double ramp_eta_exact(double t, double horizon, double alpha) {
    const double head = std::pow(horizon, 1.0 - alpha) *
                        (std::pow(horizon, alpha) - std::pow(horizon - t, alpha)) / alpha;
    return (t - head) / (alpha - 1.0);
}

}  // namespace

TEST_SUITE_BEGIN("bridge");

TEST_CASE("weighted integral of the ramp matches its closed form and rate") {
    const double alpha = 0.3;
    const ModelParams params{alpha, 1.0, HurstParam{0.7}};
    const double exact = ramp_xi_exact(0.9, 1.0, alpha);
    CHECK(exact == doctest::Approx(1.14353395500444577123536351475).epsilon(1e-14));

    double prev_err = 0.0;
    for (std::size_t n : {1u << 12, 1u << 13, 1u << 14}) {
        const TimeGrid grid{0.9, n};
        const std::vector<double> xi = build_xi(ramp_path(grid), params);
        const double err = std::abs(xi.back() - exact);
        if (prev_err > 0.0) {
            // Left-point sums converge at first order.
            CHECK(prev_err / err == doctest::Approx(2.0).epsilon(0.15));
        }
        prev_err = err;
    }
    CHECK(prev_err < 5e-5);
}

TEST_CASE("second-level integral of the ramp matches its closed form") {
    const double alpha = 0.3;
    const ModelParams params{alpha, 1.0, HurstParam{0.7}};
    const TimeGrid grid{0.9, 1u << 14};
    const GaussianPath path = ramp_path(grid);
    const std::vector<double> xi = build_xi(path, params);
    const std::vector<double> eta = build_eta(path, xi, params);
    CHECK(eta.back() == doctest::Approx(ramp_eta_exact(0.9, 1.0, alpha)).epsilon(2e-4));
}

TEST_CASE("bridge path is the weighted integral rescaled, node by node") {
    const ModelParams params{0.45, 1.0, HurstParam{0.7}};
    const TimeGrid grid{0.99, 1024};
    RngStream s = RngStream::for_replication(21, 0);
    const GaussianPath path = sample_davies_harte(params.hurst, grid, s);
    const BridgePaths b = build_bridge(path, params);
    REQUIRE(b.x.size() == 1025);
    for (std::size_t i = 0; i < b.x.size(); i += 64) {
        const double expect = std::pow(1.0 - grid.time_at(i), 0.45) * b.xi[i];
        CHECK(b.x[i] == doctest::Approx(expect).epsilon(1e-12));
    }
    // The quadratic functional accumulates a nonnegative integrand.
    for (std::size_t i = 1; i < b.denom.size(); ++i) CHECK(b.denom[i] >= b.denom[i - 1]);
}

TEST_CASE("euler scheme tracks the explicit solution, ramp driver") {
    // Deterministic ODE x' = -alpha x/(T-t) + 1: at alpha = 1, T = 1 the
    // solution is x(t) = (1-t) log(1/(1-t)), i.e. log(2)/2 at t = 1/2.
    const ModelParams params{1.0, 1.0, HurstParam{0.7}};
    const TimeGrid grid{0.5, 1u << 12};
    const GaussianPath path = ramp_path(grid);
    const std::vector<double> euler = euler_bridge(path, params);
    CHECK(euler.back() == doctest::Approx(0.346573590279972654708616060729).epsilon(5e-4));

    // The explicit representation agrees on the same driver.
    const BridgePaths b = build_bridge(path, params);
    CHECK(b.x.back() == doctest::Approx(0.346573590279972654708616060729).epsilon(5e-4));
}

TEST_CASE("euler scheme converges to the explicit path on a rough driver") {
    // One driver sampled fine, then coarsened dyadically, so every
    // resolution integrates the same trajectory. The drift is the only
    // discretization error source (the noise enters exactly), so the sup
    // gap shrinks roughly linearly in the step.
    const ModelParams params{0.3, 1.0, HurstParam{0.6}};
    const std::size_t n_fine = 1u << 12;
    const TimeGrid fine{0.9, n_fine};
    RngStream s = RngStream::for_replication(33, 5);
    const GaussianPath path = sample_davies_harte(params.hurst, fine, s);

    std::vector<double> sups;
    for (std::size_t stride : {4u, 2u, 1u}) {
        GaussianPath sub;
        sub.grid = TimeGrid{0.9, n_fine / stride};
        sub.hurst = path.hurst;
        for (std::size_t i = 0; i <= n_fine; i += stride) sub.values.push_back(path.values[i]);
        const BridgePaths b = build_bridge(sub, params);
        const std::vector<double> euler = euler_bridge(sub, params);
        double sup = 0.0;
        for (std::size_t i = 0; i < euler.size(); ++i) {
            sup = std::max(sup, std::abs(euler[i] - b.x[i]));
        }
        sups.push_back(sup);
    }
    CHECK(sups[1] < sups[0]);
    CHECK(sups[2] < sups[1]);
    CHECK(sups[0] / sups[2] > 2.0);  // two halvings of the step
}

TEST_CASE("shared weight tables change nothing") {
    const ModelParams params{0.35, 1.0, HurstParam{0.8}};
    const TimeGrid grid{0.95, 256};
    const BridgeWeights weights(grid, params);
    RngStream s1 = RngStream::for_replication(44, 1);
    RngStream s2 = RngStream::for_replication(44, 1);
    const GaussianPath p1 = sample_davies_harte(params.hurst, grid, s1);
    const GaussianPath p2 = sample_davies_harte(params.hurst, grid, s2);
    const BridgePaths with = build_bridge(p1, params, &weights);
    const BridgePaths without = build_bridge(p2, params, nullptr);
    for (std::size_t i = 0; i < with.x.size(); ++i) {
        CHECK(with.x[i] == without.x[i]);
        CHECK(with.denom[i] == without.denom[i]);
    }
}

TEST_CASE("mismatched weight tables and horizons are rejected") {
    const ModelParams params{0.35, 1.0, HurstParam{0.8}};
    const TimeGrid grid{0.95, 256};
    RngStream s = RngStream::for_replication(44, 2);
    const GaussianPath path = sample_davies_harte(params.hurst, grid, s);

    const BridgeWeights other_grid(TimeGrid{0.9, 256}, params);
    CHECK_THROWS_AS(build_bridge(path, params, &other_grid), std::domain_error);

    const ModelParams other_alpha{0.4, 1.0, HurstParam{0.8}};
    const BridgeWeights wrong_alpha(grid, other_alpha);
    CHECK_THROWS_AS(build_bridge(path, params, &wrong_alpha), std::domain_error);

    // The grid must stay strictly inside [0, T).
    GaussianPath at_horizon = path;
    at_horizon.grid = TimeGrid{1.0, 256};
    at_horizon.values = at_horizon.grid.times();
    CHECK_THROWS_AS(build_bridge(at_horizon, params), std::domain_error);
}

TEST_CASE("model parameter validation") {
    CHECK_THROWS_AS((ModelParams{-0.1, 1.0, HurstParam{0.7}}.validate()),
                    std::domain_error);
    CHECK_THROWS_AS((ModelParams{0.3, 0.0, HurstParam{0.7}}.validate()),
                    std::domain_error);
    CHECK_THROWS_AS((ModelParams{0.3, 1.0, HurstParam{0.3}}.require_analysis_hurst()),
                    std::domain_error);
    ModelParams ok{0.3, 1.0, HurstParam{0.5}};
    ok.validate();
    ok.require_analysis_hurst();  // the Brownian boundary is part of the analysis range
}

TEST_SUITE_END();
