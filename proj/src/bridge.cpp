#include "fracbridge/bridge.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace fracbridge {

namespace {

void check_grid_before_horizon(const TimeGrid& grid, const ModelParams& params) {
    grid.validate();
    params.validate();
    if (!(grid.t_max < params.horizon_t)) {
        throw std::domain_error("bridge: grid.t_max must be strictly below the horizon T");
    }
}

}  // namespace

void ModelParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::domain_error("ModelParams: alpha must be positive and finite");
    }
    if (!(horizon_t > 0.0) || !std::isfinite(horizon_t)) {
        throw std::domain_error("ModelParams: horizon_t must be positive and finite");
    }
    hurst.validate();
}

void ModelParams::require_analysis_hurst() const {
    if (!(hurst.h >= 0.5)) {
        throw std::domain_error(
            "ModelParams: estimation requires hurst.h in [1/2, 1); h = 1/2 is the "
            "Brownian special case");
    }
}

BridgeWeights::BridgeWeights(const TimeGrid& g, const ModelParams& p) : grid(g), params(p) {
    check_grid_before_horizon(g, p);
    const std::size_t n = grid.n_steps;
    w_xi.resize(n + 1);
    w_eta.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double remaining = params.horizon_t - grid.time_at(i);
        w_xi[i] = std::pow(remaining, -params.alpha);
        w_eta[i] = std::pow(remaining, params.alpha - 1.0);
    }
}

std::vector<double> build_xi(const GaussianPath& path, const ModelParams& params) {
    const BridgeWeights weights(path.grid, params);
    const std::size_t n = path.grid.n_steps;
    std::vector<double> xi(n + 1);
    xi[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xi[i + 1] = xi[i] + weights.w_xi[i] * (path.values[i + 1] - path.values[i]);
    }
    return xi;
}

std::vector<double> build_eta(const GaussianPath& path, const std::vector<double>& xi,
                              const ModelParams& params) {
    if (xi.size() != path.grid.n_steps + 1) {
        throw std::domain_error("build_eta: xi was built on a different grid");
    }
    const BridgeWeights weights(path.grid, params);
    const std::size_t n = path.grid.n_steps;
    std::vector<double> eta(n + 1);
    eta[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        eta[i + 1] = eta[i] + weights.w_eta[i] * xi[i] * (path.values[i + 1] - path.values[i]);
    }
    return eta;
}

BridgePaths build_bridge(const GaussianPath& path, const ModelParams& params,
                         const BridgeWeights* weights) {
    std::optional<BridgeWeights> local_weights;
    if (weights) {
        if (!(weights->grid == path.grid) || weights->params.alpha != params.alpha ||
            weights->params.horizon_t != params.horizon_t) {
            throw std::domain_error(
                "build_bridge: weight table built for a different grid or parameters");
        }
        check_grid_before_horizon(path.grid, params);
    } else {
        local_weights.emplace(path.grid, params);
    }
    const BridgeWeights& table = weights ? *weights : *local_weights;
    const std::size_t n = path.grid.n_steps;
    const double half_delta = 0.5 * path.grid.delta();

    BridgePaths out;
    out.grid = path.grid;
    out.params = params;
    out.xi.resize(n + 1);
    out.eta.resize(n + 1);
    out.x.resize(n + 1);
    out.denom.resize(n + 1);
    out.xi[0] = out.eta[0] = out.x[0] = out.denom[0] = 0.0;

    const auto& w_xi = table.w_xi;
    const auto& w_eta = table.w_eta;
    double prev_integrand = 0.0;  // xi_0 = 0
    for (std::size_t i = 0; i < n; ++i) {
        const double db = path.values[i + 1] - path.values[i];
        const double xi_i = out.xi[i];
        const double xi_next = xi_i + w_xi[i] * db;
        out.xi[i + 1] = xi_next;
        out.eta[i + 1] = out.eta[i] + w_eta[i] * xi_i * db;
        // (T-t)^alpha = (T-t) * (T-t)^{alpha-1}, avoiding a third pow table.
        const double remaining_next =
            params.horizon_t - path.grid.time_at(i + 1);
        out.x[i + 1] = remaining_next * w_eta[i + 1] * xi_next;
        const double integrand_next = w_eta[i + 1] * w_eta[i + 1] * xi_next * xi_next;
        out.denom[i + 1] = out.denom[i] + half_delta * (prev_integrand + integrand_next);
        prev_integrand = integrand_next;
    }
    return out;
}

std::vector<double> euler_bridge(const GaussianPath& path, const ModelParams& params) {
    check_grid_before_horizon(path.grid, params);
    const std::size_t n = path.grid.n_steps;
    const double delta = path.grid.delta();
    std::vector<double> x(n + 1);
    x[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double remaining = params.horizon_t - path.grid.time_at(i);
        const double db = path.values[i + 1] - path.values[i];
        x[i + 1] = x[i] - params.alpha * x[i] / remaining * delta + db;
    }
    return x;
}

}  // namespace fracbridge
