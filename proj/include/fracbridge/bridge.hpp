#ifndef FRACBRIDGE_BRIDGE_HPP
#define FRACBRIDGE_BRIDGE_HPP

#include <vector>

#include "fracbridge/fbm.hpp"

namespace fracbridge {

// Model triple for dX_t = -alpha X_t/(T - t) dt + dB_t on [0, T).
struct ModelParams {
    double alpha = 0.0;
    double horizon_t = 1.0;
    HurstParam hurst;

    // Sampling-level validation; estimation additionally needs h >= 1/2,
    // checked by require_analysis_hurst().
    void validate() const;
    void require_analysis_hurst() const;
};

// Derived trajectories on the simulation grid:
//   xi_t    = int_0^t (T-s)^{-alpha} dB_s          (left-point sums)
//   eta_t   = int_0^t (T-u)^{alpha-1} xi_u dB_u    (left-point sums)
//   x_t     = (T-t)^alpha xi_t                     (exact identity, per node)
//   denom_t = int_0^t (T-u)^{2alpha-2} xi_u^2 du   (trapezoid)
struct BridgePaths {
    TimeGrid grid;
    ModelParams params;
    std::vector<double> xi;
    std::vector<double> eta;
    std::vector<double> x;
    std::vector<double> denom;
};

// (T - t_i)^{-alpha} and (T - t_i)^{alpha-1} for every node. All other path
// weights are cheap products of these two, and building the table once per
// (grid, params) keeps the per-replication cost free of pow() calls.
struct BridgeWeights {
    TimeGrid grid;
    ModelParams params;
    std::vector<double> w_xi;   // (T - t_i)^{-alpha}
    std::vector<double> w_eta;  // (T - t_i)^{alpha-1}

    BridgeWeights(const TimeGrid& grid, const ModelParams& params);
};

std::vector<double> build_xi(const GaussianPath& path, const ModelParams& params);
std::vector<double> build_eta(const GaussianPath& path, const std::vector<double>& xi,
                              const ModelParams& params);

// All four derived paths in one pass. Pass a precomputed weight table when
// building many replications on the same grid; nullptr recomputes it.
BridgePaths build_bridge(const GaussianPath& path, const ModelParams& params,
                         const BridgeWeights* weights = nullptr);

// Euler-Maruyama solution of the SDE itself, as an independent cross-check
// of the explicit representation x_t = (T-t)^alpha xi_t.
std::vector<double> euler_bridge(const GaussianPath& path, const ModelParams& params);

}  // namespace fracbridge

#endif
