#include "fracbridge/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracbridge {

namespace {

constexpr double kDegenerateDenominator = 1e-300;

[[noreturn]] void throw_degenerate(double t) {
    throw std::runtime_error("estimator: degenerate denominator at t = " + std::to_string(t) +
                             " (t too small or broken path)");
}

// Running state of the direct formula's two sums, advanced node by node.
struct DirectSums {
    double numerator = 0.0;
    double trapezoid = 0.0;
    double prev_q2 = 0.0;  // q_i^2 at the last node consumed
};

void advance(DirectSums& sums, const BridgePaths& paths, double half_delta, std::size_t i) {
    // q_i = X_i / (T - t_i); both sums are built from it.
    const double remaining = paths.params.horizon_t - paths.grid.time_at(i);
    const double q = paths.x[i] / remaining;
    if (i > 0) {
        // close the trapezoid cell [t_{i-1}, t_i]
        sums.trapezoid += half_delta * (sums.prev_q2 + q * q);
    }
    sums.prev_q2 = q * q;
    sums.numerator += q * (paths.x[i + 1] - paths.x[i]);
}

}  // namespace

EvalLadder EvalLadder::geometric(double horizon_t, int num_levels) {
    EvalLadder ladder;
    ladder.horizon_t = horizon_t;
    for (int k = 1; k <= num_levels; ++k) {
        ladder.epsilons.push_back(horizon_t * std::pow(10.0, -k));
    }
    return ladder;
}

void EvalLadder::validate() const {
    if (!(horizon_t > 0.0) || !std::isfinite(horizon_t)) {
        throw std::domain_error("EvalLadder: horizon must be positive and finite");
    }
    if (epsilons.empty()) {
        throw std::domain_error("EvalLadder: need at least one epsilon");
    }
    double prev = horizon_t;
    for (double eps : epsilons) {
        if (!(eps > 0.0) || !(eps < horizon_t)) {
            throw std::domain_error("EvalLadder: epsilons must lie in (0, T)");
        }
        if (!(eps < prev)) {
            throw std::domain_error("EvalLadder: epsilons must be strictly decreasing");
        }
        prev = eps;
    }
}

std::vector<std::size_t> EvalLadder::snap_indices(const TimeGrid& grid) const {
    validate();
    grid.validate();
    const double delta = grid.delta();
    std::vector<std::size_t> indices;
    indices.reserve(epsilons.size());
    for (double eps : epsilons) {
        const double target = horizon_t - eps;
        // largest i with time_at(i) <= target; binary search avoids floating
        // division edge cases at the last node
        std::size_t lo = 0;
        std::size_t hi = grid.n_steps;
        while (lo < hi) {
            const std::size_t mid = (lo + hi + 1) / 2;
            if (grid.time_at(mid) <= target) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        // The snapped node must sit within one cell of the target AND leave
        // the realized epsilon within 10% of the requested one; otherwise the
        // grid cannot resolve this ladder level and reporting a value for it
        // would be quietly wrong by the mismatch factor.
        const double overshoot = target - grid.time_at(lo);
        if (overshoot >= delta || overshoot * 10.0 > eps) {
            throw std::domain_error(
                "EvalLadder: grid too coarse (or t_max too small) to resolve epsilon within "
                "10%; refine the grid or raise the smallest epsilon");
        }
        if (lo == 0) {
            throw std::domain_error(
                "EvalLadder: ladder time snapped to t = 0; epsilon too large");
        }
        indices.push_back(lo);
    }
    return indices;
}

double alpha_hat_direct(const BridgePaths& paths, double t) {
    EvalLadder single;
    single.horizon_t = paths.params.horizon_t;
    single.epsilons = {paths.params.horizon_t - t};
    single.validate();
    const std::size_t index = single.snap_indices(paths.grid).front();

    const double half_delta = 0.5 * paths.grid.delta();
    DirectSums sums;
    for (std::size_t i = 0; i < index; ++i) {
        advance(sums, paths, half_delta, i);
    }
    // close the final trapezoid cell at the evaluation node
    const double remaining = paths.params.horizon_t - paths.grid.time_at(index);
    const double q_end = paths.x[index] / remaining;
    const double den = sums.trapezoid + half_delta * (sums.prev_q2 + q_end * q_end);
    if (!(den > kDegenerateDenominator)) {
        throw_degenerate(t);
    }
    return -sums.numerator / den;
}

double alpha_hat_identity(const BridgePaths& paths, double t) {
    EvalLadder single;
    single.horizon_t = paths.params.horizon_t;
    single.epsilons = {paths.params.horizon_t - t};
    single.validate();
    const std::size_t index = single.snap_indices(paths.grid).front();

    const double den = paths.denom[index];
    if (!(den > kDegenerateDenominator)) {
        throw_degenerate(t);
    }
    const double remaining = paths.params.horizon_t - paths.grid.time_at(index);
    const double xi = paths.xi[index];
    return 0.5 - xi * xi * std::pow(remaining, 2.0 * paths.params.alpha - 1.0) / (2.0 * den);
}

EstimatorLadder compute_ladder(const BridgePaths& paths, const EvalLadder& ladder) {
    if (ladder.horizon_t != paths.params.horizon_t) {
        throw std::domain_error("compute_ladder: ladder horizon differs from model horizon");
    }
    const std::vector<std::size_t> indices = ladder.snap_indices(paths.grid);

    EstimatorLadder out;
    out.params = paths.params;
    out.entries.resize(indices.size());

    const double half_delta = 0.5 * paths.grid.delta();
    DirectSums sums;
    std::size_t done = 0;  // grid nodes already consumed by the running sums
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const std::size_t index = indices[k];
        for (; done < index; ++done) {
            advance(sums, paths, half_delta, done);
        }
        const double remaining = paths.params.horizon_t - paths.grid.time_at(index);
        const double q_end = paths.x[index] / remaining;
        const double den_direct = sums.trapezoid + half_delta * (sums.prev_q2 + q_end * q_end);
        const double den_identity = paths.denom[index];
        if (!(den_direct > kDegenerateDenominator) || !(den_identity > kDegenerateDenominator)) {
            throw_degenerate(paths.grid.time_at(index));
        }

        EstimatorLadder::Entry& entry = out.entries[k];
        entry.epsilon = ladder.epsilons[k];
        entry.t = paths.grid.time_at(index);
        entry.index = index;
        entry.alpha_hat_direct = -sums.numerator / den_direct;
        const double xi = paths.xi[index];
        entry.alpha_hat_identity =
            0.5 - xi * xi * std::pow(remaining, 2.0 * paths.params.alpha - 1.0) /
                      (2.0 * den_identity);
        entry.error = paths.params.alpha - entry.alpha_hat_direct;
    }
    return out;
}

EstimatorLadder& renormalized_errors(EstimatorLadder& ladder) {
    const Regime regime = classify(ladder.params);
    const std::string label = regime_label(regime);
    const double alpha = ladder.params.alpha;
    const double h = ladder.params.hurst.h;

    for (auto& entry : ladder.entries) {
        const double eps = ladder.params.horizon_t - entry.t;
        const double log_eps = std::abs(std::log(eps));
        double factor = 0.0;
        switch (regime) {
            case Regime::r1_cauchy:
                factor = std::pow(eps, alpha - h);
                break;
            case Regime::r2_log_cauchy:
                factor = std::pow(eps, 1.0 - 2.0 * h) / std::sqrt(log_eps);
                break;
            case Regime::r3_as_random:
                factor = std::pow(eps, 2.0 * alpha - 1.0);
                break;
            case Regime::r4_as_half:
                factor = log_eps;
                break;
            case Regime::b9_brownian:
                factor = std::pow(eps, alpha - 0.5);
                break;
            case Regime::b11_brownian:
                factor = std::sqrt(log_eps);
                break;
            case Regime::nc_half:
                continue;  // no rate result to renormalize against
        }
        entry.renormalized[label] = factor * entry.error;
    }
    return ladder;
}

}  // namespace fracbridge
