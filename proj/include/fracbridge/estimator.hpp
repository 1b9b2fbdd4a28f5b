#ifndef FRACBRIDGE_ESTIMATOR_HPP
#define FRACBRIDGE_ESTIMATOR_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "fracbridge/bridge.hpp"
#include "fracbridge/limits.hpp"

namespace fracbridge {

// Geometric ladder of evaluation times t_k = T - eps_k approaching the
// horizon; every asymptotic claim under test is an "as t -> T" statement
// read along this ladder.
struct EvalLadder {
    double horizon_t = 1.0;
    std::vector<double> epsilons;  // strictly decreasing, all in (0, T)

    static EvalLadder geometric(double horizon_t, int num_levels);

    void validate() const;

    // Largest grid index with time <= T - eps_k, per ladder entry. Throws if
    // a ladder time is not within one grid step of its node (grid too coarse
    // or too short for this ladder).
    std::vector<std::size_t> snap_indices(const TimeGrid& grid) const;
};

struct EstimatorLadder {
    struct Entry {
        double epsilon = 0.0;  // nominal T - t_k
        double t = 0.0;        // snapped grid time actually evaluated
        std::size_t index = 0;
        double alpha_hat_direct = 0.0;
        double alpha_hat_identity = 0.0;
        double error = 0.0;  // alpha - alpha_hat_direct
        std::map<std::string, double> renormalized;
    };

    ModelParams params;
    std::vector<Entry> entries;
};

// Least-squares estimator at time t from the ratio of path integrals,
// -int_0^t X/(T-u) dX / int_0^t X^2/(T-u)^2 du, with a left-point sum for
// the dX numerator and a trapezoid for the du denominator.
double alpha_hat_direct(const BridgePaths& paths, double t);

// Same estimator through the pathwise change-of-variable identity:
// 1/2 - xi_t^2 (T-t)^{2 alpha - 1} / (2 denom(t)); touches no dX increments,
// so agreement with the direct form is a genuine cross-check of the
// discretization.
double alpha_hat_identity(const BridgePaths& paths, double t);

// Both estimator forms at every ladder time in one sweep over the grid.
EstimatorLadder compute_ladder(const BridgePaths& paths, const EvalLadder& ladder);

// Fills Entry::renormalized with the regime's rate-corrected error:
//   R1:  (T-t)^{alpha-H} (alpha - hat)
//   R2:  (T-t)^{1-2H}/sqrt|log(T-t)| (alpha - hat)
//   R3:  (T-t)^{2 alpha - 1} (alpha - hat)
//   R4:  |log(T-t)| (alpha - hat)
//   B9:  (T-t)^{alpha-1/2} (alpha - hat)
//   B11: sqrt|log(T-t)| (alpha - hat)
// NC_half has no rate result, so nothing is filled there.
EstimatorLadder& renormalized_errors(EstimatorLadder& ladder);

}  // namespace fracbridge

#endif
