#ifndef FRACBRIDGE_LIMITS_HPP
#define FRACBRIDGE_LIMITS_HPP

#include <optional>
#include <string>

#include "fracbridge/bridge.hpp"

namespace fracbridge {

// Asymptotic regime of the estimation error as t -> T, classified from
// (alpha, H). The fractional cases partition alpha against 1-H and 1/2; the
// two Brownian cases (h = 1/2) sit apart because their constants differ.
enum class Regime {
    r1_cauchy,       // 0 < alpha < 1-H: Cauchy limit at rate (T-t)^{alpha-H}
    r2_log_cauchy,   // alpha = 1-H: Cauchy limit with a log-rate correction
    r3_as_random,    // 1-H < alpha < 1/2: a.s. limit, random per path
    r4_as_half,      // alpha = 1/2: |log(T-t)| (alpha - hat) -> 1/2 a.s.
    nc_half,         // alpha > 1/2: hat -> 1/2, no rate available
    b9_brownian,     // h = 1/2, alpha < 1/2: Cauchy limit
    b11_brownian,    // h = 1/2, alpha > 1/2: Gaussian limit under sqrt-log rate
};

std::string regime_label(Regime regime);

struct LimitConstants {
    Regime regime = Regime::r1_cauchy;
    std::optional<double> cauchy_scale;
    std::optional<double> as_limit;            // deterministic a.s. target (1/2) where one exists
    std::optional<double> var_xi_terminal;     // Var xi_T, defined for alpha < H
    std::optional<double> aux_gaussian_scale;  // std dev of the auxiliary Gaussian numerator
    std::optional<double> gauss_variance;      // Brownian alpha > 1/2 limit variance
};

// Boundary comparisons (alpha vs 1-H and 1/2) use this tolerance: a user
// typing alpha = 1 - h means the boundary regime, not a value 1e-16 away.
inline constexpr double kRegimeBoundaryTol = 1e-12;

Regime classify(const ModelParams& params);

// Var xi_T = H(2H-1)/(H-alpha) * T^{2H-2alpha} * beta(1-alpha, 2H-1) for
// h > 1/2; continuous Brownian limit T^{1-2alpha}/(1-2alpha) at h = 1/2.
// Requires alpha < H (xi_T has no L2 limit otherwise).
double var_xi_terminal(const ModelParams& params);

// Scale of the Cauchy limit of (T-t)^{alpha-H} (alpha - hat) in regime R1.
double cauchy_scale_r1(const ModelParams& params);
// Scale of the Cauchy limit of (T-t)^{1-2H}/sqrt|log(T-t)| (alpha - hat) at
// the boundary alpha = 1-H.
double cauchy_scale_r2(const ModelParams& params);

// Standard deviations of the auxiliary Gaussian numerators (the G factor in
// the product-of-independent-variables form of the limit); the Cauchy scales
// above must equal these divided by sqrt(var_xi_terminal).
double aux_gaussian_scale_r1(const ModelParams& params);
double aux_gaussian_scale_r2(const ModelParams& params);

// Brownian-case constants (h = 1/2): Cauchy scale T^{alpha-1/2}(1-2alpha)
// for alpha < 1/2, Gaussian variance 2alpha-1 for alpha > 1/2. alpha = 1/2
// is rejected (its limit law has no closed form and is out of scope).
LimitConstants brownian_constants(double alpha, double horizon_t);

// All applicable constants for the classified regime in one record.
LimitConstants constants(const ModelParams& params);

}  // namespace fracbridge

#endif
