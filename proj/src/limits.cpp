#include "fracbridge/limits.hpp"

#include <cmath>
#include <stdexcept>

#include "fracbridge/specialfn.hpp"

namespace fracbridge {

namespace {

bool near(double x, double target) {
    return std::abs(x - target) <= kRegimeBoundaryTol;
}

void require_analysis_domain(const ModelParams& params) {
    params.validate();
    params.require_analysis_hurst();
}

}  // namespace

std::string regime_label(Regime regime) {
    switch (regime) {
        case Regime::r1_cauchy:
            return "R1_cauchy";
        case Regime::r2_log_cauchy:
            return "R2_log_cauchy";
        case Regime::r3_as_random:
            return "R3_as_random";
        case Regime::r4_as_half:
            return "R4_as_half";
        case Regime::nc_half:
            return "NC_half";
        case Regime::b9_brownian:
            return "B9";
        case Regime::b11_brownian:
            return "B11";
    }
    throw std::logic_error("regime_label: unreachable");
}

Regime classify(const ModelParams& params) {
    require_analysis_domain(params);
    const double alpha = params.alpha;
    const double h = params.hurst.h;

    if (near(h, 0.5)) {
        if (near(alpha, 0.5)) {
            throw std::domain_error(
                "classify: Brownian alpha = 1/2 has no closed-form limit law and is "
                "out of scope");
        }
        return alpha < 0.5 ? Regime::b9_brownian : Regime::b11_brownian;
    }

    if (near(alpha, 0.5)) {
        return Regime::r4_as_half;
    }
    if (alpha > 0.5) {
        return Regime::nc_half;
    }
    const double boundary = 1.0 - h;
    if (near(alpha, boundary)) {
        return Regime::r2_log_cauchy;
    }
    return alpha < boundary ? Regime::r1_cauchy : Regime::r3_as_random;
}

double var_xi_terminal(const ModelParams& params) {
    require_analysis_domain(params);
    const double alpha = params.alpha;
    const double h = params.hurst.h;
    const double t = params.horizon_t;
    if (!(alpha < h)) {
        throw std::domain_error("var_xi_terminal: requires alpha < H (xi_T not in L2 otherwise)");
    }
    if (near(h, 0.5)) {
        return std::pow(t, 1.0 - 2.0 * alpha) / (1.0 - 2.0 * alpha);
    }
    return h * (2.0 * h - 1.0) / (h - alpha) * std::pow(t, 2.0 * h - 2.0 * alpha) *
           beta_function(1.0 - alpha, 2.0 * h - 1.0);
}

double aux_gaussian_scale_r1(const ModelParams& params) {
    if (classify(params) != Regime::r1_cauchy) {
        throw std::domain_error("aux_gaussian_scale_r1: requires 0 < alpha < 1-H");
    }
    const double alpha = params.alpha;
    const double h = params.hurst.h;
    return (1.0 - 2.0 * alpha) *
           std::sqrt(h * (2.0 * h - 1.0) *
                     beta_function(2.0 - alpha - 2.0 * h, 2.0 * h - 1.0) /
                     (1.0 - h - alpha));
}

double aux_gaussian_scale_r2(const ModelParams& params) {
    if (classify(params) != Regime::r2_log_cauchy) {
        throw std::domain_error("aux_gaussian_scale_r2: requires alpha = 1-H");
    }
    const double h = params.hurst.h;
    return std::pow(2.0 * h - 1.0, 1.5) *
           std::sqrt(2.0 * h * beta_function(1.0 - h, 2.0 * h - 1.0));
}

double cauchy_scale_r1(const ModelParams& params) {
    if (classify(params) != Regime::r1_cauchy) {
        throw std::domain_error("cauchy_scale_r1: requires 0 < alpha < 1-H");
    }
    const double alpha = params.alpha;
    const double h = params.hurst.h;
    const double t = params.horizon_t;
    return std::pow(t, alpha - h) * (1.0 - 2.0 * alpha) *
           std::sqrt((h - alpha) * beta_function(2.0 - 2.0 * h - alpha, 2.0 * h - 1.0) /
                     ((1.0 - h - alpha) * beta_function(1.0 - alpha, 2.0 * h - 1.0)));
}

double cauchy_scale_r2(const ModelParams& params) {
    if (classify(params) != Regime::r2_log_cauchy) {
        throw std::domain_error("cauchy_scale_r2: requires alpha = 1-H");
    }
    const double h = params.hurst.h;
    const double t = params.horizon_t;
    return std::pow(t, 1.0 - 2.0 * h) * std::pow(2.0 * h - 1.0, 1.5) *
           std::sqrt(2.0 * beta_function(1.0 - h, 2.0 * h - 1.0) /
                     beta_function(h, 2.0 * h - 1.0));
}

LimitConstants brownian_constants(double alpha, double horizon_t) {
    ModelParams params{alpha, horizon_t, HurstParam{0.5}};
    const Regime regime = classify(params);  // rejects alpha = 1/2

    LimitConstants out;
    out.regime = regime;
    if (regime == Regime::b9_brownian) {
        out.cauchy_scale = std::pow(horizon_t, alpha - 0.5) * (1.0 - 2.0 * alpha);
        out.var_xi_terminal = var_xi_terminal(params);
    } else {
        out.gauss_variance = 2.0 * alpha - 1.0;
        out.as_limit = 0.5;
    }
    return out;
}

LimitConstants constants(const ModelParams& params) {
    const Regime regime = classify(params);
    if (regime == Regime::b9_brownian || regime == Regime::b11_brownian) {
        return brownian_constants(params.alpha, params.horizon_t);
    }

    LimitConstants out;
    out.regime = regime;
    if (params.alpha < params.hurst.h) {
        out.var_xi_terminal = var_xi_terminal(params);
    }
    switch (regime) {
        case Regime::r1_cauchy:
            out.cauchy_scale = cauchy_scale_r1(params);
            out.aux_gaussian_scale = aux_gaussian_scale_r1(params);
            break;
        case Regime::r2_log_cauchy:
            out.cauchy_scale = cauchy_scale_r2(params);
            out.aux_gaussian_scale = aux_gaussian_scale_r2(params);
            break;
        case Regime::r3_as_random:
            // Limit is the path functional (1-2 alpha) eta_T / xi_T^2; no
            // deterministic constant exists.
            break;
        case Regime::r4_as_half:
            out.as_limit = 0.5;
            break;
        case Regime::nc_half:
            out.as_limit = 0.5;
            break;
        default:
            throw std::logic_error("constants: unreachable");
    }
    return out;
}

}  // namespace fracbridge
