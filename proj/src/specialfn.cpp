#include "fracbridge/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracbridge {

double beta_function(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::domain_error("beta_function: both arguments must be positive");
    }
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double fbm_kernel_double_integral(const std::function<double(double)>& f,
                                  const std::function<double(double)>& g,
                                  double hurst, double t,
                                  const QuadratureSpec& spec) {
    if (!(hurst > 0.5) || !(hurst < 1.0)) {
        throw std::domain_error("fbm_kernel_double_integral: hurst must lie in (1/2, 1)");
    }
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::domain_error("fbm_kernel_double_integral: t must be positive and finite");
    }
    spec.validate();

    const double q = 2.0 * hurst - 1.0;

    // Fold the square onto the triangle {u < v} and substitute z = (v-u)^q:
    //
    //   \int_0^v [f(u)g(v) + f(v)g(u)] (v-u)^(q-1) du
    //     = (1/q) \int_0^{v^q} [f(v-w)g(v) + f(v)g(v-w)] dz,   w = z^(1/q),
    //
    // which carries no singularity at z = 0 however close H is to 1/2.
    // The outer pass cannot converge below the noise its integrand carries,
    // so the inner integrals are computed two orders tighter than the outer
    // target (floored near machine precision). For smooth weights the extra
    // cost is one more doubling of the inner node count.
    QuadratureSpec inner_spec = spec;
    inner_spec.abs_tol = std::max(0.01 * spec.abs_tol / std::max(t, 1.0), 1e-15);
    inner_spec.rel_tol = std::max(0.01 * spec.rel_tol, 1e-14);

    auto inner = [&](double v) {
        const double fv = f(v);
        const double gv = g(v);
        const double zmax = std::pow(v, q);
        auto integrand = [&](double z) {
            const double w = std::pow(z, 1.0 / q);
            double u = v - w;
            if (u < 0.0) {
                u = 0.0;
            }
            return f(u) * gv + fv * g(u);
        };
        const std::function<double(double)> handle(integrand);

        // Weights singular at the horizon give the substituted integrand a
        // boundary layer of width dist^q, where dist = t - v (exact once
        // v >= t/2). Two adjustments keep the inner pass convergent as the
        // outer one dives toward v = t. First, the requested accuracy is
        // relaxed in proportion to the double-exponential weight this value
        // receives outside, which also keeps the demand above the rounding
        // noise floor ulp(v)/dist that u = v - w carries near the horizon.
        // Second, the range is split at the layer so every sharp feature
        // sits at an integration endpoint, where node clustering resolves
        // layers of any width.
        const double dist = std::max(t - v, std::numeric_limits<double>::min());
        QuadratureSpec pspec = inner_spec;
        pspec.rel_tol = std::clamp(1e-13 * (t / dist), inner_spec.rel_tol,
                                   std::max(1e-2, inner_spec.rel_tol));
        pspec.abs_tol = inner_spec.abs_tol * (pspec.rel_tol / inner_spec.rel_tol);

        const double z_knee = std::pow(dist, q);
        double total;
        if (z_knee < 0.75 * zmax) {
            total = quad::integrate_de(handle, 0.0, z_knee, pspec) +
                    quad::integrate_de(handle, z_knee, zmax, pspec);
        } else {
            total = quad::integrate_de(handle, 0.0, zmax, pspec);
        }
        return total / q;
    };

    QuadratureSpec outer_spec = spec;
    outer_spec.abs_tol = 0.5 * spec.abs_tol;
    outer_spec.rel_tol = 0.5 * spec.rel_tol;
    const double triangle = quad::integrate_de(
        std::function<double(double)>(inner), 0.0, t, outer_spec);

    return hurst * q * triangle;
}

}  // namespace fracbridge
