#ifndef FRACBRIDGE_SPECIALFN_HPP
#define FRACBRIDGE_SPECIALFN_HPP

#include <functional>

#include "fracbridge/quadrature.hpp"

namespace fracbridge {

using quad::QuadratureSpec;

// Euler beta function B(a, b) for a, b > 0, computed through log-gamma so
// large or tiny arguments neither overflow nor lose the leading digits.
double beta_function(double a, double b);

// E[B(f) B(g)] for deterministic integrands against fractional Brownian
// motion with Hurst index H in (1/2, 1):
//
//     H (2H-1) * \int_0^t \int_0^t f(u) g(v) |u - v|^(2H-2) du dv.
//
// The |u-v| factor is removed exactly by a power substitution before any
// numerics run, so the diagonal costs nothing. f and g may carry integrable
// power-law endpoint singularities; exponents much below -0.9 lose accuracy
// because a plain f(x) handle cannot be evaluated closer to an endpoint than
// one ulp.
double fbm_kernel_double_integral(const std::function<double(double)>& f,
                                  const std::function<double(double)>& g,
                                  double hurst, double t,
                                  const QuadratureSpec& spec = {});

}  // namespace fracbridge

#endif
