#ifndef FRACBRIDGE_QUADRATURE_HPP
#define FRACBRIDGE_QUADRATURE_HPP

#include <functional>
#include <stdexcept>

namespace fracbridge::quad {

// Tolerances and work budget for the adaptive integrators. max_refinements
// bounds the number of global refinement passes; each pass may split every
// interval whose local error estimate is above its share of the tolerance.
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_refinements = 30;

    void validate() const;
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error) {}
    double estimate() const { return estimate_; }
    double error_bound() const { return error_; }

  private:
    double estimate_;
    double error_;
};

// Integrand evaluated at x together with the exact distances x-a and b-x.
// Integrands with endpoint singularities should be written in terms of the
// distances; computing b-x from a rounded x loses all precision once the
// node is within a few ulp of the endpoint.
using DistanceIntegrand = std::function<double(double x, double dist_a, double dist_b)>;

// Globally adaptive Gauss-Kronrod 15 on [a,b]. Suited to smooth or
// piecewise-smooth integrands; endpoint singularities converge slowly here,
// use integrate_de for those.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

// Adaptive GK15 in a double-exponential transformed variable. Handles
// integrable endpoint singularities at either end of [a,b]; interior kinks
// are still localized by the adaptive subdivision.
double integrate_de(const std::function<double(double)>& f, double a, double b,
                    const QuadratureSpec& spec = {});

// Distance-aware variant of integrate_de. The only form that can resolve
// strong endpoint singularities (exponents near -1) to full precision.
double integrate_de(const DistanceIntegrand& f, double a, double b,
                    const QuadratureSpec& spec = {});

}  // namespace fracbridge::quad

#endif
