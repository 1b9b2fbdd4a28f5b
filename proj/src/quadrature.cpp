#include "fracbridge/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fracbridge::quad {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Cell {
    double a;
    double b;
    double value;
    double error;
};

// Evaluates the GK15 pair on [a,b] and returns the Kronrod value with the
// usual QUADPACK error estimate (difference against Gauss, damped by the
// integrand's mean absolute deviation so smooth cells are not over-split).
template <typename F>
Cell gk15(const F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv1[7];
    double fv2[7];
    const double fc = f(centre);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double dx = half * kXgk[jtw];
        fv1[jtw] = f(centre - dx);
        fv2[jtw] = f(centre + dx);
        const double fsum = fv1[jtw] + fv2[jtw];
        resg += kWg[j] * fsum;
        resk += kWgk[jtw] * fsum;
        resabs += kWgk[jtw] * (std::abs(fv1[jtw]) + std::abs(fv2[jtw]));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double dx = half * kXgk[jtwm1];
        fv1[jtwm1] = f(centre - dx);
        fv2[jtwm1] = f(centre + dx);
        const double fsum = fv1[jtwm1] + fv2[jtwm1];
        resk += kWgk[jtwm1] * fsum;
        resabs += kWgk[jtwm1] * (std::abs(fv1[jtwm1]) + std::abs(fv2[jtwm1]));
    }

    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }
    resabs *= std::abs(half);
    resasc *= std::abs(half);

    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50) {
        err = std::max(err, eps50 * resabs);
    }
    if (!std::isfinite(resk)) {
        throw QuadratureError("integrand produced a non-finite value", resk, err);
    }
    return Cell{a, b, resk * half, err};
}

// Shared refinement driver. Each pass splits every cell whose local error
// exceeds an equal share of the remaining tolerance, so isolated kinks get
// bisected to depth max_refinements while smooth regions stay coarse.
template <typename F>
double refine(const F& f, double a, double b, const QuadratureSpec& spec) {
    constexpr std::size_t kMaxCells = 20000;
    std::vector<Cell> cells;
    cells.push_back(gk15(f, a, b));

    double total = cells.front().value;
    double err = cells.front().error;
    for (int pass = 0; pass < spec.max_refinements; ++pass) {
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (err <= tol) {
            return total;
        }
        if (cells.size() >= kMaxCells) {
            break;
        }
        const double threshold = 0.5 * tol / static_cast<double>(cells.size());
        std::vector<Cell> next;
        next.reserve(2 * cells.size());
        for (const Cell& cell : cells) {
            if (cell.error <= threshold) {
                next.push_back(cell);
            } else {
                const double mid = 0.5 * (cell.a + cell.b);
                next.push_back(gk15(f, cell.a, mid));
                next.push_back(gk15(f, mid, cell.b));
            }
        }
        cells = std::move(next);
        total = 0.0;
        err = 0.0;
        for (const Cell& cell : cells) {
            total += cell.value;
            err += cell.error;
        }
    }
    if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        return total;
    }
    throw QuadratureError("quadrature did not converge within the refinement budget",
                          total, err);
}

// Double-exponential change of variable for [a,b]: x = c + s*tanh((pi/2)sinh(sigma)).
// Endpoint distances shrink double-exponentially in sigma, so integrable
// endpoint singularities become smooth, rapidly decaying tails. kSigmaMax is
// chosen so the untransformed weight underflows before the distances do.
constexpr double kSigmaMax = 6.5;

struct DeNode {
    double x;
    double dist_a;
    double dist_b;
    double weight;  // dx/dsigma; zero marks a node too far in the tail to matter
};

DeNode de_node(double sigma, double centre, double halfwidth) {
    const double u = 1.5707963267948966 * std::sinh(sigma);
    const double au = std::abs(u);
    const double eu = std::exp(-2.0 * au);
    const double denom = 1.0 + eu;
    const double tanh_au = (1.0 - eu) / denom;
    const double dist_near = halfwidth * 2.0 * eu / denom;
    const double dist_far = halfwidth * 2.0 / denom;
    // weight = s * (pi/2) cosh(sigma) sech^2(u), with sech(u) = 2e^{-|u|}/(1+e^{-2|u|})
    // so the tail underflows to zero instead of overflowing cosh(u) first.
    const double sech_u = 2.0 * std::exp(-au) / denom;
    const double weight =
        halfwidth * 1.5707963267948966 * std::cosh(sigma) * sech_u * sech_u;
    DeNode node;
    if (u >= 0.0) {
        node.x = centre + halfwidth * tanh_au;
        node.dist_a = dist_far;
        node.dist_b = dist_near;
    } else {
        node.x = centre - halfwidth * tanh_au;
        node.dist_a = dist_near;
        node.dist_b = dist_far;
    }
    node.weight = weight;
    if (node.dist_a <= 0.0 || node.dist_b <= 0.0) {
        node.weight = 0.0;
    }
    return node;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
        throw std::invalid_argument("QuadratureSpec: abs_tol must be positive and finite");
    }
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) {
        throw std::invalid_argument("QuadratureSpec: rel_tol must be positive and finite");
    }
    if (max_refinements < 1) {
        throw std::invalid_argument("QuadratureSpec: max_refinements must be at least 1");
    }
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    spec.validate();
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("integrate: require finite a <= b");
    }
    if (a == b) {
        return 0.0;
    }
    return refine([&f](double x) { return f(x); }, a, b, spec);
}

double integrate_de(const DistanceIntegrand& f, double a, double b,
                    const QuadratureSpec& spec) {
    spec.validate();
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("integrate_de: require finite a <= b");
    }
    if (a == b) {
        return 0.0;
    }
    const double centre = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    auto transformed = [&](double sigma) {
        const DeNode node = de_node(sigma, centre, halfwidth);
        if (node.weight == 0.0) {
            return 0.0;
        }
        return f(node.x, node.dist_a, node.dist_b) * node.weight;
    };
    return refine(transformed, -kSigmaMax, kSigmaMax, spec);
}

double integrate_de(const std::function<double(double)>& f, double a, double b,
                    const QuadratureSpec& spec) {
    return integrate_de(
        [&f, a, b](double x, double /*dist_a*/, double /*dist_b*/) {
            // Keep plain handles strictly inside (a,b); nodes deep in the tail
            // would otherwise round onto an endpoint the handle may not accept.
            double xi = x;
            if (xi <= a) {
                xi = std::nextafter(a, b);
            } else if (xi >= b) {
                xi = std::nextafter(b, a);
            }
            return f(xi);
        },
        a, b, spec);
}

}  // namespace fracbridge::quad
