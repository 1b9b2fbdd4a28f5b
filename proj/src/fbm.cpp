#include "fracbridge/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "fracbridge/fft.hpp"

namespace fracbridge {

namespace {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

}  // namespace

void HurstParam::validate() const {
    if (!(h > 0.0) || !(h < 1.0)) {
        throw std::domain_error("HurstParam: h must lie in (0, 1)");
    }
}

void TimeGrid::validate() const {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw std::domain_error("TimeGrid: t_max must be positive and finite");
    }
    if (n_steps < 1) {
        throw std::domain_error("TimeGrid: need at least one step");
    }
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i) {
        out[i] = time_at(i);
    }
    return out;
}

double covariance(HurstParam h, double s, double t) {
    h.validate();
    if (s < 0.0 || t < 0.0) {
        throw std::domain_error("covariance: time arguments must be nonnegative");
    }
    const double two_h = 2.0 * h.h;
    return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(std::abs(t - s), two_h));
}

double fgn_covariance(HurstParam h, double delta, std::size_t lag) {
    h.validate();
    if (!(delta > 0.0)) {
        throw std::domain_error("fgn_covariance: delta must be positive");
    }
    const double two_h = 2.0 * h.h;
    const double scale = std::pow(delta, two_h);
    if (lag == 0) {
        return scale;
    }
    if (lag == 1) {
        return 0.5 * scale * (std::pow(2.0, two_h) - 2.0);
    }
    // (k+1)^{2H} - 2k^{2H} + (k-1)^{2H} evaluated as
    // k^{2H} * (expm1(2H log1p(1/k)) + expm1(2H log1p(-1/k))): the second
    // difference is ~ k^{2H-2}, a factor k^2 below the raw terms, and the
    // naive form loses those digits to cancellation already at k ~ 10^5.
    const double k = static_cast<double>(lag);
    const double inv_k = 1.0 / k;
    const double bracket = std::expm1(two_h * std::log1p(inv_k)) +
                           std::expm1(two_h * std::log1p(-inv_k));
    return 0.5 * scale * std::pow(k, two_h) * bracket;
}

// ---------------------------------------------------------------------------
// Davies-Harte

struct DaviesHarteSampler::Impl {
    HurstParam h;
    TimeGrid grid;
    Fft fft;
    // sqrt(lambda_k / m): pre-divided so the sampled spectrum can be fed to an
    // unnormalized forward DFT directly.
    std::vector<double> scale;

    Impl(HurstParam hurst, const TimeGrid& g)
        : h(hurst), grid(g), fft(2 * g.n_steps) {
        const std::size_t n = grid.n_steps;
        const std::size_t m = 2 * n;
        const double delta = grid.delta();

        // Circulant embedding of the increment covariance: first row
        // c_j = gamma(j) for j <= n, gamma(m - j) beyond.
        std::vector<std::complex<double>> c(m);
        for (std::size_t j = 0; j <= n; ++j) {
            c[j] = fgn_covariance(h, delta, j);
        }
        for (std::size_t j = n + 1; j < m; ++j) {
            c[j] = c[m - j];
        }
        fft.forward(c.data());

        double max_eig = 0.0;
        double min_eig = 0.0;
        for (const auto& e : c) {
            max_eig = std::max(max_eig, e.real());
            min_eig = std::min(min_eig, e.real());
        }
        if (min_eig < -1e-9 * max_eig) {
            throw std::runtime_error(
                "Davies-Harte embedding failed: circulant eigenvalue " +
                std::to_string(min_eig) + " below -1e-9 * " + std::to_string(max_eig) +
                "; fall back to sample_hosking");
        }
        scale.resize(m);
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t k = 0; k < m; ++k) {
            scale[k] = std::sqrt(std::max(0.0, c[k].real()) * inv_m);
        }
    }
};

DaviesHarteSampler::DaviesHarteSampler(HurstParam h, const TimeGrid& grid) {
    h.validate();
    grid.validate();
    if (grid.n_steps < 2 || !is_power_of_two(grid.n_steps)) {
        throw std::domain_error("DaviesHarteSampler: n_steps must be a power of two >= 2");
    }
    impl_ = std::make_unique<Impl>(h, grid);
}

DaviesHarteSampler::~DaviesHarteSampler() = default;
DaviesHarteSampler::DaviesHarteSampler(DaviesHarteSampler&&) noexcept = default;
DaviesHarteSampler& DaviesHarteSampler::operator=(DaviesHarteSampler&&) noexcept = default;

GaussianPath DaviesHarteSampler::sample(rng::RngStream& stream) const {
    const std::size_t n = impl_->grid.n_steps;
    const std::size_t m = 2 * n;
    const auto& scale = impl_->scale;

    // Hermitian spectrum with independent N(0,1) weights; draw order is
    // fixed (k = 0, k = m/2, then the k / m-k pairs ascending) so a path is a
    // pure function of its stream.
    std::vector<std::complex<double>> a(m);
    a[0] = scale[0] * stream.normal();
    a[m / 2] = scale[m / 2] * stream.normal();
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    for (std::size_t k = 1; k < m / 2; ++k) {
        const double re = stream.normal() * kInvSqrt2;
        const double im = stream.normal() * kInvSqrt2;
        a[k] = std::complex<double>(re, im) * scale[k];
        a[m - k] = std::conj(a[k]);
    }
    impl_->fft.forward(a.data());

    GaussianPath path;
    path.grid = impl_->grid;
    path.hurst = impl_->h;
    path.values.resize(n + 1);
    path.values[0] = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i].real();
        path.values[i + 1] = acc;
    }
    return path;
}

GaussianPath sample_davies_harte(HurstParam h, const TimeGrid& grid, rng::RngStream& stream) {
    return DaviesHarteSampler(h, grid).sample(stream);
}

// ---------------------------------------------------------------------------
// Hosking (Durbin-Levinson conditional sampling)

GaussianPath sample_hosking(HurstParam h, const TimeGrid& grid, rng::RngStream& stream) {
    h.validate();
    grid.validate();
    const std::size_t n = grid.n_steps;
    const double delta = grid.delta();

    std::vector<double> gamma(n);
    for (std::size_t k = 0; k < n; ++k) {
        gamma[k] = fgn_covariance(h, delta, k);
    }

    // One normal per increment, in time order.
    std::vector<double> fgn(n);
    std::vector<double> phi;      // phi[j] multiplies the (j+1)-th most recent value
    std::vector<double> phi_prev;
    phi.reserve(n);
    phi_prev.reserve(n);

    double v = gamma[0];
    fgn[0] = std::sqrt(v) * stream.normal();
    for (std::size_t i = 1; i < n; ++i) {
        double num = gamma[i];
        for (std::size_t k = 1; k < i; ++k) {
            num -= phi_prev[k - 1] * gamma[i - k];
        }
        const double kappa = num / v;

        phi.resize(i);
        for (std::size_t k = 1; k < i; ++k) {
            phi[k - 1] = phi_prev[k - 1] - kappa * phi_prev[i - k - 1];
        }
        phi[i - 1] = kappa;

        v *= (1.0 - kappa * kappa);
        if (!(v > 0.0)) {
            throw std::runtime_error("sample_hosking: innovation variance collapsed");
        }

        double mean = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            mean += phi[j] * fgn[i - 1 - j];
        }
        fgn[i] = mean + std::sqrt(v) * stream.normal();
        phi_prev = phi;
    }

    GaussianPath path;
    path.grid = grid;
    path.hurst = h;
    path.values.resize(n + 1);
    path.values[0] = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += fgn[i];
        path.values[i + 1] = acc;
    }
    return path;
}

// ---------------------------------------------------------------------------
// Dense Cholesky oracle

std::vector<double> sample_cholesky_oracle(HurstParam h, const std::vector<double>& points,
                                           rng::RngStream& stream) {
    h.validate();
    if (points.empty() || points.size() > 4096) {
        throw std::domain_error("sample_cholesky_oracle: need 1..4096 points");
    }
    if (points.front() <= 0.0) {
        throw std::domain_error("sample_cholesky_oracle: points must be strictly positive");
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i] > points[i - 1])) {
            throw std::domain_error("sample_cholesky_oracle: points must be strictly increasing");
        }
    }

    const Eigen::Index m = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd cov(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double value = covariance(h, points[static_cast<std::size_t>(i)],
                                            points[static_cast<std::size_t>(j)]);
            cov(i, j) = value;
            cov(j, i) = value;
        }
    }

    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error(
            "sample_cholesky_oracle: covariance matrix is not numerically positive definite");
    }

    Eigen::VectorXd z(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        z(i) = stream.normal();
    }
    const Eigen::VectorXd sample = llt.matrixL() * z;
    return std::vector<double>(sample.data(), sample.data() + m);
}

}  // namespace fracbridge
