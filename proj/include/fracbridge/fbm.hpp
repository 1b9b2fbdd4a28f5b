#ifndef FRACBRIDGE_FBM_HPP
#define FRACBRIDGE_FBM_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "fracbridge/rng.hpp"

namespace fracbridge {

// Hurst index. Sampling accepts the full range (0,1); the estimation modules
// restrict to [1/2, 1) themselves because only the analysis needs it.
struct HurstParam {
    double h = 0.5;

    void validate() const;
};

// Uniform grid 0 = t_0 < ... < t_n = t_max. The process under study lives on
// [0, T) only, so t_max is always strictly below the model horizon; that
// comparison is enforced where the horizon is known (bridge/estimator).
struct TimeGrid {
    double t_max = 0.0;
    std::size_t n_steps = 0;

    void validate() const;

    double delta() const { return t_max / static_cast<double>(n_steps); }

    // times()[i] = t_max * i/n; the i/n quotient keeps times()[n] == t_max
    // exactly and the spacing uniform to ulp scale.
    double time_at(std::size_t i) const {
        return t_max * (static_cast<double>(i) / static_cast<double>(n_steps));
    }
    std::vector<double> times() const;

    bool operator==(const TimeGrid&) const = default;
};

// A sampled fBm trajectory on a grid: values[i] = B at times()[i], values[0] = 0.
// seed_tag records which RNG stream produced it, purely as provenance.
struct GaussianPath {
    TimeGrid grid;
    HurstParam hurst;
    std::vector<double> values;
    std::uint64_t seed_tag = 0;
};

// fBm covariance E[B_s B_t] = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
double covariance(HurstParam h, double s, double t);

// Autocovariance of the stationary increment sequence at lag k on spacing
// delta: ( |k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H} ) * delta^{2H} / 2, evaluated
// cancellation-free for large lags.
double fgn_covariance(HurstParam h, double delta, std::size_t lag);

// Circulant-embedding (Davies-Harte) sampler. The embedding eigenvalues
// depend only on (h, grid), so construct once and draw many paths; sample()
// is safe to call concurrently from several threads, each with its own
// stream. Grid sizes must be powers of two (>= 2) to keep the transform
// exact and fast.
class DaviesHarteSampler {
  public:
    DaviesHarteSampler(HurstParam h, const TimeGrid& grid);
    ~DaviesHarteSampler();
    DaviesHarteSampler(DaviesHarteSampler&&) noexcept;
    DaviesHarteSampler& operator=(DaviesHarteSampler&&) noexcept;

    GaussianPath sample(rng::RngStream& stream) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-shot wrappers with the documented draw orders. All three samplers
// produce the same law; Hosking is the O(n^2) FFT-free fallback, and the
// Cholesky sampler is the dense ground-truth oracle used in tests.
GaussianPath sample_davies_harte(HurstParam h, const TimeGrid& grid, rng::RngStream& stream);
GaussianPath sample_hosking(HurstParam h, const TimeGrid& grid, rng::RngStream& stream);

// Exact joint sample of (B_{s_1}, ..., B_{s_m}) for arbitrary strictly
// increasing points s_i > 0 (m <= 4096), via dense Cholesky factorization of
// the covariance matrix. Throws if the matrix is not numerically PSD, which
// would signal a covariance bug, not bad luck.
std::vector<double> sample_cholesky_oracle(HurstParam h, const std::vector<double>& points,
                                           rng::RngStream& stream);

}  // namespace fracbridge

#endif
