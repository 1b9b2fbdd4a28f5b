#ifndef FRACBRIDGE_MCHARNESS_HPP
#define FRACBRIDGE_MCHARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracbridge/estimator.hpp"
#include "fracbridge/limits.hpp"

namespace fracbridge::mc {

enum class SamplerKind { davies_harte, hosking };

// One Monte Carlo study: paths of the model sampled on a uniform grid with
// t_max = T - min(ladder epsilon), the estimator evaluated along the ladder,
// and the requested checks run on the aggregated statistics.
struct McConfig {
    ModelParams params;
    std::size_t grid_n = 0;  // power of two
    EvalLadder ladder;
    std::size_t replications = 0;
    std::uint64_t global_seed = 0;
    SamplerKind sampler = SamplerKind::davies_harte;
    std::vector<std::string> checks;

    // Test-only hook: multiplies the theoretical Cauchy/Gaussian scale fed to
    // the distributional checks, so a deliberately wrong scale can be shown
    // to fail. 1.0 in all real use.
    double check_scale_injection = 1.0;

    TimeGrid grid() const;
    void validate() const;
};

// Names accepted in McConfig::checks, with the regimes they apply to:
//   ks_limit           R1/R2/B9/B11  renormalized error vs the limit law, threshold 0.05
//   half_iqr           R1/R2/B9      empirical half-IQR within 10% of the Cauchy scale
//   median_decreasing  alpha < 1/2   medians of |alpha-hat - alpha| strictly decreasing
//   median_half        alpha > 1/2   median |alpha-hat - 1/2| at the last time <= 0.05
//   r4_band            R4            |median renormalized - 1/2| <= 0.15
//   as_stabilize       R3/R4         median per-path relative change of the last two
//                                    ladder values <= 0.10
//   as_target          R3            median per-path relative deviation of the last
//                                    value from (1-2a) eta_tmax / xi_tmax^2 <= 0.15
//   heavy_tail         R1/R2/B9      nested fourth moments increase and a scaled
//                                    Cauchy beats the best-fit Gaussian in KS

struct LadderStat {
    double epsilon = 0.0;
    double t = 0.0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    std::optional<double> ks_distance;  // present when the regime has a limit law
    std::size_t n_effective = 0;
};

struct CheckResult {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ReplicationFailure {
    std::size_t replication = 0;
    std::uint64_t seed = 0;
    std::string message;
};

struct McSummary {
    Regime regime = Regime::r1_cauchy;
    LimitConstants limit_constants;
    std::vector<LadderStat> ladder_stats;
    std::vector<CheckResult> checks;
    std::vector<ReplicationFailure> failures;
    bool all_pass = false;
};

// Per-replication results, for CSV export and diagnostics. `primary` is the
// regime's headline statistic per ladder entry: the renormalized error where
// a rate result exists, the raw estimate for NC_half.
struct RepRow {
    std::uint64_t seed = 0;
    bool ok = false;
    std::vector<double> alpha_hat_direct;
    std::vector<double> alpha_hat_identity;
    std::vector<double> error;
    std::vector<double> primary;
    double as_target = 0.0;  // (1-2a) eta/xi^2 at t_max; meaningful in R3
};

// Runs the study. Replications are distributed over `threads` workers
// (0 = hardware concurrency) but aggregated strictly in replication order,
// so the summary is a pure function of the config at any thread count.
// Throws if more than 0.1% of replications fail.
McSummary run(const McConfig& config, unsigned threads = 0,
              std::vector<RepRow>* rows_out = nullptr);

// --- statistics -----------------------------------------------------------

// Type-7 quantile (linear interpolation between order statistics), the
// common spreadsheet/R default; pinned so results are bit-stable.
double quantile_type7(std::vector<double> sample, double p);

struct RobustScale {
    double median = 0.0;
    double half_iqr = 0.0;  // consistent estimate of the scale of a Cauchy
};
RobustScale robust_scale(const std::vector<double>& sample);

// One-sample Kolmogorov-Smirnov distances.
double ks_cauchy(const std::vector<double>& sample, double scale);
double ks_gauss(const std::vector<double>& sample, double mean, double variance);
// Two-sample KS distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

struct AsConvergence {
    double median_rel_change = 0.0;
    std::optional<double> median_abs_dev;  // filled when a target is given
};
// Per-path relative change between the last two ladder columns (median over
// paths), plus median absolute deviation from `target` at the last column.
AsConvergence as_convergence_check(const std::vector<std::vector<double>>& per_path_ladder,
                                   std::optional<double> target = std::nullopt);

}  // namespace fracbridge::mc

#endif
