#include "fracbridge/mcharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "fracbridge/bridge.hpp"
#include "fracbridge/fbm.hpp"
#include "fracbridge/rng.hpp"

namespace fracbridge::mc {

namespace {

constexpr const char* kKnownChecks[] = {
    "ks_limit",   "half_iqr", "median_decreasing", "median_half",
    "r4_band",    "as_stabilize", "as_target",     "heavy_tail",
};

bool known_check(const std::string& name) {
    for (const char* c : kKnownChecks) {
        if (name == c) return true;
    }
    return false;
}

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double median_of(std::vector<double> sample) {
    if (sample.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(sample.begin(), sample.end());
    return quantile_sorted(sample, 0.5);
}

double ks_against_cdf(std::vector<double> sample, double (*cdf)(double, double, double),
                      double p1, double p2) {
    if (sample.empty()) throw std::invalid_argument("KS distance of empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i], p1, p2);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

double cauchy_cdf(double x, double scale, double) {
    return 0.5 + std::atan(x / scale) / 3.14159265358979323846;
}

double gauss_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * 1.41421356237309504880));
}

}  // namespace

TimeGrid McConfig::grid() const {
    if (ladder.epsilons.empty()) throw std::invalid_argument("McConfig: empty ladder");
    // Epsilons are validated strictly decreasing, so the grid ends at the
    // closest evaluation time to the horizon.
    return TimeGrid{params.horizon_t - ladder.epsilons.back(), grid_n};
}

void McConfig::validate() const {
    params.validate();
    params.require_analysis_hurst();
    ladder.validate();
    if (ladder.horizon_t != params.horizon_t) {
        throw std::invalid_argument("McConfig: ladder horizon differs from model horizon");
    }
    if (!is_power_of_two(grid_n)) {
        throw std::invalid_argument("McConfig: grid_n must be a power of two >= 2");
    }
    if (replications < 100) {
        throw std::invalid_argument("McConfig: need at least 100 replications");
    }
    const TimeGrid g = grid();
    g.validate();
    const double eps_min = ladder.epsilons.back();
    if (!(g.delta() < eps_min / 10.0)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "McConfig: grid step %.3g too coarse for smallest epsilon %.3g "
                      "(need delta < epsilon/10)",
                      g.delta(), eps_min);
        throw std::invalid_argument(buf);
    }
    for (const auto& name : checks) {
        if (!known_check(name)) {
            throw std::invalid_argument("McConfig: unknown check '" + name + "'");
        }
    }
    if (!(check_scale_injection > 0.0) || !std::isfinite(check_scale_injection)) {
        throw std::invalid_argument("McConfig: check_scale_injection must be positive");
    }
}

double quantile_type7(std::vector<double> sample, double p) {
    if (sample.empty()) throw std::invalid_argument("quantile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0,1]");
    std::sort(sample.begin(), sample.end());
    return quantile_sorted(sample, p);
}

RobustScale robust_scale(const std::vector<double>& sample) {
    std::vector<double> sorted = sample;
    if (sorted.empty()) throw std::invalid_argument("robust_scale of empty sample");
    std::sort(sorted.begin(), sorted.end());
    RobustScale out;
    out.median = quantile_sorted(sorted, 0.5);
    out.half_iqr = 0.5 * (quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25));
    return out;
}

double ks_cauchy(const std::vector<double>& sample, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("ks_cauchy: scale must be positive");
    return ks_against_cdf(sample, cauchy_cdf, scale, 0.0);
}

double ks_gauss(const std::vector<double>& sample, double mean, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("ks_gauss: variance must be positive");
    return ks_against_cdf(sample, gauss_cdf, mean, std::sqrt(variance));
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

AsConvergence as_convergence_check(const std::vector<std::vector<double>>& per_path_ladder,
                                   std::optional<double> target) {
    std::vector<double> rel_changes;
    std::vector<double> abs_devs;
    rel_changes.reserve(per_path_ladder.size());
    for (const auto& row : per_path_ladder) {
        if (row.size() < 2) {
            throw std::invalid_argument("as_convergence_check: need at least two ladder values");
        }
        const double last = row[row.size() - 1];
        const double prev = row[row.size() - 2];
        const double denom = std::max(std::abs(last), 1e-300);
        rel_changes.push_back(std::abs(last - prev) / denom);
        if (target) abs_devs.push_back(std::abs(last - *target));
    }
    AsConvergence out;
    out.median_rel_change = median_of(std::move(rel_changes));
    if (target) out.median_abs_dev = median_of(std::move(abs_devs));
    return out;
}

namespace {

bool regime_in(Regime r, std::initializer_list<Regime> list) {
    for (Regime x : list) {
        if (r == x) return true;
    }
    return false;
}

void require_applicable(const std::string& name, Regime regime, bool ok) {
    if (!ok) {
        throw std::invalid_argument("check '" + name + "' does not apply to regime " +
                                    std::string(regime_label(regime)));
    }
}

// Column `k` of the primary statistic across successful replications,
// in replication order.
std::vector<double> primary_column(const std::vector<RepRow>& rows, std::size_t k) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        if (row.ok) out.push_back(row.primary[k]);
    }
    return out;
}

CheckResult run_check(const std::string& name, const McConfig& config, Regime regime,
                      const LimitConstants& limits, const std::vector<RepRow>& rows) {
    const std::size_t n_entries = config.ladder.epsilons.size();
    const std::size_t last = n_entries - 1;
    CheckResult out;
    out.name = name;

    const bool cauchy_regime =
        regime_in(regime, {Regime::r1_cauchy, Regime::r2_log_cauchy, Regime::b9_brownian});

    if (name == "ks_limit") {
        require_applicable(name, regime, cauchy_regime || regime == Regime::b11_brownian);
        const std::vector<double> sample = primary_column(rows, last);
        if (cauchy_regime) {
            out.statistic =
                ks_cauchy(sample, *limits.cauchy_scale * config.check_scale_injection);
        } else {
            const double inj = config.check_scale_injection;
            out.statistic = ks_gauss(sample, 0.0, *limits.gauss_variance * inj * inj);
        }
        out.threshold = 0.05;
    } else if (name == "half_iqr") {
        require_applicable(name, regime, cauchy_regime);
        const RobustScale rs = robust_scale(primary_column(rows, last));
        const double scale = *limits.cauchy_scale * config.check_scale_injection;
        out.statistic = std::abs(rs.half_iqr / scale - 1.0);
        out.threshold = 0.10;
    } else if (name == "median_decreasing") {
        require_applicable(name, regime,
                           regime_in(regime, {Regime::r1_cauchy, Regime::r2_log_cauchy,
                                              Regime::r3_as_random, Regime::r4_as_half,
                                              Regime::b9_brownian}));
        // Largest consecutive increase of median |error|; negative means
        // strictly decreasing all the way down the ladder.
        double worst = -std::numeric_limits<double>::infinity();
        double prev = 0.0;
        for (std::size_t k = 0; k < n_entries; ++k) {
            std::vector<double> abs_err;
            for (const auto& row : rows) {
                if (row.ok) abs_err.push_back(std::abs(row.error[k]));
            }
            const double med = median_of(std::move(abs_err));
            if (k > 0) worst = std::max(worst, med - prev);
            prev = med;
        }
        out.statistic = worst;
        out.threshold = 0.0;
    } else if (name == "median_half") {
        require_applicable(name, regime,
                           regime_in(regime, {Regime::nc_half, Regime::b11_brownian}));
        std::vector<double> dev;
        for (const auto& row : rows) {
            if (row.ok) dev.push_back(std::abs(row.alpha_hat_direct[last] - 0.5));
        }
        out.statistic = median_of(std::move(dev));
        out.threshold = 0.05;
    } else if (name == "r4_band") {
        require_applicable(name, regime, regime == Regime::r4_as_half);
        out.statistic = std::abs(median_of(primary_column(rows, last)) - 0.5);
        out.threshold = 0.15;
    } else if (name == "as_stabilize") {
        require_applicable(name, regime,
                           regime_in(regime, {Regime::r3_as_random, Regime::r4_as_half}));
        std::vector<std::vector<double>> mat;
        for (const auto& row : rows) {
            if (row.ok) mat.push_back(row.primary);
        }
        out.statistic = as_convergence_check(mat).median_rel_change;
        out.threshold = 0.10;
    } else if (name == "as_target") {
        require_applicable(name, regime, regime == Regime::r3_as_random);
        std::vector<double> rel_dev;
        for (const auto& row : rows) {
            if (!row.ok) continue;
            const double denom = std::max(std::abs(row.as_target), 1e-300);
            rel_dev.push_back(std::abs(row.primary[last] - row.as_target) / denom);
        }
        out.statistic = median_of(std::move(rel_dev));
        out.threshold = 0.15;
    } else if (name == "heavy_tail") {
        require_applicable(name, regime, cauchy_regime);
        const std::vector<double> sample = primary_column(rows, last);
        // Fourth moments over nested prefixes keep growing for a heavy tail:
        // each extension picks up new extreme values that dominate the mean.
        bool monotone = true;
        double prev_m4 = 0.0;
        for (int stage = 3; stage >= 0; --stage) {
            const std::size_t m = sample.size() >> stage;
            double m4 = 0.0;
            for (std::size_t i = 0; i < m; ++i) m4 += std::pow(sample[i], 4);
            m4 /= static_cast<double>(m);
            if (stage < 3 && m4 <= prev_m4) monotone = false;
            prev_m4 = m4;
        }
        double mean = 0.0;
        for (double x : sample) mean += x;
        mean /= static_cast<double>(sample.size());
        double var = 0.0;
        for (double x : sample) var += (x - mean) * (x - mean);
        var /= static_cast<double>(sample.size());
        const double d_gauss = ks_gauss(sample, mean, var);
        const double d_cauchy = ks_cauchy(sample, robust_scale(sample).half_iqr);
        out.statistic = (monotone ? 0.0 : 1.0) + (d_gauss > d_cauchy ? 0.0 : 1.0);
        out.threshold = 0.0;
    } else {
        throw std::invalid_argument("unknown check '" + name + "'");
    }
    out.pass = out.statistic <= out.threshold;
    return out;
}

}  // namespace

McSummary run(const McConfig& config, unsigned threads, std::vector<RepRow>* rows_out) {
    config.validate();
    const Regime regime = classify(config.params);
    const LimitConstants limits = constants(config.params);
    const TimeGrid grid = config.grid();
    const std::string label(regime_label(regime));

    // Shared read-only tables; workers only draw their own randomness.
    std::optional<DaviesHarteSampler> dh;
    if (config.sampler == SamplerKind::davies_harte) {
        dh.emplace(config.params.hurst, grid);
    }
    const BridgeWeights weights(grid, config.params);

    const std::size_t reps = config.replications;
    std::vector<RepRow> rows(reps);
    std::vector<std::string> fail_msg(reps);

    auto worker_body = [&](std::size_t rep) {
        rng::RngStream stream = rng::RngStream::for_replication(config.global_seed, rep);
        RepRow& row = rows[rep];
        row.seed = rng::stream_seed(config.global_seed, rep);
        GaussianPath path = dh ? dh->sample(stream)
                               : sample_hosking(config.params.hurst, grid, stream);
        const BridgePaths bridge = build_bridge(path, config.params, &weights);
        EstimatorLadder lad = compute_ladder(bridge, config.ladder);
        renormalized_errors(lad);

        const std::size_t n_entries = lad.entries.size();
        row.alpha_hat_direct.resize(n_entries);
        row.alpha_hat_identity.resize(n_entries);
        row.error.resize(n_entries);
        row.primary.resize(n_entries);
        for (std::size_t k = 0; k < n_entries; ++k) {
            const auto& e = lad.entries[k];
            row.alpha_hat_direct[k] = e.alpha_hat_direct;
            row.alpha_hat_identity[k] = e.alpha_hat_identity;
            row.error[k] = e.error;
            row.primary[k] = (regime == Regime::nc_half) ? e.alpha_hat_direct
                                                         : e.renormalized.at(label);
            if (!std::isfinite(row.alpha_hat_direct[k]) ||
                !std::isfinite(row.alpha_hat_identity[k]) ||
                !std::isfinite(row.primary[k])) {
                throw std::runtime_error("non-finite estimate along the ladder");
            }
        }
        const double xi_end = bridge.xi.back();
        row.as_target =
            (1.0 - 2.0 * config.params.alpha) * bridge.eta.back() / (xi_end * xi_end);
        row.ok = true;
    };

    unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : threads;
    n_threads = static_cast<unsigned>(
        std::min<std::size_t>(n_threads, reps));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t rep = next.fetch_add(1);
            if (rep >= reps) return;
            try {
                worker_body(rep);
            } catch (const std::exception& ex) {
                rows[rep].ok = false;
                fail_msg[rep] = ex.what();
            }
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    McSummary summary;
    summary.regime = regime;
    summary.limit_constants = limits;
    for (std::size_t rep = 0; rep < reps; ++rep) {
        if (!rows[rep].ok) {
            summary.failures.push_back({rep, rows[rep].seed, fail_msg[rep]});
        }
    }
    if (summary.failures.size() * 1000 > reps) {
        const auto& f = summary.failures.front();
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "%zu of %zu replications failed; first: replication %zu "
                      "(seed %llu): %s",
                      summary.failures.size(), reps, f.replication,
                      static_cast<unsigned long long>(f.seed), f.message.c_str());
        throw std::runtime_error(buf);
    }

    const bool has_limit_law =
        regime_in(regime, {Regime::r1_cauchy, Regime::r2_log_cauchy, Regime::b9_brownian,
                           Regime::b11_brownian});
    const std::size_t n_entries = config.ladder.epsilons.size();
    const TimeGrid g = grid;
    const EvalLadder& ladder = config.ladder;
    const std::vector<std::size_t> indices = ladder.snap_indices(g);
    for (std::size_t k = 0; k < n_entries; ++k) {
        std::vector<double> sample = primary_column(rows, k);
        std::sort(sample.begin(), sample.end());
        LadderStat stat;
        stat.epsilon = ladder.epsilons[k];
        stat.t = g.time_at(indices[k]);
        stat.median = quantile_sorted(sample, 0.5);
        stat.q25 = quantile_sorted(sample, 0.25);
        stat.q75 = quantile_sorted(sample, 0.75);
        stat.n_effective = sample.size();
        if (has_limit_law) {
            if (regime == Regime::b11_brownian) {
                const double inj = config.check_scale_injection;
                stat.ks_distance = ks_gauss(sample, 0.0, *limits.gauss_variance * inj * inj);
            } else {
                stat.ks_distance =
                    ks_cauchy(sample, *limits.cauchy_scale * config.check_scale_injection);
            }
        }
        summary.ladder_stats.push_back(std::move(stat));
    }

    summary.all_pass = true;
    for (const auto& name : config.checks) {
        CheckResult res = run_check(name, config, regime, limits, rows);
        summary.all_pass = summary.all_pass && res.pass;
        summary.checks.push_back(std::move(res));
    }

    if (rows_out) *rows_out = std::move(rows);
    return summary;
}

}  // namespace fracbridge::mc
