// Command-line front end: regime constants, path simulation, estimator
// ladders, and full Monte Carlo verification runs driven by a JSON config.
//
// Exit codes: 0 success (for `verify`: all checks passed), 1 runtime or
// check failure, 2 invalid usage or configuration.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fracbridge/bridge.hpp"
#include "fracbridge/estimator.hpp"
#include "fracbridge/fbm.hpp"
#include "fracbridge/limits.hpp"
#include "fracbridge/mcharness.hpp"
#include "fracbridge/rng.hpp"
#include "fracbridge/run_config.hpp"

namespace {

using namespace fracbridge;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

unsigned threads_from_env() {
    const char* raw = std::getenv("FRACBRIDGE_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;  // auto
    char* end = nullptr;
    const unsigned long v = std::strtoul(raw, &end, 10);
    if (end == raw || *end != '\0' || v > 1024) {
        throw std::invalid_argument(std::string("FRACBRIDGE_THREADS: expected a small "
                                                "non-negative integer, got '") +
                                    raw + "'");
    }
    return static_cast<unsigned>(v);
}

// Shape checks shared by simulate/estimate, which accept any replication
// count (verify goes through McConfig::validate instead).
void validate_run_shape(const config::RunConfigFile& cfg) {
    cfg.params().validate();
    cfg.params().require_analysis_hurst();
    cfg.ladder().validate();
    const TimeGrid grid = cfg.grid();
    grid.validate();
    if (cfg.grid_n < 2 || (cfg.grid_n & (cfg.grid_n - 1)) != 0) {
        throw std::invalid_argument("run config: grid_n must be a power of two >= 2");
    }
    const double eps_min = cfg.ladder_epsilons.back();
    if (!(grid.delta() < eps_min / 10.0)) {
        throw std::invalid_argument(
            "run config: grid step must be below a tenth of the smallest epsilon");
    }
    if (cfg.replications == 0) {
        throw std::invalid_argument("run config: replications must be positive");
    }
    cfg.sampler_kind();  // validates the name
}

GaussianPath sample_path(const config::RunConfigFile& cfg, const DaviesHarteSampler* dh,
                         std::size_t replication) {
    rng::RngStream stream = rng::RngStream::for_replication(cfg.seed, replication);
    if (dh != nullptr) return dh->sample(stream);
    return sample_hosking(HurstParam{cfg.hurst}, cfg.grid(), stream);
}

int cmd_constants(double hurst, double alpha, double horizon) {
    const ModelParams params{alpha, horizon, hurst};
    params.validate();
    const Regime regime = classify(params);
    const LimitConstants lc = constants(params);

    nlohmann::json j;
    j["schema_version"] = 1;
    j["hurst"] = hurst;
    j["alpha"] = alpha;
    j["horizon"] = horizon;
    j["regime"] = std::string(regime_label(regime));
    if (lc.cauchy_scale) j["cauchy_scale"] = *lc.cauchy_scale;
    if (lc.as_limit) j["as_limit"] = *lc.as_limit;
    if (lc.var_xi_terminal) j["var_xi_terminal"] = *lc.var_xi_terminal;
    if (lc.aux_gaussian_scale) j["aux_gaussian_scale"] = *lc.aux_gaussian_scale;
    if (lc.gauss_variance) j["gauss_variance"] = *lc.gauss_variance;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const std::string& config_path) {
    const config::RunConfigFile cfg = config::load_run_config(config_path);
    validate_run_shape(cfg);
    const TimeGrid grid = cfg.grid();
    const ModelParams params = cfg.params();
    const BridgeWeights weights(grid, params);

    std::optional<DaviesHarteSampler> dh;
    if (cfg.sampler_kind() == mc::SamplerKind::davies_harte) {
        dh.emplace(HurstParam{cfg.hurst}, grid);
    }

    std::filesystem::create_directories(cfg.out_dir);
    const std::vector<double> times = grid.times();
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
        GaussianPath path = sample_path(cfg, dh ? &*dh : nullptr, rep);
        const BridgePaths bridge = build_bridge(path, params, &weights);

        char name[40];
        std::snprintf(name, sizeof name, "path_%06zu.csv", rep);
        const std::filesystem::path file = std::filesystem::path(cfg.out_dir) / name;
        std::ofstream out(file);
        if (!out) throw std::runtime_error("cannot write " + file.string());
        out << "t,b,xi,eta,x\n";
        for (std::size_t i = 0; i < times.size(); ++i) {
            out << fmt_double(times[i]) << ',' << fmt_double(path.values[i]) << ','
                << fmt_double(bridge.xi[i]) << ',' << fmt_double(bridge.eta[i]) << ','
                << fmt_double(bridge.x[i]) << '\n';
        }
    }
    std::cout << "wrote " << cfg.replications << " path file(s) to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_estimate(const std::string& config_path) {
    const config::RunConfigFile cfg = config::load_run_config(config_path);
    validate_run_shape(cfg);
    const TimeGrid grid = cfg.grid();
    const ModelParams params = cfg.params();
    const EvalLadder ladder = cfg.ladder();
    const BridgeWeights weights(grid, params);
    const Regime regime = classify(params);
    const std::string label(regime_label(regime));

    std::optional<DaviesHarteSampler> dh;
    if (cfg.sampler_kind() == mc::SamplerKind::davies_harte) {
        dh.emplace(HurstParam{cfg.hurst}, grid);
    }

    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path file = std::filesystem::path(cfg.out_dir) / "estimates.csv";
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "replication,epsilon,t,alpha_hat_direct,alpha_hat_identity,error,renormalized\n";
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
        GaussianPath path = sample_path(cfg, dh ? &*dh : nullptr, rep);
        const BridgePaths bridge = build_bridge(path, params, &weights);
        EstimatorLadder lad = compute_ladder(bridge, ladder);
        renormalized_errors(lad);
        for (const auto& e : lad.entries) {
            const auto it = e.renormalized.find(label);
            const double renorm =
                it == e.renormalized.end() ? std::nan("") : it->second;
            out << rep << ',' << fmt_double(e.epsilon) << ',' << fmt_double(e.t) << ','
                << fmt_double(e.alpha_hat_direct) << ',' << fmt_double(e.alpha_hat_identity)
                << ',' << fmt_double(e.error) << ',' << fmt_double(renorm) << '\n';
        }
    }
    std::cout << "wrote " << file.string() << "\n";
    return 0;
}

int cmd_verify(const std::string& config_path, double scale_injection) {
    const config::RunConfigFile cfg = config::load_run_config(config_path);
    mc::McConfig mc_cfg = cfg.mc_config();
    mc_cfg.check_scale_injection = scale_injection;
    const unsigned threads = threads_from_env();

    const mc::McSummary summary = mc::run(mc_cfg, threads);

    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path file = std::filesystem::path(cfg.out_dir) / "summary.json";
    {
        std::ofstream out(file, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + file.string());
        out << config::summary_to_json(summary, cfg);
    }

    std::cout << "regime " << regime_label(summary.regime) << ", "
              << summary.ladder_stats.size() << " ladder time(s), "
              << summary.failures.size() << " failed replication(s)\n";
    for (const auto& c : summary.checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                  << " statistic=" << fmt_double(c.statistic)
                  << " threshold=" << fmt_double(c.threshold) << "\n";
    }
    std::cout << "summary written to " << file.string() << "\n";
    return summary.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Singular fractional bridge: simulation and estimator verification"};
    app.require_subcommand(1);

    double hurst = 0.0;
    double alpha = 0.0;
    double horizon = 1.0;
    CLI::App* constants_cmd =
        app.add_subcommand("constants", "Print regime classification and limit constants");
    constants_cmd->add_option("--hurst", hurst, "Hurst parameter in [0.5, 1)")->required();
    constants_cmd->add_option("--alpha", alpha, "Drift strength (positive)")->required();
    constants_cmd->add_option("--horizon", horizon, "Bridge horizon T")->capture_default_str();

    std::string sim_config;
    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Sample bridge paths and write them as CSV");
    simulate_cmd->add_option("config", sim_config, "JSON run configuration")->required();

    std::string est_config;
    CLI::App* estimate_cmd =
        app.add_subcommand("estimate", "Evaluate the estimator ladder per replication");
    estimate_cmd->add_option("config", est_config, "JSON run configuration")->required();

    std::string ver_config;
    double scale_injection = 1.0;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Run the Monte Carlo study and its checks");
    verify_cmd->add_option("config", ver_config, "JSON run configuration")->required();
    verify_cmd
        ->add_option("--check-scale-injection", scale_injection,
                     "Test hook: multiply the theoretical scale used by distributional checks")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*constants_cmd) return cmd_constants(hurst, alpha, horizon);
        if (*simulate_cmd) return cmd_simulate(sim_config);
        if (*estimate_cmd) return cmd_estimate(est_config);
        if (*verify_cmd) return cmd_verify(ver_config, scale_injection);
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::domain_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
