#ifndef FRACBRIDGE_RUN_CONFIG_HPP
#define FRACBRIDGE_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fracbridge/mcharness.hpp"

namespace fracbridge::config {

// The on-disk run description shared by the simulate/estimate/verify
// subcommands. All keys are required; unknown keys are an error so that a
// typo cannot silently fall back to a default.
struct RunConfigFile {
    double hurst = 0.0;
    double alpha = 0.0;
    double horizon = 0.0;
    std::size_t grid_n = 0;
    std::vector<double> ladder_epsilons;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
    std::string sampler;  // "davies_harte" or "hosking"
    std::vector<std::string> checks;
    std::string out_dir;

    ModelParams params() const;
    EvalLadder ladder() const;
    TimeGrid grid() const;
    mc::SamplerKind sampler_kind() const;
    // Full Monte Carlo configuration (verify path; enforces replications >= 100).
    mc::McConfig mc_config() const;
};

RunConfigFile parse_run_config(const std::string& json_text);
RunConfigFile load_run_config(const std::string& path);

// Serializes a study summary (with the config echoed back) as JSON with
// sorted keys, so identical studies produce byte-identical files.
std::string summary_to_json(const mc::McSummary& summary, const RunConfigFile& config);

}  // namespace fracbridge::config

#endif
