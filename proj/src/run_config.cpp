#include "fracbridge/run_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fracbridge::config {

namespace {

using nlohmann::json;

constexpr const char* kRequiredKeys[] = {
    "hurst",        "alpha",   "horizon", "grid_n",  "ladder_epsilons",
    "replications", "seed",    "sampler", "checks",  "out_dir",
};

void check_key_set(const json& j) {
    std::string missing;
    for (const char* key : kRequiredKeys) {
        if (!j.contains(key)) {
            if (!missing.empty()) missing += ", ";
            missing += key;
        }
    }
    if (!missing.empty()) {
        throw std::invalid_argument("run config: missing required key(s): " + missing);
    }
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : kRequiredKeys) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument("run config: unknown key '" + item.key() + "'");
        }
    }
}

double require_number(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw std::invalid_argument(std::string("run config: '") + key + "' must be a number");
    }
    return v.get<double>();
}

std::uint64_t require_unsigned(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number_unsigned()) {
        throw std::invalid_argument(std::string("run config: '") + key +
                                    "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string require_string(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_string()) {
        throw std::invalid_argument(std::string("run config: '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

}  // namespace

ModelParams RunConfigFile::params() const { return ModelParams{alpha, horizon, hurst}; }

EvalLadder RunConfigFile::ladder() const { return EvalLadder{horizon, ladder_epsilons}; }

TimeGrid RunConfigFile::grid() const {
    if (ladder_epsilons.empty()) {
        throw std::invalid_argument("run config: ladder_epsilons is empty");
    }
    return TimeGrid{horizon - ladder_epsilons.back(), grid_n};
}

mc::SamplerKind RunConfigFile::sampler_kind() const {
    if (sampler == "davies_harte") return mc::SamplerKind::davies_harte;
    if (sampler == "hosking") return mc::SamplerKind::hosking;
    throw std::invalid_argument("run config: sampler must be 'davies_harte' or 'hosking', got '" +
                                sampler + "'");
}

mc::McConfig RunConfigFile::mc_config() const {
    mc::McConfig cfg;
    cfg.params = params();
    cfg.grid_n = grid_n;
    cfg.ladder = ladder();
    cfg.replications = replications;
    cfg.global_seed = seed;
    cfg.sampler = sampler_kind();
    cfg.checks = checks;
    return cfg;
}

RunConfigFile parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw std::invalid_argument(std::string("run config: not valid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw std::invalid_argument("run config: top level must be an object");
    check_key_set(j);

    RunConfigFile cfg;
    cfg.hurst = require_number(j, "hurst");
    cfg.alpha = require_number(j, "alpha");
    cfg.horizon = require_number(j, "horizon");
    cfg.grid_n = static_cast<std::size_t>(require_unsigned(j, "grid_n"));
    cfg.replications = static_cast<std::size_t>(require_unsigned(j, "replications"));
    cfg.seed = require_unsigned(j, "seed");
    cfg.sampler = require_string(j, "sampler");
    cfg.out_dir = require_string(j, "out_dir");

    const json& eps = j.at("ladder_epsilons");
    if (!eps.is_array() || eps.empty()) {
        throw std::invalid_argument("run config: 'ladder_epsilons' must be a non-empty array");
    }
    for (const auto& v : eps) {
        if (!v.is_number()) {
            throw std::invalid_argument("run config: 'ladder_epsilons' entries must be numbers");
        }
        cfg.ladder_epsilons.push_back(v.get<double>());
    }

    const json& chk = j.at("checks");
    if (!chk.is_array()) throw std::invalid_argument("run config: 'checks' must be an array");
    for (const auto& v : chk) {
        if (!v.is_string()) {
            throw std::invalid_argument("run config: 'checks' entries must be strings");
        }
        cfg.checks.push_back(v.get<std::string>());
    }
    return cfg;
}

RunConfigFile load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("run config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string summary_to_json(const mc::McSummary& summary, const RunConfigFile& config) {
    json j;
    j["schema_version"] = 1;
    j["regime"] = std::string(regime_label(summary.regime));
    j["all_pass"] = summary.all_pass;

    json cfg;
    cfg["hurst"] = config.hurst;
    cfg["alpha"] = config.alpha;
    cfg["horizon"] = config.horizon;
    cfg["grid_n"] = config.grid_n;
    cfg["ladder_epsilons"] = config.ladder_epsilons;
    cfg["replications"] = config.replications;
    cfg["seed"] = config.seed;
    cfg["sampler"] = config.sampler;
    cfg["checks"] = config.checks;
    cfg["out_dir"] = config.out_dir;
    j["config"] = std::move(cfg);

    json consts;
    const LimitConstants& lc = summary.limit_constants;
    if (lc.cauchy_scale) consts["cauchy_scale"] = *lc.cauchy_scale;
    if (lc.as_limit) consts["as_limit"] = *lc.as_limit;
    if (lc.var_xi_terminal) consts["var_xi_terminal"] = *lc.var_xi_terminal;
    if (lc.aux_gaussian_scale) consts["aux_gaussian_scale"] = *lc.aux_gaussian_scale;
    if (lc.gauss_variance) consts["gauss_variance"] = *lc.gauss_variance;
    j["limit_constants"] = std::move(consts);

    json stats = json::array();
    for (const auto& s : summary.ladder_stats) {
        json row;
        row["epsilon"] = s.epsilon;
        row["t"] = s.t;
        row["median"] = s.median;
        row["q25"] = s.q25;
        row["q75"] = s.q75;
        row["n_effective"] = s.n_effective;
        if (s.ks_distance) row["ks_distance"] = *s.ks_distance;
        stats.push_back(std::move(row));
    }
    j["ladder_stats"] = std::move(stats);

    json checks = json::array();
    for (const auto& c : summary.checks) {
        json row;
        row["name"] = c.name;
        row["statistic"] = c.statistic;
        row["threshold"] = c.threshold;
        row["pass"] = c.pass;
        checks.push_back(std::move(row));
    }
    j["checks"] = std::move(checks);

    json failures = json::array();
    for (const auto& f : summary.failures) {
        json row;
        row["replication"] = f.replication;
        row["seed"] = f.seed;
        row["message"] = f.message;
        failures.push_back(std::move(row));
    }
    j["failures"] = std::move(failures);

    return j.dump(2) + "\n";
}

}  // namespace fracbridge::config
