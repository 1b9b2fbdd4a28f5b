// End-to-end tests of the command-line binary. The path to the built
// executable arrives via the FRACBRIDGE_CLI environment variable, set by the
// test registration.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

std::string cli_path() {
    const char* p = std::getenv("FRACBRIDGE_CLI");
    REQUIRE_MESSAGE(p != nullptr, "FRACBRIDGE_CLI must point at the built binary");
    return p;
}

CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd = env_prefix + "'" + cli_path() + "' " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult res;
    char buf[512];
    while (fgets(buf, sizeof buf, pipe) != nullptr) res.output += buf;
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("fracbridge_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const nlohmann::json& overrides) {
    nlohmann::json cfg{
        {"hurst", 0.7},
        {"alpha", 0.3},
        {"horizon", 1.0},
        {"grid_n", 1024},
        {"ladder_epsilons", {0.1, 0.01}},
        {"replications", 100},
        {"seed", 11},
        {"sampler", "davies_harte"},
        {"checks", nlohmann::json::array()},
        {"out_dir", (dir / "out").string()},
    };
    for (const auto& item : overrides.items()) cfg[item.key()] = item.value();
    const fs::path file = dir / "config.json";
    std::ofstream(file) << cfg.dump(2);
    return file;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("constants subcommand prints the classified regime and scales") {
    const CmdResult res = run_cli("constants --hurst 0.6 --alpha 0.1");
    CHECK(res.exit_code == 0);
    const auto j = nlohmann::json::parse(res.output);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("regime") == "R1_cauchy");
    CHECK(std::abs(j.at("cauchy_scale").get<double>() - 1.07400045900974409816629982384) <
          1e-12);

    // The Brownian alpha = 1/2 boundary is a configuration error.
    CHECK(run_cli("constants --hurst 0.5 --alpha 0.5").exit_code == 2);
    // So is a malformed flag set.
    CHECK(run_cli("constants --alpha 0.1").exit_code == 2);
}

TEST_CASE("simulate writes one csv per replication") {
    const fs::path dir = fresh_dir("simulate");
    const fs::path cfg = write_config(dir, {{"replications", 2}});
    const CmdResult res = run_cli("simulate '" + cfg.string() + "'");
    CHECK(res.exit_code == 0);

    const fs::path out = dir / "out";
    REQUIRE(fs::exists(out / "path_000000.csv"));
    REQUIRE(fs::exists(out / "path_000001.csv"));
    const std::string csv = slurp(out / "path_000000.csv");
    CHECK(csv.rfind("t,b,xi,eta,x\n", 0) == 0);
    CHECK(count_lines(csv) == 1026);  // header + 1025 nodes
    CHECK(csv.find("\n0,0,0,0,0\n") != std::string::npos);
}

TEST_CASE("estimate writes one ladder row per replication and level") {
    const fs::path dir = fresh_dir("estimate");
    const fs::path cfg = write_config(dir, {{"replications", 3}});
    const CmdResult res = run_cli("estimate '" + cfg.string() + "'");
    CHECK(res.exit_code == 0);
    const std::string csv = slurp(dir / "out" / "estimates.csv");
    CHECK(csv.rfind("replication,epsilon,t,alpha_hat_direct,alpha_hat_identity,error,"
                    "renormalized\n",
                    0) == 0);
    CHECK(count_lines(csv) == 1 + 3 * 2);
}

TEST_CASE("verify runs checks, writes a summary, and reports via exit code") {
    const fs::path dir = fresh_dir("verify");
    const fs::path cfg =
        write_config(dir, {{"checks", {"median_decreasing"}}, {"replications", 120}});
    const CmdResult res = run_cli("verify '" + cfg.string() + "'");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("[PASS] median_decreasing") != std::string::npos);

    const auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary.at("schema_version") == 1);
    CHECK(summary.at("regime") == "R2_log_cauchy");
    CHECK(summary.at("all_pass") == true);
    CHECK(summary.at("config").at("seed") == 11);
    CHECK(summary.at("ladder_stats").size() == 2);
}

TEST_CASE("verify summaries are byte-identical across thread counts") {
    const fs::path dir = fresh_dir("threads");
    const fs::path cfg = write_config(dir, {{"replications", 120}});
    std::vector<std::string> outputs;
    for (const char* env :
         {"FRACBRIDGE_THREADS=1 ", "FRACBRIDGE_THREADS=3 ", "FRACBRIDGE_THREADS=16 "}) {
        const CmdResult res = run_cli("verify '" + cfg.string() + "'", env);
        REQUIRE(res.exit_code == 0);
        outputs.push_back(slurp(dir / "out" / "summary.json"));
    }
    CHECK(outputs[0] == outputs[1]);
    CHECK(outputs[0] == outputs[2]);

    // Garbage in the thread variable is a configuration error, not a
    // silent fallback.
    CHECK(run_cli("verify '" + cfg.string() + "'", "FRACBRIDGE_THREADS=lots ").exit_code == 2);
}

TEST_CASE("a misstated limit scale makes verify fail") {
    const fs::path dir = fresh_dir("inject");
    const fs::path cfg = write_config(dir, {{"hurst", 0.5},
                                            {"alpha", 0.25},
                                            {"grid_n", 4096},
                                            {"replications", 400},
                                            {"checks", {"ks_limit"}}});
    const CmdResult res =
        run_cli("verify '" + cfg.string() + "' --check-scale-injection 4.0");
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("[FAIL] ks_limit") != std::string::npos);
    const auto summary = nlohmann::json::parse(slurp(dir / "out" / "summary.json"));
    CHECK(summary.at("all_pass") == false);
}

TEST_CASE("configuration problems exit with code 2") {
    const fs::path dir = fresh_dir("badcfg");
    CHECK(run_cli("verify /nonexistent/config.json").exit_code == 2);

    const fs::path missing = dir / "missing.json";
    std::ofstream(missing) << R"({"hurst": 0.7})";
    CHECK(run_cli("verify '" + missing.string() + "'").exit_code == 2);

    // replications below the study minimum
    const fs::path few = write_config(dir, {{"replications", 20}});
    CHECK(run_cli("verify '" + few.string() + "'").exit_code == 2);
    // but simulate/estimate accept small replication counts
    CHECK(run_cli("simulate '" + few.string() + "'").exit_code == 0);

    CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_SUITE_END();
