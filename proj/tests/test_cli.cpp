#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "inveff/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("inveff");
    for (const auto& a : args) argv.push_back(a.c_str());
    return inveff::run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "inveff_cli_tests";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    fs::path p = temp_dir() / name;
    std::ofstream out(p);
    out << text;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string mc_config_text(std::uint64_t seed) {
    json j;
    j["schema_version"] = 1;
    j["operator"] = "identity";
    j["error_model"] = {{"name", "logistic"}};
    j["truth"] = {{"kind", "coefficients"}, {"values", {0.0}}};
    j["target"] = {{"kind", "coefficient"}, {"k", 0}};
    j["n_grid"] = {50};
    j["replications"] = 60;
    j["truncation"] = {{"kind", "rate"}, {"r", 0.3}};
    j["k_max"] = 16;
    j["master_seed"] = seed;
    return j.dump(2);
}

} // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(cli({"frobnicate"}) == 2);
    CHECK(cli({}) == 2);
    CHECK(cli({"mc"}) == 2);                               // missing --config
    CHECK(cli({"mc", "--config", "/no/such/file"}) == 2);  // unreadable config
    CHECK(cli({"validate", "--model", "laplace"}) == 2);   // unknown model
}

TEST_CASE("validate subcommand") {
    const std::string out = (temp_dir() / "validate.json").string();
    CHECK(cli({"validate", "--model", "logistic", "--out", out}) == 0);
    const json report = json::parse(slurp(out));
    CHECK(report["pass"] == true);
    CHECK(report["model"] == "logistic");
    CHECK(report["checks"].is_array());
    CHECK(cli({"validate", "--model", "gaussian", "--sigma", "2.0", "--out", out}) == 0);
}

TEST_CASE("simulate then estimate round trip") {
    const std::string sim_cfg = write_file("sim.json", R"({
        "schema_version": 1,
        "operator": "brownian_bridge",
        "error_model": {"name": "logistic"},
        "truth": {"kind": "power_decay", "s": 3.0, "amplitude": 1.0, "k_max": 8},
        "n": 400,
        "seed": 11
    })");
    const std::string est_cfg = write_file("est.json", R"({
        "schema_version": 1,
        "operator": "brownian_bridge",
        "error_model": {"name": "logistic"},
        "target": {"kind": "coefficient", "k": 0},
        "truncation": {"kind": "rate", "r": 0.3},
        "k_max": 16
    })");

    SUBCASE("JSON dataset carries the truth into the variance report") {
        const std::string data = (temp_dir() / "data.json").string();
        const std::string out = (temp_dir() / "est_out.json").string();
        REQUIRE(cli({"simulate", "--config", sim_cfg, "--out", data}) == 0);
        REQUIRE(cli({"estimate", "--config", est_cfg, "--data", data, "--out", out}) == 0);
        const json r = json::parse(slurp(out));
        CHECK(r["plugin_variance_basis"] == "truth");
        CHECK(r["n"] == 400);
        CHECK(r["estimate_naive"].is_number());
        CHECK(r["estimate_one_step"].is_number());
        CHECK(r["optimal_variance"].is_number());
        CHECK(r["plugin_variance"].is_number());
        CHECK(r["plugin_variance"].get<double>() > r["optimal_variance"].get<double>());
    }
    SUBCASE("CSV dataset still estimates, falling back to the pilot fit") {
        const std::string data = (temp_dir() / "data.csv").string();
        const std::string out = (temp_dir() / "est_out2.json").string();
        REQUIRE(cli({"simulate", "--config", sim_cfg, "--format", "csv", "--out", data}) == 0);
        const std::string head = slurp(data).substr(0, 4);
        CHECK(head == "x,y\n");
        REQUIRE(cli({"estimate", "--config", est_cfg, "--data", data, "--out", out}) == 0);
        const json r = json::parse(slurp(out));
        CHECK(r["plugin_variance_basis"] == "pilot_estimate");
    }
    SUBCASE("same simulate invocation gives byte-identical data") {
        const std::string a = (temp_dir() / "rep_a.csv").string();
        const std::string b = (temp_dir() / "rep_b.csv").string();
        REQUIRE(cli({"simulate", "--config", sim_cfg, "--format", "csv", "--out", a}) == 0);
        REQUIRE(cli({"simulate", "--config", sim_cfg, "--format", "csv", "--out", b}) == 0);
        CHECK(slurp(a) == slurp(b));
        const std::string c = (temp_dir() / "rep_c.csv").string();
        REQUIRE(cli({"simulate", "--config", sim_cfg, "--format", "csv", "--seed", "99", "--out",
                     c}) == 0);
        CHECK(slurp(a) != slurp(c));
    }
}

TEST_CASE("estimate refuses a flat functional under the smoothing operator") {
    json est;
    est["schema_version"] = 1;
    est["operator"] = "brownian_bridge";
    est["error_model"] = {{"name", "logistic"}};
    json phi = json::array();
    for (int k = 0; k <= 200; ++k)
        phi.push_back(k % 2 == 0 ? 2.0 * std::sqrt(2.0) / ((k + 1) * 3.14159265358979323846) : 0.0);
    est["target"] = {{"kind", "functional"}, {"phi_coefficients", phi}, {"normalized", false}};
    est["truncation"] = {{"kind", "rate"}, {"r", 0.3}};
    est["k_max"] = 200;
    const std::string est_cfg = write_file("est_flat.json", est.dump());

    const std::string sim_cfg = write_file("sim_flat.json", R"({
        "operator": "brownian_bridge",
        "error_model": {"name": "logistic"},
        "truth": {"kind": "coefficients", "values": [0.0]},
        "n": 50,
        "seed": 5
    })");
    const std::string data = (temp_dir() / "flat_data.json").string();
    REQUIRE(cli({"simulate", "--config", sim_cfg, "--out", data}) == 0);
    CHECK(cli({"estimate", "--config", est_cfg, "--data", data, "--out",
               (temp_dir() / "flat_out.json").string()}) == 1);
}

TEST_CASE("mc subcommand") {
    const std::string cfg = write_file("mc.json", mc_config_text(2026));

    SUBCASE("writes the result JSON plus the flat CSV table") {
        const std::string out = (temp_dir() / "mc_out.json").string();
        REQUIRE(cli({"mc", "--config", cfg, "--out", out}) == 0);
        const json r = json::parse(slurp(out));
        CHECK(r["kind"] == "experiment_result");
        CHECK(r["results"].size() == 2);
        CHECK(r["config"]["master_seed"] == 2026);
        CHECK(r["bound_report"]["rows"].size() == 1);
        const std::string csv = slurp((temp_dir() / "mc_out.csv").string());
        CHECK(csv.rfind("n,estimator,", 0) == 0);
        CHECK(csv.find("one_step") != std::string::npos);
    }
    SUBCASE("worker count changes neither the JSON nor the CSV nor the plot data") {
        const std::string o1 = (temp_dir() / "w1.json").string();
        const std::string o2 = (temp_dir() / "w8.json").string();
        const std::string p1 = (temp_dir() / "w1_reps.csv").string();
        const std::string p2 = (temp_dir() / "w8_reps.csv").string();
        REQUIRE(cli({"mc", "--config", cfg, "--out", o1, "--workers", "1", "--plot-data", p1}) ==
                0);
        REQUIRE(cli({"mc", "--config", cfg, "--out", o2, "--workers", "8", "--plot-data", p2}) ==
                0);
        CHECK(slurp(o1) == slurp(o2));
        CHECK(slurp((temp_dir() / "w1.csv").string()) == slurp((temp_dir() / "w8.csv").string()));
        CHECK(slurp(p1) == slurp(p2));
        CHECK(slurp(p1).rfind("n,replication,naive,one_step", 0) == 0);
    }
    SUBCASE("seed override changes the data") {
        const std::string a = (temp_dir() / "seed_a.json").string();
        const std::string b = (temp_dir() / "seed_b.json").string();
        REQUIRE(cli({"mc", "--config", cfg, "--out", a}) == 0);
        REQUIRE(cli({"mc", "--config", cfg, "--seed", "1", "--out", b}) == 0);
        CHECK(slurp(a) != slurp(b));
    }
    SUBCASE("INVEFF_WORKERS supplies the default worker count without changing output") {
        const std::string a = (temp_dir() / "env_a.json").string();
        const std::string b = (temp_dir() / "env_b.json").string();
        REQUIRE(cli({"mc", "--config", cfg, "--out", a}) == 0);
        setenv("INVEFF_WORKERS", "3", 1);
        REQUIRE(cli({"mc", "--config", cfg, "--out", b}) == 0);
        unsetenv("INVEFF_WORKERS");
        CHECK(slurp(a) == slurp(b));
    }
    SUBCASE("csv format writes only the table") {
        const std::string out = (temp_dir() / "table_only.csv").string();
        REQUIRE(cli({"mc", "--config", cfg, "--format", "csv", "--out", out}) == 0);
        CHECK(slurp(out).rfind("n,estimator,", 0) == 0);
    }
}

TEST_CASE("mc refuses a divergent functional target with exit 1") {
    json cfg = json::parse(mc_config_text(1));
    cfg["operator"] = "brownian_bridge";
    json phi = json::array();
    for (int k = 0; k <= 200; ++k)
        phi.push_back(k % 2 == 0 ? 2.0 * std::sqrt(2.0) / ((k + 1) * 3.14159265358979323846) : 0.0);
    cfg["target"] = {{"kind", "functional"}, {"phi_coefficients", phi}, {"normalized", false}};
    cfg["k_max"] = 200;
    const std::string path = write_file("mc_flat.json", cfg.dump());
    CHECK(cli({"mc", "--config", path, "--out", (temp_dir() / "mc_flat_out.json").string()}) == 1);
}
