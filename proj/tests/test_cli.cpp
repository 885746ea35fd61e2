#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmts/cli.hpp"

using nlohmann::json;

namespace {

std::string temp_path(const std::string& name) { return "/tmp/rmts_cli_" + name; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(std::initializer_list<std::string> args) {
    return rmts::cli::run(std::vector<std::string>(args));
}

const char* kSimulateConfig = R"({
    "seed": 11,
    "horizon": 50000,
    "model": {
        "dim": 5,
        "coefficients": {"std_diag": 0.125, "std_offdiag": 0.125},
        "noise": {"mean": 0, "std": 0.5}
    }
})";

const char* kGoeCase1Config = R"({
    "seed": 5,
    "horizon": 50000,
    "model": {
        "dim": 5, "constraint": "symmetric",
        "coefficients": {"std_diag": 0.1, "std_offdiag": 0.1},
        "noise": {"mean": 1, "std": 1}
    }
})";

} // namespace

TEST_CASE("simulate writes one CSV data row per timestamp plus the initial state") {
    const std::string cfg = temp_path("sim.json");
    const std::string out = temp_path("sim.csv");
    write_file(cfg, kSimulateConfig);
    CHECK(run_cli({"simulate", "--config", cfg, "--out", out}) == 0);

    std::ifstream in(out);
    std::string line;
    std::size_t lines = 0;
    std::getline(in, line);
    CHECK(line == "t,x1,x2,x3,x4,x5");
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 50001);
}

TEST_CASE("moments reproduces the published fixed points") {
    const std::string cfg = temp_path("moments.json");
    const std::string out = temp_path("moments.json.out");
    write_file(cfg, kGoeCase1Config);
    CHECK(run_cli({"moments", "--config", cfg, "--out", out}) == 0);

    const json report = json::parse(read_file(out));
    CHECK(report["config"]["seed"] == 5);
    const auto& r = report["report"];
    CHECK(r["converges_mean"] == true);
    CHECK(r["converges_var"] == true);
    for (int i = 0; i < 5; ++i) {
        CHECK(r["expectation"][i].get<double>() == 1.0);
        CHECK(std::abs(r["variance"][i].get<double>() - 1.105) < 5e-4);
    }
    CHECK(std::abs(r["cov_offdiag_mean"].get<double>() - 0.0101) < 5e-5);
}

TEST_CASE("verify compares simulation against theory") {
    const std::string cfg = temp_path("verify.json");
    const std::string out = temp_path("verify.json.out");
    write_file(cfg, kGoeCase1Config);
    CHECK(run_cli({"verify", "--config", cfg, "--out", out}) == 0);

    const json report = json::parse(read_file(out))["report"];
    for (int i = 0; i < 5; ++i) {
        const double var_sim = report["simulated"]["variance"][i].get<double>();
        CHECK(std::abs(var_sim - 1.105) < 0.03);
        CHECK(std::abs(report["simulated"]["mean"][i].get<double>() - 1.0) < 0.02);
    }
    CHECK(report["abs_diff"]["cov_offdiag_mean"].get<double>() < 0.007);
}

TEST_CASE("verify matches the second comparison case band") {
    const std::string cfg = temp_path("verify2.json");
    const std::string out = temp_path("verify2.json.out");
    write_file(cfg, R"({
        "seed": 8,
        "horizon": 50000,
        "model": {
            "dim": 5, "constraint": "symmetric",
            "coefficients": {"std_diag": 0.25, "std_offdiag": 0.25},
            "noise": {"mean": 0.5, "std": 0.5}
        }
    })");
    CHECK(run_cli({"verify", "--config", cfg, "--out", out}) == 0);
    const json report = json::parse(read_file(out))["report"];
    for (int i = 0; i < 5; ++i)
        CHECK(std::abs(report["simulated"]["variance"][i].get<double>() - 0.477) < 0.02);
}

TEST_CASE("complex-field experiments run end to end") {
    const std::string cfg = temp_path("gue.json");
    const std::string series = temp_path("gue.csv");
    write_file(cfg, R"({
        "seed": 4,
        "horizon": 5000,
        "model": {
            "dim": 2, "field": "complex", "scale": 0.1,
            "coefficients": {"preset": "gue"},
            "noise": {"mean": [1, 0], "std": [1, 0]}
        }
    })");
    CHECK(run_cli({"simulate", "--config", cfg, "--out", series}) == 0);
    std::ifstream in(series);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x1_re,x1_im,x2_re,x2_im");

    const std::string out = temp_path("gue.out");
    CHECK(run_cli({"verify", "--config", cfg, "--out", out}) == 0);
    const json report = json::parse(read_file(out))["report"];
    // zero mean matrix: the expectation fixed point is the noise mean
    CHECK(report["theory"]["expectation"][0][0].get<double>() == 1.0);
    CHECK(report["theory"]["converges_var"] == true);
    CHECK(report["abs_diff"]["mean"][0].get<double>() < 0.05);
}

TEST_CASE("rmexp reports entry statistics for matrix laws") {
    const std::string cfg = temp_path("rmexp_mat.json");
    const std::string out = temp_path("rmexp_mat.out");
    write_file(cfg, R"({
        "seed": 6,
        "rmexp": {
            "horizon": 0.5, "steps": 100, "paths": 500,
            "dist": {"dim": 2, "mean_diag": 0.2, "std_diag": 0.3, "std_offdiag": 0.3}
        }
    })");
    CHECK(run_cli({"rmexp", "--config", cfg, "--out", out}) == 0);
    const json report = json::parse(read_file(out))["report"];
    CHECK(report.contains("entry_mean"));
    CHECK(report["entry_std"].size() == 2);
    // diagonal mean should sit near exp(0.2 * 0.5) ~ 1.105 up to MC noise
    CHECK(std::abs(report["entry_mean"][0][0].get<double>() - 1.105) < 0.1);
}

TEST_CASE("verify on a deterministic config gives exactly zero differences") {
    const std::string cfg = temp_path("verify_det.json");
    const std::string out = temp_path("verify_det.json.out");
    write_file(cfg, R"({
        "horizon": 2000,
        "model": {
            "dim": 2,
            "coefficients": {},
            "noise": {"mean": [2, -1]}
        }
    })");
    CHECK(run_cli({"verify", "--config", cfg, "--out", out}) == 0);
    const json report = json::parse(read_file(out))["report"];
    for (int i = 0; i < 2; ++i) {
        CHECK(report["abs_diff"]["mean"][i].get<double>() == 0.0);
        CHECK(report["abs_diff"]["variance"][i].get<double>() == 0.0);
    }
}

TEST_CASE("fit round trip through the command line") {
    // simulate the 3x3 benchmark and fit it back with tied parameters
    const std::string sim_cfg = temp_path("fit_sim.json");
    const std::string series = temp_path("fit_series.csv");
    write_file(sim_cfg, R"({
        "seed": 21,
        "horizon": 4000,
        "model": {
            "dim": 3,
            "coefficients": {"mean_diag": 0.5, "mean_offdiag": -0.1,
                             "std_diag": 0.1, "std_offdiag": 0.1},
            "noise": {"mean": 1, "std": 0}
        }
    })");
    CHECK(run_cli({"simulate", "--config", sim_cfg, "--out", series}) == 0);

    const std::string fit_cfg = temp_path("fit.json");
    const std::string out = temp_path("fit.json.out");
    write_file(fit_cfg, std::string(R"({
        "series": ")") + series + R"(",
        "fit": {"tying": "diag_offdiag", "optimizer": "nelder_mead"}
    })");
    CHECK(run_cli({"fit", "--config", fit_cfg, "--out", out}) == 0);

    const json report = json::parse(read_file(out))["report"];
    CHECK(report["converged"] == true);
    CHECK(std::abs(report["params"]["r"][0][0].get<double>() - 0.5) < 0.05);
    CHECK(std::abs(report["params"]["r"][0][1].get<double>() + 0.1) < 0.05);
    CHECK(std::abs(report["params"]["sigma"][0][0].get<double>() - 0.1) < 0.05);
    CHECK(std::abs(report["params"]["b"][0].get<double>() - 1.0) < 0.05);
}

TEST_CASE("rmexp emits lognormal statistics") {
    const std::string cfg = temp_path("rmexp.json");
    const std::string out = temp_path("rmexp.json.out");
    write_file(cfg, R"({
        "seed": 2,
        "rmexp": {
            "horizon": 1.0, "steps": 500, "paths": 20000,
            "dist": {"dim": 1, "std_diag": 1},
            "histogram_bins": 20
        }
    })");
    CHECK(run_cli({"rmexp", "--config", cfg, "--out", out}) == 0);
    const json report = json::parse(read_file(out))["report"];
    CHECK(std::abs(report["log_stats"]["mean"].get<double>() + 0.5) < 0.05);
    CHECK(std::abs(report["log_stats"]["std"].get<double>() - 1.0) < 0.05);
    CHECK(report["theory"]["mean"].get<double>() == -0.5);
    CHECK(report["histogram"]["counts"].size() == 20);
}

TEST_CASE("exit codes follow the contract") {
    const std::string cfg = temp_path("codes.json");

    // unknown key -> 1
    write_file(cfg, R"({"horizon": 10, "modle": {}})");
    CHECK(run_cli({"simulate", "--config", cfg}) == 1);

    // missing file -> 1
    CHECK(run_cli({"simulate", "--config", temp_path("missing.json")}) == 1);

    // numerical divergence -> 2
    write_file(cfg, R"({
        "horizon": 5000,
        "model": {"dim": 1, "coefficients": {"mean_diag": 2.0},
                   "noise": {"mean": 0, "std": 0}},
        "x0": [1]
    })");
    CHECK(run_cli({"simulate", "--config", cfg}) == 2);

    // fit on a missing series file -> 1
    write_file(cfg, R"({"series": "/tmp/rmts_cli_nonexistent_series.csv"})");
    CHECK(run_cli({"fit", "--config", cfg}) == 1);

    // bad flag usage -> 1
    CHECK(run_cli({"simulate"}) == 1);
    CHECK(run_cli({"frobnicate", "--config", cfg}) == 1);
}

TEST_CASE("reports are byte-identical across runs and echo the seed") {
    const std::string cfg = temp_path("det.json");
    const std::string out1 = temp_path("det1.out");
    const std::string out2 = temp_path("det2.out");
    write_file(cfg, kGoeCase1Config);
    CHECK(run_cli({"verify", "--config", cfg, "--out", out1}) == 0);
    CHECK(run_cli({"verify", "--config", cfg, "--out", out2}) == 0);
    CHECK(read_file(out1) == read_file(out2));

    // a seed override changes the simulation and is echoed in the config
    const std::string out3 = temp_path("det3.out");
    CHECK(run_cli({"verify", "--config", cfg, "--seed", "99", "--out", out3}) == 0);
    const json report = json::parse(read_file(out3));
    CHECK(report["config"]["seed"] == 99);
    CHECK(read_file(out1) != read_file(out3));
}

TEST_CASE("csv-formatted reports flatten to key,value rows") {
    const std::string cfg = temp_path("flat.json");
    const std::string out = temp_path("flat.csv");
    write_file(cfg, kGoeCase1Config);
    CHECK(run_cli({"moments", "--config", cfg, "--format", "csv", "--out", out}) == 0);
    const std::string text = read_file(out);
    CHECK(text.rfind("key,value\n", 0) == 0);
    CHECK(text.find("report.converges_var,true") != std::string::npos);

    CHECK(run_cli({"moments", "--config", cfg, "--format", "xml"}) == 1);
}
