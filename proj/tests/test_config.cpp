#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "rmts/config.hpp"
#include "rmts/errors.hpp"

using namespace rmts;
using nlohmann::json;

namespace {

json table1_case1() {
    return json::parse(R"({
        "seed": 7,
        "horizon": 50000,
        "model": {
            "dim": 5,
            "coefficients": {"mean_diag": 0, "mean_offdiag": 0,
                             "std_diag": 0.125, "std_offdiag": 0.125},
            "noise": {"mean": 0, "std": 0.5}
        }
    })");
}

} // namespace

TEST_CASE("a diagonal/off-diagonal table row parses into the expected model") {
    const auto cfg = parse_config(table1_case1(), Mode::simulate);
    CHECK(cfg.seed == 7);
    CHECK(cfg.horizon == 50000);
    CHECK(!cfg.complex_field);
    REQUIRE(cfg.model_real.has_value());
    const auto& model = *cfg.model_real;
    CHECK(model.order == 1);
    CHECK(model.dim == 5);
    CHECK(model.lag_dists[0].constraint == Constraint::none);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(model.lag_dists[0].mean(i, j) == 0.0);
            CHECK(model.lag_dists[0].std(i, j) == 0.125);
        }
    CHECK(model.noise.mean[0] == 0.0);
    CHECK(model.noise.std[0] == 0.5);
    // defaulted initial state is one zero vector
    REQUIRE(cfg.x0_real.size() == 1);
    CHECK(max_norm(cfg.x0_real[0]) == 0.0);
}

TEST_CASE("presets and scale factors") {
    const auto doc = json::parse(R"({
        "horizon": 10,
        "model": {
            "dim": 5,
            "scale": 0.1,
            "coefficients": {"preset": "goe"},
            "noise": {"mean": 1, "std": 1}
        }
    })");
    const auto cfg = parse_config(doc, Mode::simulate);
    const auto& dist = cfg.model_real->lag_dists[0];
    CHECK(dist.constraint == Constraint::symmetric);
    CHECK(dist.scale == 0.1);
    CHECK(dist.std(0, 0) == std::sqrt(2.0));
    CHECK(dist.std(0, 1) == 1.0);

    const auto gue_doc = json::parse(R"({
        "model": {
            "dim": 3, "field": "complex",
            "coefficients": {"preset": "gue"},
            "noise": {"mean": [1, 0], "std": [1, 0]}
        }
    })");
    const auto gue_cfg = parse_config(gue_doc, Mode::moments);
    REQUIRE(gue_cfg.model_complex.has_value());
    CHECK(gue_cfg.model_complex->lag_dists[0].constraint == Constraint::hermitian);

    // goe preset under a complex field is rejected
    auto bad = gue_doc;
    bad["model"]["coefficients"]["preset"] = "goe";
    CHECK_THROWS_AS(parse_config(bad, Mode::moments), ConfigError);
}

TEST_CASE("unknown keys are rejected with the offending name") {
    auto doc = table1_case1();
    doc["modle"] = "simulate";
    try {
        parse_config(doc, Mode::simulate);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("modle") != std::string::npos);
    }

    auto nested = table1_case1();
    nested["model"]["coefficients"]["sigma"] = 1.0;
    CHECK_THROWS_AS(parse_config(nested, Mode::simulate), ConfigError);
}

TEST_CASE("mode mismatches and missing blocks") {
    auto doc = table1_case1();
    doc["mode"] = "moments";
    CHECK_THROWS_AS(parse_config(doc, Mode::simulate), ConfigError);

    // simulate needs a horizon
    auto no_horizon = table1_case1();
    no_horizon.erase("horizon");
    CHECK_THROWS_AS(parse_config(no_horizon, Mode::simulate), ConfigError);
    CHECK_NOTHROW(parse_config(no_horizon, Mode::moments));

    // fit needs series
    CHECK_THROWS_AS(parse_config(json::parse(R"({"fit": {"tying": "full"}})"), Mode::fit),
                    ConfigError);
    CHECK_NOTHROW(parse_config(json::parse(R"({"series": "a.csv"})"), Mode::fit));

    // rmexp needs its block
    CHECK_THROWS_AS(parse_config(json::object(), Mode::rmexp), ConfigError);
}

TEST_CASE("order-n models take one lag block per lag") {
    const auto doc = json::parse(R"({
        "horizon": 100,
        "model": {
            "dim": 2, "order": 2,
            "lags": [
                {"mean_diag": 0.3, "std_diag": 0.1, "std_offdiag": 0.1},
                {"means": [[0.1, 0], [0, 0.1]]}
            ],
            "noise": {"mean": [1, 2], "std": 0.5}
        },
        "x0": [[0, 0], [1, 1]]
    })");
    const auto cfg = parse_config(doc, Mode::simulate);
    const auto& model = *cfg.model_real;
    CHECK(model.order == 2);
    CHECK(model.lag_dists[0].mean(0, 0) == 0.3);
    CHECK(model.lag_dists[1].mean(0, 0) == 0.1);
    CHECK(model.lag_dists[1].std(0, 0) == 0.0);
    CHECK(model.noise.mean[1] == 2.0);
    REQUIRE(cfg.x0_real.size() == 2);
    CHECK(cfg.x0_real[1][0] == 1.0);

    auto wrong = doc;
    wrong["model"]["lags"] = json::array({wrong["model"]["lags"][0]});
    CHECK_THROWS_AS(parse_config(wrong, Mode::simulate), ConfigError);
}

TEST_CASE("complex scalars must be pairs in a real-field model") {
    auto doc = table1_case1();
    doc["model"]["coefficients"]["mean_diag"] = json::array({0.0, 1.0});
    CHECK_THROWS_AS(parse_config(doc, Mode::simulate), ConfigError);
}

TEST_CASE("rmexp block parses") {
    const auto doc = json::parse(R"({
        "seed": 3,
        "rmexp": {
            "horizon": 1.0, "steps": 2000, "paths": 100000,
            "dist": {"dim": 1, "mean_diag": 0, "std_diag": 1},
            "histogram_bins": 40
        }
    })");
    const auto cfg = parse_config(doc, Mode::rmexp);
    REQUIRE(cfg.rmexp_real.has_value());
    CHECK(cfg.rmexp_real->steps == 2000);
    CHECK(cfg.rmexp_real->paths == 100000);
    CHECK(cfg.rmexp_real->seed == 3);
    CHECK(cfg.histogram_bins == 40);
    CHECK(cfg.rmexp_real->dist.std(0, 0) == 1.0);
}

TEST_CASE("resolved config round trip is exact") {
    const std::vector<std::pair<json, Mode>> cases = {
        {table1_case1(), Mode::simulate},
        {json::parse(R"({
            "model": {"dim": 5, "scale": 0.1, "constraint": "symmetric",
                      "coefficients": {"std_diag": 1, "std_offdiag": 1},
                      "noise": {"mean": 1, "std": 1}}
        })"),
         Mode::moments},
        {json::parse(R"({
            "model": {"dim": 2, "field": "complex",
                      "coefficients": {"preset": "gue"},
                      "noise": {"mean": [[1, 0], [0, 1]], "std": [[1, 0], [1, 0]]}},
            "horizon": 100
        })"),
         Mode::verify},
        {json::parse(R"({"series": ["a.csv", "b.csv"],
                         "fit": {"tying": "full", "optimizer": "powell"}})"),
         Mode::fit},
        {json::parse(R"({"rmexp": {"horizon": 2.0, "steps": 100, "paths": 50,
                                    "dist": {"dim": 2, "std_diag": 1, "std_offdiag": 0.5}}})"),
         Mode::rmexp},
    };
    for (const auto& [doc, mode] : cases) {
        const auto cfg = parse_config(doc, mode);
        const json resolved = resolved_config_json(cfg);
        const auto cfg2 = parse_config(resolved, mode);
        const json resolved2 = resolved_config_json(cfg2);
        CHECK(resolved.dump() == resolved2.dump());
    }
}

TEST_CASE("config file loading") {
    const std::string path = "/tmp/rmts_test_config.json";
    {
        std::ofstream out(path);
        out << table1_case1().dump();
    }
    CHECK_NOTHROW(load_config_file(path, Mode::simulate));
    CHECK_THROWS_AS(load_config_file("/tmp/rmts_missing_config.json", Mode::simulate),
                    ConfigError);
    {
        std::ofstream out(path);
        out << "{not json";
    }
    CHECK_THROWS_AS(load_config_file(path, Mode::simulate), ConfigError);
}
