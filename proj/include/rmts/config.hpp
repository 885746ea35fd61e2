#pragma once

// Experiment configuration: JSON in, validated typed config out, plus the
// canonical "resolved" JSON emission that every report embeds. The resolved
// form materializes defaults and always writes coefficient laws as explicit
// matrices, so re-parsing it reproduces the same experiment.
//
// Schema sketch (keys outside this set are rejected):
//
// {
//   "mode":    "simulate" | "moments" | "fit" | "verify" | "rmexp",
//   "seed":    64-bit integer,
//   "horizon": timestamps to simulate (simulate/verify),
//   "burn_in": timestamps discarded by stationary statistics,
//   "model": {
//     "order", "dim", "field": "real"|"complex",
//     "constraint": "none"|"symmetric"|"hermitian",  "scale": f,
//     "coefficients": { one lag block },    // order 1 shorthand
//     "lags": [ { lag blocks } ],
//     "noise": { "mean": ..., "std": ... }  // scalars broadcast, or arrays
//   },
//   "x0":     [ [..k..] per lag ] (defaults to zeros),
//   "series": "path.csv" or [paths],        // fit input
//   "fit":    { "tying", "optimizer", "init", "max_iter", "f_tol", "x_tol",
//               "init_step", "line_tol" },
//   "rmexp":  { "horizon", "steps", "paths", "histogram_bins",
//               "dist": { "dim", "field", "constraint", "scale", lag block } }
// }
//
// Lag blocks take one of three forms: { "preset": "goe"|"gue" },
// diagonal/off-diagonal scalars { "mean_diag", "mean_offdiag", "std_diag",
// "std_offdiag" }, or explicit { "means": [[..]], "stds": [[..]] }. Complex
// numbers are written as [re, im] pairs; plain numbers mean a zero imaginary
// part.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmts/model.hpp"
#include "rmts/rmde.hpp"

namespace rmts {

enum class Mode { simulate, moments, fit, verify, rmexp };

Mode mode_from_string(const std::string& s);
const char* to_string(Mode m);

struct FitConfig {
    std::string tying = "diag_offdiag"; // "full" | "diag_offdiag"
    std::string optimizer = "nelder_mead";
    std::vector<double> init; // empty: all ones
    std::size_t max_iter = 0; // 0: optimizer default
    double f_tol = 1e-8;
    double x_tol = 1e-8;
    double init_step = 0.1;
    double line_tol = 1e-8;
};

struct ExperimentConfig {
    Mode mode = Mode::simulate;
    std::uint64_t seed = 0;
    std::size_t horizon = 0;
    std::size_t burn_in = 1000;
    bool complex_field = false;

    std::optional<RmtsModel<double>> model_real;
    std::optional<RmtsModel<Complex>> model_complex;
    std::vector<RealVector> x0_real;
    std::vector<ComplexVector> x0_complex;

    std::vector<std::string> series;
    FitConfig fit;

    std::optional<RmexpConfig<double>> rmexp_real;
    std::optional<RmexpConfig<Complex>> rmexp_complex;
    std::size_t histogram_bins = 0;
};

// Parses and validates a configuration for the given subcommand. Throws
// ConfigError naming the offending key on any schema violation.
ExperimentConfig parse_config(const nlohmann::json& doc, Mode mode);

ExperimentConfig load_config_file(const std::string& path, Mode mode);

// Canonical JSON of the resolved experiment (defaults materialized,
// explicit matrices); parse_config(resolved_config_json(c), c.mode) yields
// the same experiment.
nlohmann::json resolved_config_json(const ExperimentConfig& config);

} // namespace rmts
