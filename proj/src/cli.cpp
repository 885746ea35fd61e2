#include "rmts/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmts/config.hpp"
#include "rmts/errors.hpp"
#include "rmts/likelihood.hpp"
#include "rmts/moments.hpp"
#include "rmts/rmde.hpp"
#include "rmts/series_io.hpp"

namespace rmts::cli {

using nlohmann::json;

namespace {

struct CommandArgs {
    Mode mode;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format; // "json" or "csv"; empty means the mode default
};

json scalar_json(double v, bool complex_field) {
    if (complex_field) return json::array({v, 0.0});
    return v;
}

json scalar_json(const Complex& v, bool) { return json::array({v.real(), v.imag()}); }

template <Scalar T>
json vector_json(const Vector<T>& v, bool complex_field) {
    json out = json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) out.push_back(scalar_json(v[i], complex_field));
    return out;
}

template <Scalar T>
json matrix_json(const Matrix<T>& m, bool complex_field) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_json(m(i, j), complex_field));
        out.push_back(std::move(row));
    }
    return out;
}

json real_vector_json(const RealVector& v) {
    json out = json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) out.push_back(v[i]);
    return out;
}

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open '" + out_path + "' for writing");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

// key,value flattening of a report for --format csv
void flatten_json(const json& v, const std::string& prefix, std::ostream& out) {
    if (v.is_object()) {
        for (const auto& item : v.items())
            flatten_json(item.value(), prefix.empty() ? item.key() : prefix + "." + item.key(), out);
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i)
            flatten_json(v[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out << prefix << ',' << v.dump() << '\n';
    }
}

void emit_report(const json& report, const CommandArgs& args) {
    const std::string format = args.format.empty() ? "json" : args.format;
    if (format == "json") {
        write_text(report.dump(2), args.out);
    } else {
        std::ostringstream out;
        out << "key,value\n";
        flatten_json(report, "", out);
        write_text(out.str(), args.out);
    }
}

// ---------------------------------------------------------------------------
// simulate

template <Scalar T>
void run_simulate(const ExperimentConfig& cfg, const RmtsModel<T>& model,
                  const std::vector<Vector<T>>& x0, const CommandArgs& args) {
    RngStream rng(cfg.seed);
    const auto result = simulate(model, x0, cfg.horizon, rng, false);
    const std::string format = args.format.empty() ? "csv" : args.format;
    if (format == "csv") {
        std::ostringstream out;
        write_series(result.series, out);
        write_text(out.str(), args.out);
        return;
    }
    json rows = json::array();
    for (std::size_t t = 0; t < result.series.length(); ++t) {
        json row = json::array();
        row.push_back(t);
        for (std::size_t i = 0; i < result.series.dim; ++i) {
            if constexpr (is_complex_v<T>) {
                row.push_back(result.series.values[t][i].real());
                row.push_back(result.series.values[t][i].imag());
            } else {
                row.push_back(result.series.values[t][i]);
            }
        }
        rows.push_back(std::move(row));
    }
    json report;
    report["config"] = resolved_config_json(cfg);
    report["series"] = std::move(rows);
    write_text(report.dump(2), args.out);
}

// ---------------------------------------------------------------------------
// moments / verify

template <Scalar T>
json moment_report_json(const MomentReport<T>& report, bool complex_field) {
    json r;
    r["rho_mean"] = report.rho_mean;
    r["rho_var"] = report.rho_var;
    r["converges_mean"] = report.converges_mean;
    r["converges_var"] = report.converges_var;
    r["converges_cov"] = report.converges_cov;
    if (report.expectation_fp) r["expectation"] = vector_json(*report.expectation_fp, complex_field);
    if (report.variance_fp) r["variance"] = real_vector_json(*report.variance_fp);
    if (report.covariance_fp) r["covariance"] = matrix_json(*report.covariance_fp, complex_field);
    if (report.cov_offdiag_mean) r["cov_offdiag_mean"] = scalar_json(*report.cov_offdiag_mean, complex_field);
    return r;
}

template <Scalar T>
void run_moments(const ExperimentConfig& cfg, const RmtsModel<T>& model, const CommandArgs& args) {
    const auto report = convergence_report(model);
    json j;
    j["config"] = resolved_config_json(cfg);
    j["report"] = moment_report_json(report, is_complex_v<T>);
    emit_report(j, args);
}

template <Scalar T>
void run_verify(const ExperimentConfig& cfg, const RmtsModel<T>& model,
                const std::vector<Vector<T>>& x0, const CommandArgs& args) {
    constexpr bool complex_field = is_complex_v<T>;
    RngStream rng(cfg.seed);
    const auto sim = simulate(model, x0, cfg.horizon, rng, false);
    const auto mc = mc_moments(sim.series, cfg.burn_in);
    const auto theory = convergence_report(model);

    json simulated;
    simulated["mean"] = vector_json(mc.mean, complex_field);
    simulated["variance"] = real_vector_json(mc.variance);
    if (mc.cov_offdiag_mean)
        simulated["cov_offdiag_mean"] = scalar_json(*mc.cov_offdiag_mean, complex_field);

    json diff;
    if (theory.expectation_fp) {
        json d = json::array();
        for (std::size_t i = 0; i < model.dim; ++i)
            d.push_back(abs_val(mc.mean[i] - (*theory.expectation_fp)[i]));
        diff["mean"] = std::move(d);
    }
    if (theory.variance_fp) {
        json d = json::array();
        for (std::size_t i = 0; i < model.dim; ++i)
            d.push_back(std::abs(mc.variance[i] - (*theory.variance_fp)[i]));
        diff["variance"] = std::move(d);
    }
    if (theory.cov_offdiag_mean && mc.cov_offdiag_mean)
        diff["cov_offdiag_mean"] = abs_val(*mc.cov_offdiag_mean - *theory.cov_offdiag_mean);

    json j;
    j["config"] = resolved_config_json(cfg);
    j["report"] = {{"samples", mc.samples},
                   {"theory", moment_report_json(theory, complex_field)},
                   {"simulated", std::move(simulated)},
                   {"abs_diff", std::move(diff)}};
    emit_report(j, args);
}

// ---------------------------------------------------------------------------
// fit

void run_fit(const ExperimentConfig& cfg, const CommandArgs& args) {
    std::vector<RealSeries> series;
    series.reserve(cfg.series.size());
    for (const auto& path : cfg.series) series.push_back(read_real_series_file(path));
    const std::size_t k = series.front().dim;
    for (const auto& s : series)
        if (s.dim != k) throw ConfigError("fit: series dimensions differ across files");

    const TyingScheme tying =
        cfg.fit.tying == "full" ? TyingScheme::full(k) : TyingScheme::diag_offdiag(k);

    std::vector<double> init = cfg.fit.init;
    if (init.empty()) init.assign(tying.free_count, 1.0);
    if (init.size() != tying.free_count)
        throw ConfigError("fit: 'init' must have " + std::to_string(tying.free_count) +
                          " entries for this tying scheme");

    FitOptions opts;
    opts.nelder_mead.f_tol = cfg.fit.f_tol;
    opts.nelder_mead.x_tol = cfg.fit.x_tol;
    opts.nelder_mead.init_step = cfg.fit.init_step;
    opts.powell.f_tol = cfg.fit.f_tol;
    opts.powell.line_tol = cfg.fit.line_tol;
    if (cfg.fit.max_iter > 0) {
        opts.nelder_mead.max_iter = cfg.fit.max_iter;
        opts.powell.max_iter = cfg.fit.max_iter;
    }
    const OptimizerKind kind = cfg.fit.optimizer == "powell" ? OptimizerKind::powell
                                                             : OptimizerKind::nelder_mead;

    const FitResult result = fit(series, tying, init, kind, opts);

    json params;
    params["r"] = matrix_json(result.params.r, false);
    params["sigma"] = matrix_json(result.params.sigma, false);
    params["b"] = real_vector_json(result.params.b);
    params["sigma_b"] = real_vector_json(result.params.sigma_b);

    json j;
    j["config"] = resolved_config_json(cfg);
    j["report"] = {{"optimizer", result.optimizer_name},
                   {"tying", cfg.fit.tying},
                   {"iterations", result.iterations},
                   {"evaluations", result.evaluations},
                   {"converged", result.converged},
                   {"nll", result.nll},
                   {"params", std::move(params)},
                   {"free", result.free}};
    emit_report(j, args);
}

// ---------------------------------------------------------------------------
// rmexp

bool is_centered_scalar_law(const RmexpConfig<double>& cfg) {
    return cfg.dist.dim() == 1 && cfg.dist.mean(0, 0) == 0.0;
}

json histogram_json(const std::vector<double>& values, std::size_t bins) {
    double lo = values.front(), hi = values.front();
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi <= lo) hi = lo + 1.0;
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        std::size_t idx = static_cast<std::size_t>((v - lo) / width);
        if (idx >= bins) idx = bins - 1;
        ++counts[idx];
    }
    json edges = json::array();
    for (std::size_t i = 0; i <= bins; ++i) edges.push_back(lo + width * static_cast<double>(i));
    return {{"edges", std::move(edges)}, {"counts", counts}};
}

template <Scalar T>
void run_rmexp(const ExperimentConfig& cfg, const RmexpConfig<T>& rc, const CommandArgs& args) {
    json report;
    report["horizon"] = rc.horizon;
    report["steps"] = rc.steps;
    report["paths"] = rc.paths;

    bool scalar_case = false;
    if constexpr (!is_complex_v<T>) scalar_case = is_centered_scalar_law(rc);

    if (scalar_case) {
        if constexpr (!is_complex_v<T>) {
            const RmexpLogStats stats = rmexp_moment_check(rc);
            report["paths_used"] = stats.paths_used;
            report["nonpositive"] = stats.nonpositive;
            report["log_stats"] = {{"mean", stats.mean_log}, {"std", stats.std_log}};
            const double st = rc.dist.scale * rc.dist.std(0, 0) * rc.horizon;
            report["theory"] = {{"mean", -0.5 * st * st}, {"std", st}};
            if (st > 0.0)
                report["ks_normal"] = ks_distance_normal(stats.logs, -0.5 * st * st, st);
            if (cfg.histogram_bins > 0)
                report["histogram"] = histogram_json(stats.logs, cfg.histogram_bins);
        }
    } else {
        // entrywise mean and std of the product over Monte Carlo paths
        const std::size_t k = rc.dist.dim();
        Matrix<T> mean_acc(k, k);
        RealMatrix modsq_acc(k, k);
        for (std::size_t p = 0; p < rc.paths; ++p) {
            RngStream rng(rc.seed, p);
            const Matrix<T> sample = rmexp_sample(rc, rng);
            for (std::size_t i = 0; i < k * k; ++i) {
                mean_acc.data()[i] += sample.data()[i];
                modsq_acc.data()[i] += modulus_sq(sample.data()[i]);
            }
        }
        const double n = static_cast<double>(rc.paths);
        RealMatrix entry_std(k, k);
        for (std::size_t i = 0; i < k * k; ++i) {
            mean_acc.data()[i] *= 1.0 / n;
            const double second = modsq_acc.data()[i] / n;
            const double centered = second - modulus_sq(mean_acc.data()[i]);
            entry_std.data()[i] = std::sqrt(std::max(0.0, centered));
        }
        report["entry_mean"] = matrix_json(mean_acc, is_complex_v<T>);
        report["entry_std"] = matrix_json(entry_std, false);
    }

    json j;
    j["config"] = resolved_config_json(cfg);
    j["report"] = std::move(report);
    emit_report(j, args);
}

// ---------------------------------------------------------------------------

int execute(const CommandArgs& args) {
    ExperimentConfig cfg = load_config_file(args.config_path, args.mode);
    if (args.seed) {
        cfg.seed = *args.seed;
        if (cfg.rmexp_real) cfg.rmexp_real->seed = *args.seed;
        if (cfg.rmexp_complex) cfg.rmexp_complex->seed = *args.seed;
    }
    if (!args.format.empty() && args.format != "json" && args.format != "csv")
        throw ConfigError("--format must be json or csv");

    switch (args.mode) {
        case Mode::simulate:
            if (cfg.complex_field)
                run_simulate(cfg, *cfg.model_complex, cfg.x0_complex, args);
            else
                run_simulate(cfg, *cfg.model_real, cfg.x0_real, args);
            break;
        case Mode::moments:
            if (cfg.complex_field)
                run_moments(cfg, *cfg.model_complex, args);
            else
                run_moments(cfg, *cfg.model_real, args);
            break;
        case Mode::verify:
            if (cfg.complex_field)
                run_verify(cfg, *cfg.model_complex, cfg.x0_complex, args);
            else
                run_verify(cfg, *cfg.model_real, cfg.x0_real, args);
            break;
        case Mode::fit:
            run_fit(cfg, args);
            break;
        case Mode::rmexp:
            if (cfg.rmexp_complex)
                run_rmexp(cfg, *cfg.rmexp_complex, args);
            else
                run_rmexp(cfg, *cfg.rmexp_real, args);
            break;
    }
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"rmts: random-matrix time series toolkit"};
    app.require_subcommand(1);

    CommandArgs cmd;
    struct SubBinding {
        CLI::App* sub = nullptr;
        Mode mode = Mode::simulate;
        std::uint64_t seed = 0;
        CLI::Option* seed_opt = nullptr;
    };
    const std::vector<std::pair<std::string, Mode>> modes = {
        {"simulate", Mode::simulate}, {"moments", Mode::moments}, {"fit", Mode::fit},
        {"verify", Mode::verify},     {"rmexp", Mode::rmexp},
    };
    std::vector<SubBinding> bindings;
    bindings.reserve(modes.size());
    for (const auto& [name, mode] : modes) {
        auto& b = bindings.emplace_back();
        b.mode = mode;
        b.sub = app.add_subcommand(name);
        b.sub->add_option("--config", cmd.config_path, "experiment configuration (JSON)")
            ->required();
        b.seed_opt = b.sub->add_option("--seed", b.seed, "override the config seed");
        b.sub->add_option("--out", cmd.out, "output path (default stdout)");
        b.sub->add_option("--format", cmd.format, "output format: json or csv");
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    for (const auto& b : bindings) {
        if (b.sub->parsed()) {
            cmd.mode = b.mode;
            if (b.seed_opt->count() > 0) cmd.seed = b.seed;
        }
    }

    try {
        return execute(cmd);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace rmts::cli
