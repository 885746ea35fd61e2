#include "rmts/config.hpp"

#include <fstream>
#include <set>

#include "rmts/errors.hpp"

namespace rmts {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& context,
                const std::set<std::string>& allowed) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError("config: unknown key '" + item.key() + "' in " + context);
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& require_object(const json& v, const std::string& context) {
    if (!v.is_object()) throw ConfigError("config: '" + context + "' must be an object");
    return v;
}

double require_number(const json& v, const std::string& context) {
    if (!v.is_number()) throw ConfigError("config: '" + context + "' must be a number");
    return v.get<double>();
}

std::uint64_t require_uint(const json& v, const std::string& context) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError("config: '" + context + "' must be a nonnegative integer");
}

std::string require_string(const json& v, const std::string& context) {
    if (!v.is_string()) throw ConfigError("config: '" + context + "' must be a string");
    return v.get<std::string>();
}

// A scalar is a number (imaginary part zero) or an [re, im] pair.
Complex parse_scalar(const json& v, const std::string& context) {
    if (v.is_number()) return Complex(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return Complex(v[0].get<double>(), v[1].get<double>());
    throw ConfigError("config: '" + context + "' must be a number or an [re, im] pair");
}

std::vector<Complex> parse_scalar_array(const json& v, const std::string& context) {
    if (!v.is_array()) throw ConfigError("config: '" + context + "' must be an array");
    std::vector<Complex> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(parse_scalar(v[i], context + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::vector<Complex>> parse_matrix(const json& v, const std::string& context) {
    if (!v.is_array()) throw ConfigError("config: '" + context + "' must be an array of rows");
    std::vector<std::vector<Complex>> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(parse_scalar_array(v[i], context + "[" + std::to_string(i) + "]"));
    return out;
}

Constraint constraint_from_string(const std::string& s, const std::string& context) {
    if (s == "none") return Constraint::none;
    if (s == "symmetric") return Constraint::symmetric;
    if (s == "hermitian") return Constraint::hermitian;
    throw ConfigError("config: '" + context + "' must be none, symmetric, or hermitian");
}

template <Scalar T>
T narrow(const Complex& z, const std::string& context) {
    if constexpr (is_complex_v<T>) {
        return z;
    } else {
        if (z.imag() != 0.0)
            throw ConfigError("config: '" + context + "' has a nonzero imaginary part in a real-field model");
        return z.real();
    }
}

struct LagRaw {
    std::optional<std::string> preset;
    Complex mean_diag{}, mean_offdiag{}, std_diag{}, std_offdiag{};
    bool scalar_form = false;
    std::optional<std::vector<std::vector<Complex>>> means, stds;
    std::optional<Constraint> constraint;
    std::optional<double> scale;
    std::string context;
};

LagRaw parse_lag_block(const json& v, const std::string& context) {
    require_object(v, context);
    check_keys(v, context,
               {"preset", "mean_diag", "mean_offdiag", "std_diag", "std_offdiag", "means", "stds",
                "constraint", "scale"});
    LagRaw lag;
    lag.context = context;
    if (const json* p = find(v, "preset")) lag.preset = require_string(*p, context + ".preset");
    for (const char* key : {"mean_diag", "mean_offdiag", "std_diag", "std_offdiag"}) {
        if (const json* p = find(v, key)) {
            const Complex value = parse_scalar(*p, context + "." + key);
            lag.scalar_form = true;
            if (std::string(key) == "mean_diag") lag.mean_diag = value;
            if (std::string(key) == "mean_offdiag") lag.mean_offdiag = value;
            if (std::string(key) == "std_diag") lag.std_diag = value;
            if (std::string(key) == "std_offdiag") lag.std_offdiag = value;
        }
    }
    if (const json* p = find(v, "means")) lag.means = parse_matrix(*p, context + ".means");
    if (const json* p = find(v, "stds")) lag.stds = parse_matrix(*p, context + ".stds");
    if (const json* p = find(v, "constraint"))
        lag.constraint = constraint_from_string(require_string(*p, context + ".constraint"),
                                                context + ".constraint");
    if (const json* p = find(v, "scale")) lag.scale = require_number(*p, context + ".scale");

    const int forms = (lag.preset ? 1 : 0) + (lag.scalar_form ? 1 : 0) +
                      ((lag.means || lag.stds) ? 1 : 0);
    if (forms > 1)
        throw ConfigError("config: " + context +
                          " mixes preset, diagonal/off-diagonal, and explicit matrix forms");
    return lag;
}

template <Scalar T>
Matrix<T> matrix_from_rows(const std::vector<std::vector<Complex>>& rows, std::size_t k,
                           const std::string& context) {
    if (rows.size() != k)
        throw ConfigError("config: '" + context + "' must have " + std::to_string(k) + " rows");
    Matrix<T> m(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        if (rows[i].size() != k)
            throw ConfigError("config: '" + context + "' row " + std::to_string(i) + " must have " +
                              std::to_string(k) + " entries");
        for (std::size_t j = 0; j < k; ++j)
            m(i, j) = narrow<T>(rows[i][j], context);
    }
    return m;
}

template <Scalar T>
MatrixDistribution<T> build_dist(const LagRaw& lag, std::size_t k, Constraint default_constraint,
                                 double default_scale) {
    MatrixDistribution<T> dist;
    dist.scale = lag.scale.value_or(default_scale);

    if (lag.preset) {
        if (*lag.preset == "goe") {
            if constexpr (is_complex_v<T>)
                throw ConfigError("config: " + lag.context + ": preset goe needs field \"real\"");
            else
                dist = preset_goe(k);
        } else if (*lag.preset == "gue") {
            if constexpr (!is_complex_v<T>)
                throw ConfigError("config: " + lag.context + ": preset gue needs field \"complex\"");
            else
                dist = preset_gue(k);
        } else {
            throw ConfigError("config: " + lag.context + ": unknown preset '" + *lag.preset + "'");
        }
        if (lag.constraint && *lag.constraint != dist.constraint)
            throw ConfigError("config: " + lag.context + ": constraint contradicts the preset");
        dist.scale = lag.scale.value_or(default_scale);
        return dist;
    }

    dist.constraint = lag.constraint.value_or(default_constraint);
    dist.mean = Matrix<T>(k, k);
    dist.std = Matrix<T>(k, k);
    if (lag.scalar_form) {
        const T md = narrow<T>(lag.mean_diag, lag.context + ".mean_diag");
        const T mo = narrow<T>(lag.mean_offdiag, lag.context + ".mean_offdiag");
        const T sd = narrow<T>(lag.std_diag, lag.context + ".std_diag");
        const T so = narrow<T>(lag.std_offdiag, lag.context + ".std_offdiag");
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                dist.mean(i, j) = (i == j) ? md : mo;
                dist.std(i, j) = (i == j) ? sd : so;
            }
    } else {
        if (lag.means) dist.mean = matrix_from_rows<T>(*lag.means, k, lag.context + ".means");
        if (lag.stds) dist.std = matrix_from_rows<T>(*lag.stds, k, lag.context + ".stds");
    }
    return dist;
}

template <Scalar T>
Vector<T> noise_component(const json* v, std::size_t k, const std::string& context) {
    Vector<T> out(k);
    if (!v) return out;
    if (v->is_array() && !(v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number() &&
                           is_complex_v<T>)) {
        const auto values = parse_scalar_array(*v, context);
        if (values.size() != k)
            throw ConfigError("config: '" + context + "' must have " + std::to_string(k) +
                              " entries");
        for (std::size_t i = 0; i < k; ++i)
            out[i] = narrow<T>(values[i], context);
        return out;
    }
    const T value = narrow<T>(parse_scalar(*v, context), context);
    for (std::size_t i = 0; i < k; ++i) out[i] = value;
    return out;
}

template <Scalar T>
RmtsModel<T> build_model(const json& obj, std::size_t order, std::size_t dim,
                         Constraint default_constraint, double default_scale) {
    RmtsModel<T> model;
    model.order = order;
    model.dim = dim;

    std::vector<LagRaw> lags;
    if (const json* coeff = find(obj, "coefficients")) {
        if (find(obj, "lags"))
            throw ConfigError("config: model has both 'coefficients' and 'lags'");
        if (order != 1)
            throw ConfigError("config: 'coefficients' shorthand needs order 1; use 'lags'");
        lags.push_back(parse_lag_block(*coeff, "model.coefficients"));
    } else if (const json* lag_arr = find(obj, "lags")) {
        if (!lag_arr->is_array())
            throw ConfigError("config: 'model.lags' must be an array");
        if (lag_arr->size() != order)
            throw ConfigError("config: 'model.lags' must have one block per lag (order = " +
                              std::to_string(order) + ")");
        for (std::size_t i = 0; i < lag_arr->size(); ++i)
            lags.push_back(parse_lag_block((*lag_arr)[i], "model.lags[" + std::to_string(i) + "]"));
    } else {
        throw ConfigError("config: model needs 'coefficients' or 'lags'");
    }

    for (const auto& lag : lags)
        model.lag_dists.push_back(build_dist<T>(lag, dim, default_constraint, default_scale));

    const json* noise = find(obj, "noise");
    if (noise) {
        require_object(*noise, "model.noise");
        check_keys(*noise, "model.noise", {"mean", "std"});
    }
    model.noise.mean = noise_component<T>(noise ? find(*noise, "mean") : nullptr, dim,
                                          "model.noise.mean");
    model.noise.std = noise_component<T>(noise ? find(*noise, "std") : nullptr, dim,
                                         "model.noise.std");

    try {
        model.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("config: invalid model: ") + e.what());
    }
    return model;
}

template <Scalar T>
std::vector<Vector<T>> parse_x0(const json& v, std::size_t order, std::size_t dim) {
    if (!v.is_array()) throw ConfigError("config: 'x0' must be an array");
    // For the real field an inner array is always a state vector; for the
    // complex field a two-number inner array is an [re, im] entry of a flat
    // single-lag vector.
    bool nested = !v.empty() && v[0].is_array();
    if (is_complex_v<T> && nested && v[0].size() == 2 && v[0][0].is_number()) nested = false;
    std::vector<std::vector<Complex>> rows;
    if (nested) {
        rows = parse_matrix(v, "x0");
    } else {
        rows.push_back(parse_scalar_array(v, "x0"));
    }
    if (rows.size() != order)
        throw ConfigError("config: 'x0' must hold one vector per lag (order = " +
                          std::to_string(order) + ")");
    std::vector<Vector<T>> out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != dim)
            throw ConfigError("config: 'x0[" + std::to_string(r) + "]' must have " +
                              std::to_string(dim) + " entries");
        Vector<T> vec(dim);
        for (std::size_t i = 0; i < dim; ++i)
            vec[i] = narrow<T>(rows[r][i], "x0");
        out.push_back(std::move(vec));
    }
    return out;
}

void parse_model_block(const json& obj, ExperimentConfig& cfg) {
    require_object(obj, "model");
    check_keys(obj, "model",
               {"order", "dim", "field", "constraint", "scale", "coefficients", "lags", "noise"});
    const json* dim_v = find(obj, "dim");
    if (!dim_v) throw ConfigError("config: 'model.dim' is required");
    const std::size_t dim = require_uint(*dim_v, "model.dim");
    if (dim < 1) throw ConfigError("config: 'model.dim' must be at least 1");
    std::size_t order = 1;
    if (const json* p = find(obj, "order")) order = require_uint(*p, "model.order");
    if (order < 1) throw ConfigError("config: 'model.order' must be at least 1");

    std::string field = "real";
    if (const json* p = find(obj, "field")) field = require_string(*p, "model.field");
    if (field != "real" && field != "complex")
        throw ConfigError("config: 'model.field' must be \"real\" or \"complex\"");
    cfg.complex_field = field == "complex";

    Constraint default_constraint = Constraint::none;
    if (const json* p = find(obj, "constraint"))
        default_constraint = constraint_from_string(require_string(*p, "model.constraint"),
                                                    "model.constraint");
    double default_scale = 1.0;
    if (const json* p = find(obj, "scale")) default_scale = require_number(*p, "model.scale");

    if (cfg.complex_field)
        cfg.model_complex = build_model<Complex>(obj, order, dim, default_constraint, default_scale);
    else
        cfg.model_real = build_model<double>(obj, order, dim, default_constraint, default_scale);
}

void parse_fit_block(const json& obj, FitConfig& fit) {
    require_object(obj, "fit");
    check_keys(obj, "fit",
               {"tying", "optimizer", "init", "max_iter", "f_tol", "x_tol", "init_step",
                "line_tol"});
    if (const json* p = find(obj, "tying")) fit.tying = require_string(*p, "fit.tying");
    if (fit.tying != "full" && fit.tying != "diag_offdiag")
        throw ConfigError("config: 'fit.tying' must be \"full\" or \"diag_offdiag\"");
    if (const json* p = find(obj, "optimizer")) fit.optimizer = require_string(*p, "fit.optimizer");
    if (fit.optimizer != "nelder_mead" && fit.optimizer != "powell")
        throw ConfigError("config: 'fit.optimizer' must be \"nelder_mead\" or \"powell\"");
    if (const json* p = find(obj, "init")) {
        if (!p->is_array()) throw ConfigError("config: 'fit.init' must be an array of numbers");
        for (const auto& v : *p) fit.init.push_back(require_number(v, "fit.init"));
    }
    if (const json* p = find(obj, "max_iter")) fit.max_iter = require_uint(*p, "fit.max_iter");
    if (const json* p = find(obj, "f_tol")) fit.f_tol = require_number(*p, "fit.f_tol");
    if (const json* p = find(obj, "x_tol")) fit.x_tol = require_number(*p, "fit.x_tol");
    if (const json* p = find(obj, "init_step")) fit.init_step = require_number(*p, "fit.init_step");
    if (const json* p = find(obj, "line_tol")) fit.line_tol = require_number(*p, "fit.line_tol");
}

void parse_rmexp_block(const json& obj, ExperimentConfig& cfg) {
    require_object(obj, "rmexp");
    check_keys(obj, "rmexp", {"horizon", "steps", "paths", "histogram_bins", "dist"});
    const json* dist_v = find(obj, "dist");
    if (!dist_v) throw ConfigError("config: 'rmexp.dist' is required");
    require_object(*dist_v, "rmexp.dist");
    check_keys(*dist_v, "rmexp.dist",
               {"dim", "field", "constraint", "scale", "preset", "mean_diag", "mean_offdiag",
                "std_diag", "std_offdiag", "means", "stds"});
    const json* dim_v = find(*dist_v, "dim");
    if (!dim_v) throw ConfigError("config: 'rmexp.dist.dim' is required");
    const std::size_t dim = require_uint(*dim_v, "rmexp.dist.dim");
    if (dim < 1) throw ConfigError("config: 'rmexp.dist.dim' must be at least 1");

    std::string field = "real";
    if (const json* p = find(*dist_v, "field")) field = require_string(*p, "rmexp.dist.field");
    if (field != "real" && field != "complex")
        throw ConfigError("config: 'rmexp.dist.field' must be \"real\" or \"complex\"");

    json lag_obj = *dist_v;
    lag_obj.erase("dim");
    lag_obj.erase("field");
    LagRaw lag = parse_lag_block(lag_obj, "rmexp.dist");

    double horizon = 1.0;
    if (const json* p = find(obj, "horizon")) horizon = require_number(*p, "rmexp.horizon");
    std::size_t steps = 1000, paths = 10000;
    if (const json* p = find(obj, "steps")) steps = require_uint(*p, "rmexp.steps");
    if (const json* p = find(obj, "paths")) paths = require_uint(*p, "rmexp.paths");
    if (const json* p = find(obj, "histogram_bins"))
        cfg.histogram_bins = require_uint(*p, "rmexp.histogram_bins");

    if (field == "complex") {
        RmexpConfig<Complex> rc;
        rc.dist = build_dist<Complex>(lag, dim, Constraint::none, 1.0);
        rc.horizon = horizon;
        rc.steps = steps;
        rc.paths = paths;
        rc.seed = cfg.seed;
        try {
            rc.validate();
        } catch (const Error& e) {
            throw ConfigError(std::string("config: invalid rmexp block: ") + e.what());
        }
        cfg.rmexp_complex = std::move(rc);
    } else {
        RmexpConfig<double> rc;
        rc.dist = build_dist<double>(lag, dim, Constraint::none, 1.0);
        rc.horizon = horizon;
        rc.steps = steps;
        rc.paths = paths;
        rc.seed = cfg.seed;
        try {
            rc.validate();
        } catch (const Error& e) {
            throw ConfigError(std::string("config: invalid rmexp block: ") + e.what());
        }
        cfg.rmexp_real = std::move(rc);
    }
}

// ---------------------------------------------------------------------------
// Resolved emission

json scalar_to_json(double v, bool complex_field) {
    if (complex_field) return json::array({v, 0.0});
    return v;
}

json scalar_to_json(const Complex& v, bool) { return json::array({v.real(), v.imag()}); }

template <Scalar T>
json matrix_to_json(const Matrix<T>& m, bool complex_field) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j), complex_field));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <Scalar T>
json vector_to_json(const Vector<T>& v, bool complex_field) {
    json out = json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) out.push_back(scalar_to_json(v[i], complex_field));
    return out;
}

template <Scalar T>
json model_to_json(const RmtsModel<T>& model, bool complex_field) {
    json m;
    m["order"] = model.order;
    m["dim"] = model.dim;
    m["field"] = complex_field ? "complex" : "real";
    json lags = json::array();
    for (const auto& d : model.lag_dists) {
        json lag;
        lag["constraint"] = to_string(d.constraint);
        lag["scale"] = d.scale;
        lag["means"] = matrix_to_json(d.mean, complex_field);
        lag["stds"] = matrix_to_json(d.std, complex_field);
        lags.push_back(std::move(lag));
    }
    m["lags"] = std::move(lags);
    m["noise"] = {{"mean", vector_to_json(model.noise.mean, complex_field)},
                  {"std", vector_to_json(model.noise.std, complex_field)}};
    return m;
}

template <Scalar T>
json dist_to_json(const MatrixDistribution<T>& d, bool complex_field) {
    json out;
    out["dim"] = d.dim();
    out["field"] = complex_field ? "complex" : "real";
    out["constraint"] = to_string(d.constraint);
    out["scale"] = d.scale;
    out["means"] = matrix_to_json(d.mean, complex_field);
    out["stds"] = matrix_to_json(d.std, complex_field);
    return out;
}

} // namespace

Mode mode_from_string(const std::string& s) {
    if (s == "simulate") return Mode::simulate;
    if (s == "moments") return Mode::moments;
    if (s == "fit") return Mode::fit;
    if (s == "verify") return Mode::verify;
    if (s == "rmexp") return Mode::rmexp;
    throw ConfigError("config: unknown mode '" + s + "'");
}

const char* to_string(Mode m) {
    switch (m) {
        case Mode::simulate: return "simulate";
        case Mode::moments: return "moments";
        case Mode::fit: return "fit";
        case Mode::verify: return "verify";
        case Mode::rmexp: return "rmexp";
    }
    return "?";
}

ExperimentConfig parse_config(const json& doc, Mode mode) {
    if (!doc.is_object()) throw ConfigError("config: document root must be an object");
    check_keys(doc, "the top level",
               {"mode", "seed", "horizon", "burn_in", "model", "x0", "series", "fit", "rmexp"});

    ExperimentConfig cfg;
    cfg.mode = mode;
    if (const json* p = find(doc, "mode")) {
        const std::string file_mode = require_string(*p, "mode");
        if (mode_from_string(file_mode) != mode)
            throw ConfigError("config: mode '" + file_mode + "' does not match the subcommand '" +
                              to_string(mode) + "'");
    }
    if (const json* p = find(doc, "seed")) cfg.seed = require_uint(*p, "seed");
    if (const json* p = find(doc, "horizon")) cfg.horizon = require_uint(*p, "horizon");
    if (const json* p = find(doc, "burn_in")) cfg.burn_in = require_uint(*p, "burn_in");

    if (const json* p = find(doc, "model")) parse_model_block(*p, cfg);

    if (const json* p = find(doc, "x0")) {
        if (!cfg.model_real && !cfg.model_complex)
            throw ConfigError("config: 'x0' needs a 'model' block");
        if (cfg.complex_field)
            cfg.x0_complex = parse_x0<Complex>(*p, cfg.model_complex->order, cfg.model_complex->dim);
        else
            cfg.x0_real = parse_x0<double>(*p, cfg.model_real->order, cfg.model_real->dim);
    } else if (cfg.model_real) {
        cfg.x0_real.assign(cfg.model_real->order, RealVector(cfg.model_real->dim));
    } else if (cfg.model_complex) {
        cfg.x0_complex.assign(cfg.model_complex->order, ComplexVector(cfg.model_complex->dim));
    }

    if (const json* p = find(doc, "series")) {
        if (p->is_string()) {
            cfg.series.push_back(p->get<std::string>());
        } else if (p->is_array()) {
            for (const auto& s : *p) cfg.series.push_back(require_string(s, "series"));
        } else {
            throw ConfigError("config: 'series' must be a path or an array of paths");
        }
    }

    if (const json* p = find(doc, "fit")) parse_fit_block(*p, cfg.fit);
    if (const json* p = find(doc, "rmexp")) parse_rmexp_block(*p, cfg);

    switch (mode) {
        case Mode::simulate:
        case Mode::verify:
            if (!cfg.model_real && !cfg.model_complex)
                throw ConfigError("config: mode needs a 'model' block");
            if (cfg.horizon < 1)
                throw ConfigError("config: mode needs 'horizon' >= 1");
            break;
        case Mode::moments:
            if (!cfg.model_real && !cfg.model_complex)
                throw ConfigError("config: mode needs a 'model' block");
            break;
        case Mode::fit:
            if (cfg.series.empty())
                throw ConfigError("config: fit mode needs 'series'");
            break;
        case Mode::rmexp:
            if (!cfg.rmexp_real && !cfg.rmexp_complex)
                throw ConfigError("config: rmexp mode needs an 'rmexp' block");
            break;
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path, Mode mode) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc, mode);
}

json resolved_config_json(const ExperimentConfig& cfg) {
    json j;
    j["mode"] = to_string(cfg.mode);
    j["seed"] = cfg.seed;
    j["burn_in"] = cfg.burn_in;
    if (cfg.horizon > 0) j["horizon"] = cfg.horizon;

    if (cfg.model_real) {
        j["model"] = model_to_json(*cfg.model_real, false);
        json x0 = json::array();
        for (const auto& v : cfg.x0_real) x0.push_back(vector_to_json(v, false));
        j["x0"] = std::move(x0);
    } else if (cfg.model_complex) {
        j["model"] = model_to_json(*cfg.model_complex, true);
        json x0 = json::array();
        for (const auto& v : cfg.x0_complex) x0.push_back(vector_to_json(v, true));
        j["x0"] = std::move(x0);
    }

    if (!cfg.series.empty()) j["series"] = cfg.series;

    if (cfg.mode == Mode::fit) {
        json f;
        f["tying"] = cfg.fit.tying;
        f["optimizer"] = cfg.fit.optimizer;
        if (!cfg.fit.init.empty()) f["init"] = cfg.fit.init;
        if (cfg.fit.max_iter > 0) f["max_iter"] = cfg.fit.max_iter;
        f["f_tol"] = cfg.fit.f_tol;
        f["x_tol"] = cfg.fit.x_tol;
        f["init_step"] = cfg.fit.init_step;
        f["line_tol"] = cfg.fit.line_tol;
        j["fit"] = std::move(f);
    }

    if (cfg.rmexp_real || cfg.rmexp_complex) {
        json r;
        if (cfg.rmexp_real) {
            r["horizon"] = cfg.rmexp_real->horizon;
            r["steps"] = cfg.rmexp_real->steps;
            r["paths"] = cfg.rmexp_real->paths;
            r["dist"] = dist_to_json(cfg.rmexp_real->dist, false);
        } else {
            r["horizon"] = cfg.rmexp_complex->horizon;
            r["steps"] = cfg.rmexp_complex->steps;
            r["paths"] = cfg.rmexp_complex->paths;
            r["dist"] = dist_to_json(cfg.rmexp_complex->dist, true);
        }
        if (cfg.histogram_bins > 0) r["histogram_bins"] = cfg.histogram_bins;
        j["rmexp"] = std::move(r);
    }
    return j;
}

} // namespace rmts
