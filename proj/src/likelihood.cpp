#include "rmts/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rmts {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;

template <bool Floored>
double nll_impl(const ModelParams& params, const RealSeries& series) {
    params.validate();
    series.validate();
    const std::size_t k = params.dim();
    if (series.dim != k) throw ShapeError("nll: series dimension does not match parameters");
    if (series.length() < 2) throw InsufficientDataError("nll: series needs at least 2 timestamps");

    std::vector<double> sigma_sq(k * k);
    for (std::size_t i = 0; i < k * k; ++i)
        sigma_sq[i] = params.sigma.data()[i] * params.sigma.data()[i];
    std::vector<double> x_sq(k);

    double acc = 0.0;
    for (std::size_t t = 0; t + 1 < series.length(); ++t) {
        const RealVector& x = series.values[t];
        const RealVector& xn = series.values[t + 1];
        for (std::size_t j = 0; j < k; ++j) x_sq[j] = x[j] * x[j];
        for (std::size_t i = 0; i < k; ++i) {
            double mu = params.b[i];
            double var = params.sigma_b[i] * params.sigma_b[i];
            const double* r_row = params.r.data().data() + i * k;
            const double* s2_row = sigma_sq.data() + i * k;
            for (std::size_t j = 0; j < k; ++j) {
                mu += r_row[j] * x[j];
                var += s2_row[j] * x_sq[j];
            }
            if constexpr (!Floored) {
                if (var == 0.0)
                    throw DegenerateLikelihoodError(
                        "nll: conditional variance is exactly zero at timestamp " +
                        std::to_string(t) + ", component " + std::to_string(i));
            }
            var = std::max(var, kVarianceFloor);
            const double d = xn[i] - mu;
            acc += 0.5 * (kLogTwoPi + std::log(var)) + d * d / (2.0 * var);
        }
    }
    if (!std::isfinite(acc)) throw NumericError("nll: result is not finite", acc);
    return acc;
}

} // namespace

RmtsModel<double> to_model(const ModelParams& params) {
    params.validate();
    const std::size_t k = params.dim();
    MatrixDistribution<double> coeff;
    coeff.mean = params.r;
    coeff.std = params.sigma;
    for (auto& s : coeff.std.data()) s = std::abs(s);
    coeff.constraint = Constraint::none;

    NoiseDistribution<double> noise;
    noise.mean = params.b;
    noise.std = params.sigma_b;
    for (auto& s : noise.std.data()) s = std::abs(s);

    RmtsModel<double> model;
    model.order = 1;
    model.dim = k;
    model.lag_dists = {std::move(coeff)};
    model.noise = std::move(noise);
    return model;
}

ModelParams params_from_model(const RmtsModel<double>& model) {
    model.validate();
    if (model.order != 1) throw DomainError("params_from_model: model must have order 1");
    ModelParams p;
    p.r = model.lag_dists[0].mean;
    p.sigma = model.lag_dists[0].std;
    for (auto& s : p.sigma.data()) s *= model.lag_dists[0].scale;
    p.b = model.noise.mean;
    p.sigma_b = model.noise.std;
    return p;
}

TyingScheme TyingScheme::full(std::size_t k) {
    TyingScheme t;
    t.dim = k;
    t.r_index.resize(k * k);
    t.sigma_index.resize(k * k);
    t.b_index.resize(k);
    t.sigma_b_index.resize(k);
    std::iota(t.r_index.begin(), t.r_index.end(), std::size_t{0});
    std::iota(t.sigma_index.begin(), t.sigma_index.end(), k * k);
    std::iota(t.b_index.begin(), t.b_index.end(), 2 * k * k);
    std::iota(t.sigma_b_index.begin(), t.sigma_b_index.end(), 2 * k * k + k);
    t.free_count = 2 * k * k + 2 * k;
    t.validate();
    return t;
}

TyingScheme TyingScheme::diag_offdiag(std::size_t k) {
    if (k < 2) throw DomainError("diag_offdiag tying needs dimension >= 2");
    TyingScheme t;
    t.dim = k;
    t.r_index.assign(k * k, 0);
    t.sigma_index.assign(k * k, 1);
    for (std::size_t i = 0; i < k; ++i) {
        t.r_index[i * k + i] = 2;
        t.sigma_index[i * k + i] = 3;
    }
    t.b_index.assign(k, 4);
    t.sigma_b_index.assign(k, 5);
    t.free_count = 6;
    t.validate();
    return t;
}

TyingScheme TyingScheme::custom(std::size_t k, std::vector<std::size_t> r_index,
                                std::vector<std::size_t> sigma_index,
                                std::vector<std::size_t> b_index,
                                std::vector<std::size_t> sigma_b_index) {
    TyingScheme t;
    t.dim = k;
    t.r_index = std::move(r_index);
    t.sigma_index = std::move(sigma_index);
    t.b_index = std::move(b_index);
    t.sigma_b_index = std::move(sigma_b_index);
    std::size_t max_index = 0;
    for (const auto* grid : {&t.r_index, &t.sigma_index, &t.b_index, &t.sigma_b_index})
        for (std::size_t idx : *grid) max_index = std::max(max_index, idx);
    t.free_count = max_index + 1;
    t.validate();
    return t;
}

void TyingScheme::validate() const {
    if (dim < 1) throw DomainError("tying scheme: dimension must be at least 1");
    if (r_index.size() != dim * dim || sigma_index.size() != dim * dim ||
        b_index.size() != dim || sigma_b_index.size() != dim)
        throw ShapeError("tying scheme: index grid sizes do not match the dimension");
    if (free_count == 0) throw DomainError("tying scheme: no free parameters");
    std::vector<bool> used(free_count, false);
    for (const auto* grid : {&r_index, &sigma_index, &b_index, &sigma_b_index})
        for (std::size_t idx : *grid) {
            if (idx >= free_count)
                throw DomainError("tying scheme: free index " + std::to_string(idx) +
                                  " out of range");
            used[idx] = true;
        }
    for (std::size_t i = 0; i < free_count; ++i)
        if (!used[i])
            throw DomainError("tying scheme: free parameter " + std::to_string(i) +
                              " is never referenced");
}

ModelParams unpack(const TyingScheme& tying, const std::vector<double>& free) {
    tying.validate();
    if (free.size() != tying.free_count)
        throw ShapeError("unpack: expected " + std::to_string(tying.free_count) +
                         " free parameters, got " + std::to_string(free.size()));
    const std::size_t k = tying.dim;
    ModelParams p;
    p.r = RealMatrix(k, k);
    p.sigma = RealMatrix(k, k);
    p.b = RealVector(k);
    p.sigma_b = RealVector(k);
    for (std::size_t i = 0; i < k * k; ++i) {
        p.r.data()[i] = free[tying.r_index[i]];
        p.sigma.data()[i] = free[tying.sigma_index[i]];
    }
    for (std::size_t i = 0; i < k; ++i) {
        p.b[i] = free[tying.b_index[i]];
        p.sigma_b[i] = free[tying.sigma_b_index[i]];
    }
    return p;
}

std::vector<double> pack(const TyingScheme& tying, const ModelParams& params) {
    tying.validate();
    params.validate();
    if (params.dim() != tying.dim) throw ShapeError("pack: parameter dimension mismatch");
    std::vector<double> free(tying.free_count, 0.0);
    std::vector<bool> set(tying.free_count, false);
    auto assign = [&](std::size_t idx, double value) {
        if (!set[idx]) {
            free[idx] = value;
            set[idx] = true;
        }
    };
    const std::size_t k = tying.dim;
    for (std::size_t i = 0; i < k * k; ++i) assign(tying.r_index[i], params.r.data()[i]);
    for (std::size_t i = 0; i < k * k; ++i) assign(tying.sigma_index[i], params.sigma.data()[i]);
    for (std::size_t i = 0; i < k; ++i) assign(tying.b_index[i], params.b[i]);
    for (std::size_t i = 0; i < k; ++i) assign(tying.sigma_b_index[i], params.sigma_b[i]);
    return free;
}

double nll(const ModelParams& params, const RealSeries& series) {
    return nll_impl<false>(params, series);
}

double nll(const ModelParams& params, const std::vector<RealSeries>& series) {
    if (series.empty()) throw InsufficientDataError("nll: no series given");
    double acc = 0.0;
    for (const auto& s : series) acc += nll(params, s);
    return acc;
}

namespace detail {

double nll_floored(const ModelParams& params, const RealSeries& series) {
    return nll_impl<true>(params, series);
}

} // namespace detail

FitResult fit(const std::vector<RealSeries>& series, const TyingScheme& tying,
              const std::vector<double>& init, OptimizerKind optimizer, const FitOptions& opts) {
    tying.validate();
    if (series.empty()) throw InsufficientDataError("fit: no series given");
    if (init.size() != tying.free_count)
        throw ShapeError("fit: init length must equal the tying scheme's free parameter count");

    try {
        (void)nll(unpack(tying, init), series);
    } catch (const DegenerateLikelihoodError& e) {
        throw InitializationError(std::string("fit: degenerate likelihood at init: ") + e.what());
    }

    const Objective objective = [&](const std::vector<double>& free) {
        const ModelParams p = unpack(tying, free);
        double acc = 0.0;
        for (const auto& s : series) acc += detail::nll_floored(p, s);
        return acc;
    };

    OptimizeResult opt;
    if (optimizer == OptimizerKind::nelder_mead)
        opt = nelder_mead(objective, init, opts.nelder_mead);
    else
        opt = powell(objective, init, opts.powell);

    FitResult result;
    result.free = opt.x_best;
    result.params = unpack(tying, opt.x_best);
    for (auto& s : result.params.sigma.data()) s = std::abs(s);
    for (auto& s : result.params.sigma_b.data()) s = std::abs(s);
    result.nll = opt.f_best;
    result.iterations = opt.iterations;
    result.evaluations = opt.evaluations;
    result.converged = opt.converged;
    result.optimizer_name = to_string(optimizer);
    return result;
}

} // namespace rmts
