#pragma once

// RMTS(n): vector autoregression whose lag coefficients are random matrices
// redrawn at every timestep.
//
//   X(T+1) = sum_{lag=1..n} A_lag(T) X(T-lag+1) + b(T)
//
// simulate() iterates this relation from n initial vectors and can log every
// realized draw. replay() re-runs the same iteration from a DrawLog, which
// is how the closed-form and companion equivalences are verified exactly:
// both paths accumulate each output component left to right across lags, so
// a companion-form trajectory assembled from the same draws is bit-equal.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rmts/ensembles.hpp"
#include "rmts/errors.hpp"
#include "rmts/linalg.hpp"
#include "rmts/rng.hpp"

namespace rmts {

template <Scalar T>
struct RmtsModel {
    std::size_t order = 1;
    std::size_t dim = 1;
    std::vector<MatrixDistribution<T>> lag_dists; // lag 1 ... order
    NoiseDistribution<T> noise;

    void validate() const {
        if (order < 1) throw DomainError("model: order must be at least 1");
        if (dim < 1) throw DomainError("model: dimension must be at least 1");
        if (lag_dists.size() != order)
            throw ShapeError("model: expected one coefficient distribution per lag");
        for (const auto& d : lag_dists) {
            d.validate();
            if (d.dim() != dim) throw ShapeError("model: lag distribution dimension mismatch");
        }
        noise.validate();
        if (noise.dim() != dim) throw ShapeError("model: noise dimension mismatch");
    }
};

// Observed or simulated trajectory; values[t] is X(t).
template <Scalar T>
struct SeriesData {
    std::size_t dim = 0;
    std::vector<Vector<T>> values;

    std::size_t length() const { return values.size(); }

    void validate() const {
        for (const auto& v : values)
            if (v.dim() != dim) throw ShapeError("series: component count varies across rows");
    }
};

using RealSeries = SeriesData<double>;
using ComplexSeries = SeriesData<Complex>;

// Realized draws of one simulation: coeffs[t][l] is A_{l+1} at step t and
// noise[t] is b at step t. Step t produces X(t + order).
template <Scalar T>
struct DrawLog {
    std::size_t order = 1;
    std::size_t dim = 1;
    std::vector<std::vector<Matrix<T>>> coeffs;
    std::vector<Vector<T>> noise;

    std::size_t steps() const { return noise.size(); }
};

template <Scalar T>
struct SimulationResult {
    SeriesData<T> series;
    std::optional<DrawLog<T>> draws;
};

namespace detail {

// One iteration step. Accumulates each component across lags in order
// (lag 1 columns, lag 2 columns, ...) and adds the noise term last; the
// companion-form equivalence depends on this exact order.
template <Scalar T>
Vector<T> advance(const std::vector<Matrix<T>>& coeffs, const Vector<T>& noise,
                  const std::vector<Vector<T>>& states, std::size_t next_index) {
    const std::size_t k = noise.dim();
    const std::size_t order = coeffs.size();
    Vector<T> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        T acc{};
        for (std::size_t lag = 1; lag <= order; ++lag) {
            const Matrix<T>& a = coeffs[lag - 1];
            const Vector<T>& x = states[next_index - lag];
            for (std::size_t j = 0; j < k; ++j) acc += a(i, j) * x[j];
        }
        out[i] = acc + noise[i];
    }
    return out;
}

} // namespace detail

// Iterates the model for `horizon` steps from `order` initial vectors
// (x0[0] = X(0), ..., x0[order-1] = X(order-1)). The returned series holds
// horizon + order values. Draw logging is opt-in.
template <Scalar T>
SimulationResult<T> simulate(const RmtsModel<T>& model, const std::vector<Vector<T>>& x0,
                             std::size_t horizon, RngStream& rng, bool keep_draws = false) {
    model.validate();
    if (x0.size() != model.order)
        throw ShapeError("simulate: expected one initial vector per lag");
    for (const auto& v : x0)
        if (v.dim() != model.dim) throw ShapeError("simulate: initial vector dimension mismatch");
    if (horizon < 1) throw DomainError("simulate: horizon must be at least 1");

    SimulationResult<T> result;
    result.series.dim = model.dim;
    result.series.values = x0;
    result.series.values.reserve(horizon + model.order);
    if (keep_draws) {
        result.draws.emplace();
        result.draws->order = model.order;
        result.draws->dim = model.dim;
        result.draws->coeffs.reserve(horizon);
        result.draws->noise.reserve(horizon);
    }

    std::vector<Matrix<T>> coeffs(model.order);
    for (std::size_t step = 0; step < horizon; ++step) {
        for (std::size_t lag = 0; lag < model.order; ++lag)
            coeffs[lag] = sample_matrix(model.lag_dists[lag], rng);
        Vector<T> b = sample_noise(model.noise, rng);
        Vector<T> next =
            detail::advance(coeffs, b, result.series.values, result.series.values.size());
        if (!all_finite(next))
            throw DivergenceError("simulate: non-finite value at timestamp " +
                                  std::to_string(result.series.values.size()));
        if (keep_draws) {
            result.draws->coeffs.push_back(coeffs);
            result.draws->noise.push_back(std::move(b));
        }
        result.series.values.push_back(std::move(next));
    }
    return result;
}

// Re-runs the iteration from logged draws; equals the original simulation
// bit for bit.
template <Scalar T>
SeriesData<T> replay(const DrawLog<T>& draws, const std::vector<Vector<T>>& x0) {
    if (x0.size() != draws.order)
        throw ShapeError("replay: expected one initial vector per lag");
    SeriesData<T> series;
    series.dim = draws.dim;
    series.values = x0;
    series.values.reserve(draws.steps() + draws.order);
    for (std::size_t step = 0; step < draws.steps(); ++step) {
        Vector<T> next = detail::advance(draws.coeffs[step], draws.noise[step], series.values,
                                         series.values.size());
        if (!all_finite(next))
            throw DivergenceError("replay: non-finite value at timestamp " +
                                  std::to_string(series.values.size()));
        series.values.push_back(std::move(next));
    }
    return series;
}

// Product of logged order-1 coefficients V(T) = A(T) A(T-1) ... A(0), the
// newest draw leftmost, so that V(T) X(0) equals X(T+1) when b = 0.
template <Scalar T>
Matrix<T> product_V(const DrawLog<T>& draws, std::size_t upto) {
    if (draws.order != 1) throw DomainError("product_V: draw log must come from an order-1 model");
    if (upto >= draws.steps()) throw ShapeError("product_V: timestamp beyond the logged range");
    Matrix<T> v = draws.coeffs[0][0];
    for (std::size_t t = 1; t <= upto; ++t) v = draws.coeffs[t][0] * v;
    return v;
}

namespace detail {

// Pivot-based singularity check, relative to the matrix scale: products of
// contractive draws shrink uniformly in magnitude, which says nothing about
// their conditioning.
template <Scalar T>
bool numerically_singular(Matrix<T> a) {
    const std::size_t n = a.rows();
    const double threshold = 1e-12 * std::max(max_norm(a), 1e-300);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = abs_val(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double cand = abs_val(a(r, col));
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best < threshold) return true;
        if (pivot != col)
            for (std::size_t j = col; j < n; ++j) std::swap(a(col, j), a(pivot, j));
        const T inv_pivot = T{1} / a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const T factor = a(r, col) * inv_pivot;
            if (factor == T{}) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
        }
    }
    return false;
}

} // namespace detail

// Closed-form order-1 solution from logged draws:
//
//   X(T+1) = V(T+1) (X(0) + sum_{i=0..T} V(i+1)^{-1} b(i)),
//
// where V(i) is the product of the first i coefficient draws (V(0) = I).
//
// Each summand is evaluated as V(T+1) V(i+1)^{-1} b(i) = A(T)...A(i+1) b(i),
// which on a draw log is exact algebra, not a numerical inverse. The naive
// left-to-right sum is hopeless in floating point: the partial products'
// singular values spread exponentially (their Lyapunov spectrum), so
// V(i+1)^{-1} b(i) explodes while the final product cancels it back, burning
// one digit per unit of spread. The tail-product form keeps every
// intermediate bounded. Eq.-(8)-style invertibility is still enforced: when
// any noise term contributes, a numerically singular coefficient draw raises
// a singularity error naming the first product that loses rank.
template <Scalar T>
Vector<T> closed_form_solution(const DrawLog<T>& draws, const Vector<T>& x0, std::size_t t_end) {
    if (draws.order != 1)
        throw DomainError("closed_form_solution: draw log must come from an order-1 model");
    if (t_end >= draws.steps())
        throw ShapeError("closed_form_solution: timestamp beyond the logged range");
    if (x0.dim() != draws.dim) throw ShapeError("closed_form_solution: x0 dimension mismatch");

    bool has_noise = false;
    for (std::size_t i = 0; i <= t_end; ++i)
        if (max_norm(draws.noise[i]) != 0.0) has_noise = true;
    if (has_noise) {
        for (std::size_t i = 0; i <= t_end; ++i)
            if (detail::numerically_singular(draws.coeffs[i][0]))
                throw SingularMatrixError("closed_form_solution: V(" + std::to_string(i + 1) +
                                          ") is numerically singular");
    }

    // homogeneous part V(T+1) x0
    Vector<T> out = x0;
    for (std::size_t j = 0; j <= t_end; ++j) out = draws.coeffs[j][0] * out;

    // noise terms A(T)...A(i+1) b(i)
    for (std::size_t i = 0; i <= t_end; ++i) {
        const Vector<T>& b = draws.noise[i];
        if (max_norm(b) == 0.0) continue;
        Vector<T> term = b;
        for (std::size_t j = i + 1; j <= t_end; ++j) term = draws.coeffs[j][0] * term;
        out = out + term;
    }
    return out;
}

// Companion form: rewrites an order-n model as an order-1 model on the
// stacked state [X(T); X(T-1); ...; X(T-n+1)] of dimension n*k. The top
// block row carries the lag distributions, the subdiagonal carries
// deterministic identity blocks, and the noise is padded with deterministic
// zeros.
//
// Only lag distributions without a symmetry constraint can be re-sampled in
// companion form (a per-block constraint is not expressible in a single
// k*n-dimensional distribution); constrained models can still be verified
// through companion_draws/replay.
template <Scalar T>
RmtsModel<T> companion_form(const RmtsModel<T>& model) {
    model.validate();
    if (model.order < 2) throw DomainError("companion_form: model must have order >= 2");
    for (const auto& d : model.lag_dists)
        if (d.constraint != Constraint::none)
            throw UnsupportedEnsembleError(
                "companion_form: constrained lag ensembles are not expressible; replay the draws instead");

    const std::size_t k = model.dim;
    const std::size_t n = model.order;
    const std::size_t kk = n * k;

    MatrixDistribution<T> big;
    big.mean = Matrix<T>(kk, kk);
    big.std = Matrix<T>(kk, kk);
    big.constraint = Constraint::none;
    big.scale = 1.0;
    for (std::size_t lag = 0; lag < n; ++lag) {
        const auto& d = model.lag_dists[lag];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                big.mean(i, lag * k + j) = d.mean(i, j);
                // bake the per-lag scale factor into the stds
                big.std(i, lag * k + j) = [&] {
                    if constexpr (is_complex_v<T>)
                        return Complex(d.scale * d.std(i, j).real(), d.scale * d.std(i, j).imag());
                    else
                        return d.scale * d.std(i, j);
                }();
            }
    }
    for (std::size_t i = k; i < kk; ++i) big.mean(i, i - k) = T{1};

    NoiseDistribution<T> big_noise;
    big_noise.mean = Vector<T>(kk);
    big_noise.std = Vector<T>(kk);
    for (std::size_t i = 0; i < k; ++i) {
        big_noise.mean[i] = model.noise.mean[i];
        big_noise.std[i] = model.noise.std[i];
    }

    RmtsModel<T> companion;
    companion.order = 1;
    companion.dim = kk;
    companion.lag_dists = {std::move(big)};
    companion.noise = std::move(big_noise);
    return companion;
}

// Assembles the companion-form draws corresponding to an order-n draw log.
template <Scalar T>
DrawLog<T> companion_draws(const DrawLog<T>& draws) {
    if (draws.order < 2) throw DomainError("companion_draws: draw log must have order >= 2");
    const std::size_t k = draws.dim;
    const std::size_t n = draws.order;
    const std::size_t kk = n * k;

    DrawLog<T> out;
    out.order = 1;
    out.dim = kk;
    out.coeffs.reserve(draws.steps());
    out.noise.reserve(draws.steps());
    for (std::size_t step = 0; step < draws.steps(); ++step) {
        Matrix<T> big(kk, kk);
        for (std::size_t lag = 0; lag < n; ++lag)
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    big(i, lag * k + j) = draws.coeffs[step][lag](i, j);
        for (std::size_t i = k; i < kk; ++i) big(i, i - k) = T{1};
        Vector<T> noise(kk);
        for (std::size_t i = 0; i < k; ++i) noise[i] = draws.noise[step][i];
        out.coeffs.push_back({std::move(big)});
        out.noise.push_back(std::move(noise));
    }
    return out;
}

// Stacked companion initial state [X(n-1); X(n-2); ...; X(0)].
template <Scalar T>
Vector<T> stack_initial(const std::vector<Vector<T>>& x0) {
    if (x0.empty()) throw ShapeError("stack_initial: no initial vectors");
    const std::size_t k = x0.front().dim();
    Vector<T> out(x0.size() * k);
    for (std::size_t block = 0; block < x0.size(); ++block) {
        const Vector<T>& src = x0[x0.size() - 1 - block];
        if (src.dim() != k) throw ShapeError("stack_initial: initial vector dimension mismatch");
        for (std::size_t i = 0; i < k; ++i) out[block * k + i] = src[i];
    }
    return out;
}

} // namespace rmts
