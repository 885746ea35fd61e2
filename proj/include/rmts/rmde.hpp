#pragma once

// Monte Carlo study of the first-order random matrix differential equation
// dX/dt = A(t) X + b(t) through products of per-step factors.
//
// Over horizon T split into n steps, each factor is
//
//   F_t = I + (T/n) M + (T/sqrt(n)) (A_t - M),      A_t ~ dist, M = E A_t.
//
// The deterministic part advances at rate T/n, so with zero stds the product
// converges to the matrix exponential e^{TM}. Fluctuations enter at
// T/sqrt(n), the scale at which the product law has a limit; in the 1x1
// standard-normal case that limit is the exact lognormal law
//
//   ln Y ~ N(-T^2/2, T^2),
//
// whose density rmexp_scalar_density evaluates. Factors multiply newest
// leftmost, matching the time-series product convention.
//
// Monte Carlo paths use one RNG substream per path index, so path sets are
// reproducible and order-independent; reductions run in path order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "rmts/ensembles.hpp"
#include "rmts/errors.hpp"
#include "rmts/linalg.hpp"
#include "rmts/rng.hpp"

namespace rmts {

template <Scalar T>
struct RmexpConfig {
    MatrixDistribution<T> dist; // law of A(t)
    double horizon = 1.0;       // total time
    std::size_t steps = 1;      // discretization count n
    std::size_t paths = 1;      // Monte Carlo sample count
    std::uint64_t seed = 0;

    void validate() const {
        dist.validate();
        if (!(horizon > 0.0)) throw DomainError("rmexp: horizon must be positive");
        if (steps < 1) throw DomainError("rmexp: steps must be at least 1");
        if (paths < 1) throw DomainError("rmexp: paths must be at least 1");
    }
};

// One realization of the n-step product.
template <Scalar T>
Matrix<T> rmexp_sample(const RmexpConfig<T>& cfg, RngStream& rng) {
    cfg.validate();
    const std::size_t k = cfg.dist.dim();
    const double drift_w = cfg.horizon / static_cast<double>(cfg.steps);
    const double fluct_w = cfg.horizon / std::sqrt(static_cast<double>(cfg.steps));

    Matrix<T> prod = Matrix<T>::identity(k);
    Matrix<T> factor(k, k);
    for (std::size_t t = 0; t < cfg.steps; ++t) {
        const Matrix<T> a = sample_matrix(cfg.dist, rng);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                const T mean = cfg.dist.mean(i, j);
                factor(i, j) = drift_w * mean + fluct_w * (a(i, j) - mean);
                if (i == j) factor(i, j) += T{1};
            }
        prod = factor * prod;
        if (!all_finite(prod))
            throw DivergenceError("rmexp_sample: non-finite product at step " + std::to_string(t));
    }
    return prod;
}

// Density of the scalar product limit for a 1x1 standard-normal entry law.
// Total function: zero for y <= 0 (the limit law has positive support).
double rmexp_scalar_density(double y, double t);

struct RmexpLogStats {
    double mean_log = 0.0;
    double std_log = 0.0;
    std::size_t paths_used = 0;
    std::size_t nonpositive = 0; // paths excluded from the log statistics
    std::vector<double> logs;    // ln Y per retained path, in path order
};

// Samples cfg.paths scalar products and returns statistics of ln Y. For a
// zero-mean 1x1 law with effective std s the theoretical targets are
// -(sT)^2/2 and sT (the standard-normal case gives -T^2/2 and T).
// Nonpositive paths, possible at finite n, are counted and excluded from the
// log statistics.
RmexpLogStats rmexp_moment_check(const RmexpConfig<double>& cfg);

// Discretized inhomogeneous solution
//   X(T) = V_n (x0 + sum_i V_i^{-1} b_i dt),
// with V_i the partial factor products and b_i drawn from `noise` each step
// (one A draw then one b draw per step). Exactly-zero noise draws skip the
// inversion, so with zero noise this equals rmexp_sample(cfg) * x0 on the
// same stream.
template <Scalar T>
Vector<T> inhomogeneous_solution_mc(const RmexpConfig<T>& cfg, const NoiseDistribution<T>& noise,
                                    const Vector<T>& x0, RngStream& rng) {
    cfg.validate();
    noise.validate();
    const std::size_t k = cfg.dist.dim();
    if (noise.dim() != k || x0.dim() != k)
        throw ShapeError("inhomogeneous_solution_mc: dimension mismatch");
    const double dt = cfg.horizon / static_cast<double>(cfg.steps);
    const double fluct_w = cfg.horizon / std::sqrt(static_cast<double>(cfg.steps));

    Matrix<T> prod = Matrix<T>::identity(k);
    Matrix<T> factor(k, k);
    Vector<T> c = x0;
    for (std::size_t t = 0; t < cfg.steps; ++t) {
        const Matrix<T> a = sample_matrix(cfg.dist, rng);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                const T mean = cfg.dist.mean(i, j);
                factor(i, j) = dt * mean + fluct_w * (a(i, j) - mean);
                if (i == j) factor(i, j) += T{1};
            }
        prod = factor * prod;
        Vector<T> b = sample_noise(noise, rng);
        if (max_norm(b) != 0.0) {
            Matrix<T> v_inv;
            try {
                v_inv = inverse(prod);
            } catch (const SingularMatrixError&) {
                throw SingularMatrixError("inhomogeneous_solution_mc: singular partial product at step " +
                                          std::to_string(t));
            }
            for (auto& x : b.data()) x *= dt;
            c = c + v_inv * b;
        }
    }
    return prod * c;
}

// Phi((x - mean) / sd) for the KS comparison below.
double normal_cdf(double x, double mean, double sd);

// Kolmogorov-Smirnov distance between a sample and N(mean, sd^2).
double ks_distance_normal(std::vector<double> samples, double mean, double sd);

} // namespace rmts
