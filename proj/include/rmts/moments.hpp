#pragma once

// Theoretical moments of order-1 models and their fixed points.
//
// Expectation:  E X(T+1) = R E X(T) + b,             fixed point (I-R)^-1 b.
// Variance:     Var(T+1) = S_b + (S + R2) Var(T) + S |E X(T)|^2  elementwise,
//               with S = |Sigma|^{o2}, R2 = |R|^{o2} (entrywise modulus
//               squares); fixed point (I - S - R2)^-1 (S_b + S |e|^2).
// Covariance:   the general recursion applies only when all coefficient
//               entries are independent; the symmetric and hermitian
//               ensembles use their own scalar pair recursions (the
//               hermitian one tracks the pseudo-variance of the entry law,
//               so it vanishes for the canonical GUE).
//
// Convergence gates are spectral-radius conditions: rho(R) < 1 for the mean
// and rho(S + R2) < 1 for the variance. The variance value additionally
// requires the mean to converge; its flag still reflects the radius alone.

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rmts/errors.hpp"
#include "rmts/linalg.hpp"
#include "rmts/model.hpp"

namespace rmts {

template <Scalar T>
struct MomentReport {
    double rho_mean = 0.0;
    double rho_var = 0.0;
    bool converges_mean = false;
    bool converges_var = false;
    bool converges_cov = false;
    std::optional<Vector<T>> expectation_fp;
    std::optional<RealVector> variance_fp;
    // Full stationary second-moment matrix where available: the diagonal
    // carries the variance fixed point, off-diagonals the pairwise
    // covariance fixed points.
    std::optional<Matrix<T>> covariance_fp;
    // Mean of the upper-triangle covariance entries (the single figure the
    // simulation comparison reports); absent for k = 1.
    std::optional<T> cov_offdiag_mean;
};

// Entrywise variances of the effective (scale-applied) coefficient law.
template <Scalar T>
RealMatrix effective_variance(const MatrixDistribution<T>& dist) {
    RealMatrix v = hadamard_modsq(dist.std);
    const double f2 = dist.scale * dist.scale;
    for (auto& x : v.data()) x *= f2;
    return v;
}

// Conditional law of X(T+1) given X(T) = x for an order-1 real model:
// componentwise Gaussian with mean R x + b and variance S x^2 + sigma_b^2.
inline std::pair<RealVector, RealVector> conditional_distribution(const RmtsModel<double>& model,
                                                                  const RealVector& x) {
    model.validate();
    if (model.order != 1)
        throw DomainError("conditional_distribution: model must have order 1");
    if (x.dim() != model.dim)
        throw ShapeError("conditional_distribution: state dimension mismatch");
    const auto& d = model.lag_dists[0];
    const RealMatrix var = effective_variance(d);
    RealVector mean(model.dim), variance(model.dim);
    for (std::size_t i = 0; i < model.dim; ++i) {
        double m = 0.0, v = 0.0;
        for (std::size_t j = 0; j < model.dim; ++j) {
            m += d.mean(i, j) * x[j];
            v += var(i, j) * x[j] * x[j];
        }
        mean[i] = m + model.noise.mean[i];
        variance[i] = v + model.noise.std[i] * model.noise.std[i];
    }
    return {mean, variance};
}

template <Scalar T>
Vector<T> expectation_step(const Matrix<T>& r, const Vector<T>& b, const Vector<T>& m) {
    return r * m + b;
}

template <Scalar T>
Vector<T> expectation_fixed_point(const Matrix<T>& r, const Vector<T>& b) {
    const double rho = spectral_radius(r);
    if (rho >= 1.0)
        throw DivergenceError("expectation fixed point does not exist: rho(R) = " +
                              std::to_string(rho));
    return solve(Matrix<T>::identity(r.rows()) - r, b);
}

// E X(T) after t steps from m0, computed by iterating the one-step map (so
// it matches t-fold expectation_step exactly).
template <Scalar T>
Vector<T> expectation_trajectory(const Matrix<T>& r, const Vector<T>& b, const Vector<T>& m0,
                                 std::size_t t) {
    Vector<T> m = m0;
    for (std::size_t i = 0; i < t; ++i) m = expectation_step(r, b, m);
    return m;
}

// One variance step. sig2 and r2 are the entrywise modulus-squared
// coefficient matrices, sigb2 the entrywise noise variances; mean is the
// current expectation (modulus applied internally for complex input).
template <Scalar T>
RealVector variance_step(const RealMatrix& sig2, const RealMatrix& r2, const RealVector& sigb2,
                         const RealVector& var, const Vector<T>& mean) {
    const std::size_t k = sigb2.dim();
    detail::require(sig2.rows() == k && r2.rows() == k && var.dim() == k && mean.dim() == k,
                    "variance_step: dimension mismatch");
    const RealVector mean_sq = hadamard_modsq(mean);
    RealVector out(k);
    for (std::size_t i = 0; i < k; ++i) {
        double acc = sigb2[i];
        for (std::size_t j = 0; j < k; ++j)
            acc += (sig2(i, j) + r2(i, j)) * var[j] + sig2(i, j) * mean_sq[j];
        out[i] = acc;
    }
    return out;
}

template <Scalar T>
RealVector variance_fixed_point(const RealMatrix& sig2, const RealMatrix& r2,
                                const RealVector& sigb2, const Vector<T>& e) {
    const double rho = spectral_radius(sig2 + r2);
    if (rho >= 1.0)
        throw DivergenceError("variance fixed point does not exist: rho(S + R2) = " +
                              std::to_string(rho));
    const std::size_t k = sigb2.dim();
    const RealVector e_sq = hadamard_modsq(e);
    RealVector rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        double acc = sigb2[i];
        for (std::size_t j = 0; j < k; ++j) acc += sig2(i, j) * e_sq[j];
        rhs[i] = acc;
    }
    return solve(RealMatrix::identity(k) - sig2 - r2, rhs);
}

// General covariance recursion, valid only when all coefficient entries are
// independent (constraint none): Cov_ij(T+1) = sum_kl r_ik r_jl Cov_kl(T)
// for i != j. The input carries variances on its diagonal; the diagonal of
// the output is copied through unchanged (it belongs to variance_step).
inline RealMatrix covariance_step_general(const MatrixDistribution<double>& coeff,
                                          const RealMatrix& cov) {
    if (coeff.constraint != Constraint::none)
        throw UnsupportedEnsembleError(
            "covariance_step_general requires independent entries; use the symmetric/hermitian forms");
    const std::size_t k = coeff.dim();
    detail::require(cov.rows() == k && cov.cols() == k,
                    "covariance_step_general: dimension mismatch");
    const RealMatrix& r = coeff.mean;
    RealMatrix out = cov;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p)
                for (std::size_t q = 0; q < k; ++q) acc += r(i, p) * r(j, q) * cov(p, q);
            out(i, j) = acc;
        }
    return out;
}

// Symmetric-ensemble pair recursion (zero mean matrix):
// Cov_ij(T+1) = sigma_ij^2 (b_i b_j + Cov_ij(T)). sigma is the effective
// (scale-applied) standard deviation of the ij entry.
inline double covariance_step_goe(double sigma, double b_i, double b_j, double cov) {
    return sigma * sigma * (b_i * b_j + cov);
}

inline double covariance_fixed_point_goe(double sigma, double b_i, double b_j) {
    const double s2 = sigma * sigma;
    if (s2 >= 1.0)
        throw DivergenceError("pair covariance does not converge: sigma^2 = " +
                              std::to_string(s2));
    return s2 * b_i * b_j / (1.0 - s2);
}

// Hermitian-ensemble pair recursion. The driving constant is the entry
// pseudo-variance Re(sigma)^2 - Im(sigma)^2, which is zero for the
// canonical GUE.
inline Complex covariance_step_gue(const Complex& sigma, const Complex& b_i, const Complex& b_j,
                                   const Complex& cov) {
    const double p = sigma.real() * sigma.real() - sigma.imag() * sigma.imag();
    return p * (std::conj(b_i) * b_j + std::conj(cov));
}

inline Complex covariance_fixed_point_gue(const Complex& sigma, const Complex& b_i,
                                          const Complex& b_j) {
    const double p = sigma.real() * sigma.real() - sigma.imag() * sigma.imag();
    if (std::abs(p) >= 1.0)
        throw DivergenceError("pair pseudo-covariance does not converge: |p| = " +
                              std::to_string(std::abs(p)));
    const Complex beta = std::conj(b_i) * b_j;
    return {p * beta.real() / (1.0 - p), p * beta.imag() / (1.0 + p)};
}

namespace detail {

// Stationary off-diagonal covariances for an independent-entry real model,
// iterated with the diagonal pinned at the variance fixed point.
inline std::optional<RealMatrix> covariance_fp_general(const MatrixDistribution<double>& coeff,
                                                       const RealVector& var_fp) {
    const std::size_t k = coeff.dim();
    RealMatrix cov(k, k);
    for (std::size_t i = 0; i < k; ++i) cov(i, i) = var_fp[i];
    for (int iter = 0; iter < 100000; ++iter) {
        RealMatrix next = covariance_step_general(coeff, cov);
        double delta = 0.0;
        for (std::size_t i = 0; i < cov.data().size(); ++i)
            delta = std::max(delta, std::abs(next.data()[i] - cov.data()[i]));
        cov = std::move(next);
        if (delta <= 1e-13 * std::max(1.0, max_norm(cov))) return cov;
    }
    return std::nullopt;
}

inline bool is_zero_matrix(const RealMatrix& m) { return max_norm(m) == 0.0; }
inline bool is_zero_matrix(const ComplexMatrix& m) { return max_norm(m) == 0.0; }

} // namespace detail

// Assembles fixed points and convergence diagnostics for an order-1 model.
//
// Covariance reporting is ensemble-dependent:
//   none (real field):   Eq.-style general recursion iterated to its fixed
//                        point with the variance on the diagonal.
//   symmetric/hermitian: pairwise recursions, available for the zero-mean
//                        ensembles they are derived for.
//   none (complex):      not derived; omitted.
template <Scalar T>
MomentReport<T> convergence_report(const RmtsModel<T>& model) {
    model.validate();
    if (model.order != 1) throw DomainError("convergence_report: model must have order 1");
    const auto& d = model.lag_dists[0];
    const std::size_t k = model.dim;

    const RealMatrix sig2 = effective_variance(d);
    const RealMatrix r2 = hadamard_modsq(d.mean);
    const RealVector sigb2 = hadamard_modsq(model.noise.std);

    MomentReport<T> report;
    report.rho_mean = spectral_radius(d.mean);
    report.rho_var = spectral_radius(sig2 + r2);
    report.converges_mean = report.rho_mean < 1.0;
    report.converges_var = report.rho_var < 1.0;

    if (report.converges_mean)
        report.expectation_fp = expectation_fixed_point(d.mean, model.noise.mean);
    if (report.converges_mean && report.converges_var)
        report.variance_fp = variance_fixed_point(sig2, r2, sigb2, *report.expectation_fp);

    if (report.variance_fp) {
        const Vector<T>& e = *report.expectation_fp;
        const RealVector& v = *report.variance_fp;
        if (d.constraint == Constraint::none) {
            if constexpr (!is_complex_v<T>) {
                MatrixDistribution<double> eff = d;
                if (auto cov = detail::covariance_fp_general(eff, v)) {
                    report.covariance_fp = *cov;
                    report.converges_cov = true;
                }
            }
        } else if (detail::is_zero_matrix(d.mean)) {
            // pairwise ensemble recursions assume a zero mean matrix
            Matrix<T> cov(k, k);
            bool ok = true;
            try {
                for (std::size_t i = 0; i < k && ok; ++i) {
                    cov(i, i) = T(v[i]);
                    for (std::size_t j = i + 1; j < k; ++j) {
                        T fp;
                        if constexpr (is_complex_v<T>) {
                            const Complex sigma = d.scale * d.std(i, j);
                            fp = covariance_fixed_point_gue(sigma, e[i], e[j]);
                            cov(i, j) = fp;
                            cov(j, i) = std::conj(fp);
                        } else {
                            fp = covariance_fixed_point_goe(d.scale * d.std(i, j), e[i], e[j]);
                            cov(i, j) = fp;
                            cov(j, i) = fp;
                        }
                    }
                }
            } catch (const DivergenceError&) {
                ok = false;
            }
            if (ok) {
                report.covariance_fp = std::move(cov);
                report.converges_cov = true;
            }
        }
    }

    if (report.covariance_fp && k >= 2) {
        T acc{};
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) acc += (*report.covariance_fp)(i, j);
        report.cov_offdiag_mean = acc * (1.0 / (0.5 * static_cast<double>(k * (k - 1))));
    }
    return report;
}

template <Scalar T>
struct McMoments {
    Vector<T> mean;
    RealVector variance;
    // Mean of the upper-triangle pairwise sample covariances; absent for
    // k = 1.
    std::optional<T> cov_offdiag_mean;
    std::size_t samples = 0;
};

// Sample moments of a trajectory after discarding the first `burn_in`
// timestamps. Variances and covariances use the n-1 normalization; the
// complex covariance convention is E[(X_i - m_i) conj(X_j - m_j)].
template <Scalar T>
McMoments<T> mc_moments(const SeriesData<T>& series, std::size_t burn_in = 1000) {
    series.validate();
    if (series.length() < burn_in + 2)
        throw InsufficientDataError("mc_moments: series has " + std::to_string(series.length()) +
                                    " timestamps, need at least burn_in + 2 = " +
                                    std::to_string(burn_in + 2));
    const std::size_t k = series.dim;
    const std::size_t n = series.length() - burn_in;

    McMoments<T> out;
    out.samples = n;
    out.mean = Vector<T>(k);
    out.variance = RealVector(k);
    for (std::size_t t = burn_in; t < series.length(); ++t)
        for (std::size_t i = 0; i < k; ++i) out.mean[i] += series.values[t][i];
    for (std::size_t i = 0; i < k; ++i) out.mean[i] *= 1.0 / static_cast<double>(n);

    for (std::size_t t = burn_in; t < series.length(); ++t)
        for (std::size_t i = 0; i < k; ++i)
            out.variance[i] += modulus_sq(series.values[t][i] - out.mean[i]);
    for (std::size_t i = 0; i < k; ++i) out.variance[i] /= static_cast<double>(n - 1);

    if (k >= 2) {
        T acc{};
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                T cov{};
                for (std::size_t t = burn_in; t < series.length(); ++t) {
                    const T di = series.values[t][i] - out.mean[i];
                    T dj = series.values[t][j] - out.mean[j];
                    if constexpr (is_complex_v<T>) dj = std::conj(dj);
                    cov += di * dj;
                }
                acc += cov * (1.0 / static_cast<double>(n - 1));
            }
        out.cov_offdiag_mean = acc * (1.0 / (0.5 * static_cast<double>(k * (k - 1))));
    }
    return out;
}

} // namespace rmts
