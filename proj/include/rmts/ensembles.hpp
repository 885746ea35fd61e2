#pragma once

// Random matrix and noise-vector ensembles with entrywise Gaussian laws.
//
// A MatrixDistribution stores entry means and entry standard deviations.
// For the complex field the std entry packs two nonnegative reals: the real
// part is the standard deviation of the entry's real part, the imaginary
// part that of its imaginary part. hadamard_modsq(std) then gives the total
// entry variance, which is what all moment formulas consume.
//
// The scale factor multiplies coefficient standard deviations only; means
// are never scaled.
//
// Sampling order is fixed and documented so that any consumer can reproduce
// a stream:
//   none:      entries row-major; for complex entries real part then
//              imaginary part.
//   symmetric: upper triangle including the diagonal, row-major; the lower
//              triangle mirrors the upper.
//   hermitian: diagonal entries draw the real part only; strict upper
//              triangle draws real then imaginary part; the lower triangle
//              is the conjugate mirror.
// Entries whose standard deviation is exactly zero consume no randomness.

#include <cmath>
#include <cstddef>
#include <string>

#include "rmts/errors.hpp"
#include "rmts/linalg.hpp"
#include "rmts/rng.hpp"

namespace rmts {

enum class Constraint { none, symmetric, hermitian };

inline const char* to_string(Constraint c) {
    switch (c) {
        case Constraint::none: return "none";
        case Constraint::symmetric: return "symmetric";
        case Constraint::hermitian: return "hermitian";
    }
    return "?";
}

namespace detail {

inline bool nonneg_std(double s) { return s >= 0.0; }
inline bool nonneg_std(const Complex& s) { return s.real() >= 0.0 && s.imag() >= 0.0; }

} // namespace detail

template <Scalar T>
struct MatrixDistribution {
    Matrix<T> mean;
    Matrix<T> std;
    Constraint constraint = Constraint::none;
    double scale = 1.0; // factor f applied to stds

    std::size_t dim() const { return mean.rows(); }

    void validate() const {
        if (!mean.square() || !std.square() || mean.rows() != std.rows())
            throw ShapeError("matrix distribution: mean and std must be square and equal-sized");
        for (const auto& s : std.data())
            if (!detail::nonneg_std(s))
                throw DomainError("matrix distribution: standard deviations must be nonnegative");
        const std::size_t k = dim();
        if (constraint == Constraint::symmetric) {
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = i + 1; j < k; ++j)
                    if (mean(i, j) != mean(j, i) || std(i, j) != std(j, i))
                        throw DomainError("symmetric constraint requires symmetric mean and std");
        } else if (constraint == Constraint::hermitian) {
            if constexpr (!is_complex_v<T>)
                throw DomainError("hermitian constraint requires the complex field");
            else {
                for (std::size_t i = 0; i < k; ++i) {
                    if (mean(i, i).imag() != 0.0 || std(i, i).imag() != 0.0)
                        throw DomainError("hermitian constraint: diagonal must be real with real-part std only");
                    for (std::size_t j = i + 1; j < k; ++j) {
                        if (mean(i, j) != std::conj(mean(j, i)) || std(i, j) != std(j, i))
                            throw DomainError("hermitian constraint requires Hermitian mean and symmetric std");
                    }
                }
            }
        }
    }
};

template <Scalar T>
struct NoiseDistribution {
    Vector<T> mean;
    Vector<T> std;

    std::size_t dim() const { return mean.dim(); }

    void validate() const {
        if (mean.dim() != std.dim())
            throw ShapeError("noise distribution: mean and std dimensions differ");
        for (const auto& s : std.data())
            if (!detail::nonneg_std(s))
                throw DomainError("noise distribution: standard deviations must be nonnegative");
    }
};

namespace detail {

inline double draw_entry(double mean, double sd, double scale, RngStream& rng) {
    if (sd == 0.0) return mean;
    return mean + scale * sd * rng.normal();
}

inline Complex draw_entry(const Complex& mean, const Complex& sd, double scale, RngStream& rng) {
    double re = mean.real();
    double im = mean.imag();
    if (sd.real() != 0.0) re += scale * sd.real() * rng.normal();
    if (sd.imag() != 0.0) im += scale * sd.imag() * rng.normal();
    return {re, im};
}

} // namespace detail

template <Scalar T>
Matrix<T> sample_matrix(const MatrixDistribution<T>& dist, RngStream& rng) {
    dist.validate();
    const std::size_t k = dist.dim();
    Matrix<T> out(k, k);
    switch (dist.constraint) {
        case Constraint::none:
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    out(i, j) = detail::draw_entry(dist.mean(i, j), dist.std(i, j), dist.scale, rng);
            break;
        case Constraint::symmetric:
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = i; j < k; ++j) {
                    out(i, j) = detail::draw_entry(dist.mean(i, j), dist.std(i, j), dist.scale, rng);
                    out(j, i) = out(i, j);
                }
            break;
        case Constraint::hermitian:
            if constexpr (is_complex_v<T>) {
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = i; j < k; ++j) {
                        out(i, j) = detail::draw_entry(dist.mean(i, j), dist.std(i, j), dist.scale, rng);
                        out(j, i) = std::conj(out(i, j));
                    }
            }
            break;
    }
    return out;
}

template <Scalar T>
Vector<T> sample_noise(const NoiseDistribution<T>& dist, RngStream& rng) {
    dist.validate();
    Vector<T> out(dist.dim());
    for (std::size_t i = 0; i < dist.dim(); ++i)
        out[i] = detail::draw_entry(dist.mean[i], dist.std[i], 1.0, rng);
    return out;
}

// Gaussian orthogonal ensemble: symmetric, zero mean, diagonal variance 2,
// off-diagonal variance 1.
inline MatrixDistribution<double> preset_goe(std::size_t k) {
    if (k < 1) throw DomainError("preset_goe: dimension must be at least 1");
    MatrixDistribution<double> d;
    d.mean = RealMatrix(k, k, 0.0);
    d.std = RealMatrix(k, k, 1.0);
    for (std::size_t i = 0; i < k; ++i) d.std(i, i) = std::sqrt(2.0);
    d.constraint = Constraint::symmetric;
    return d;
}

// Gaussian unitary ensemble: Hermitian, zero mean, real diagonal with unit
// variance, off-diagonal real and imaginary parts with variance 1/2 each.
inline MatrixDistribution<Complex> preset_gue(std::size_t k) {
    if (k < 1) throw DomainError("preset_gue: dimension must be at least 1");
    MatrixDistribution<Complex> d;
    d.mean = ComplexMatrix(k, k, Complex{});
    d.std = ComplexMatrix(k, k, Complex{});
    const double half = std::sqrt(0.5);
    for (std::size_t i = 0; i < k; ++i) {
        d.std(i, i) = Complex{1.0, 0.0};
        for (std::size_t j = i + 1; j < k; ++j) {
            d.std(i, j) = Complex{half, half};
            d.std(j, i) = Complex{half, half};
        }
    }
    d.constraint = Constraint::hermitian;
    return d;
}

} // namespace rmts
