#pragma once

// Shared helpers and independent oracles for the test suites. Everything
// here is deliberately implemented from first principles (quadratic roots,
// brute-force sums, plain quadrature) so the checks stay independent of the
// library code paths they verify.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "rmts/linalg.hpp"
#include "rmts/rng.hpp"

namespace testsupport {

// Spectral radius of a 2x2 matrix straight from the quadratic formula.
inline double spectral_radius_2x2_oracle(const rmts::RealMatrix& m) {
    const std::complex<double> tr = m(0, 0) + m(1, 1);
    const std::complex<double> det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * det);
    const std::complex<double> l1 = 0.5 * (tr + disc);
    const std::complex<double> l2 = 0.5 * (tr - disc);
    return std::max(std::abs(l1), std::abs(l2));
}

// Dominant-eigenvalue power iteration for entrywise nonnegative matrices
// (Perron root), used as a second spectral-radius oracle.
inline double power_iteration_oracle(const rmts::RealMatrix& m, int iters = 20000) {
    const std::size_t n = m.rows();
    std::vector<double> v(n, 1.0);
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) w[i] += m(i, j) * v[j];
        double norm = 0.0;
        for (double x : w) norm = std::max(norm, std::abs(x));
        if (norm == 0.0) return 0.0;
        for (double& x : w) x /= norm;
        lambda = norm;
        v = std::move(w);
    }
    return lambda;
}

inline rmts::RealMatrix random_matrix(std::size_t rows, std::size_t cols, rmts::RngStream& rng,
                                      double lo = -1.0, double hi = 1.0) {
    rmts::RealMatrix m(rows, cols);
    for (auto& x : m.data()) x = lo + (hi - lo) * rng.uniform();
    return m;
}

inline rmts::RealVector random_vector(std::size_t dim, rmts::RngStream& rng, double lo = -1.0,
                                      double hi = 1.0) {
    rmts::RealVector v(dim);
    for (auto& x : v.data()) x = lo + (hi - lo) * rng.uniform();
    return v;
}

// Diagonally dominant random matrix; safely invertible.
inline rmts::RealMatrix random_well_conditioned(std::size_t n, rmts::RngStream& rng) {
    rmts::RealMatrix m = random_matrix(n, n, rng);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += static_cast<double>(n) + 1.0;
    return m;
}

// Recursive adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int depth = 40) {
    const auto simpson = [&](double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
    };
    std::function<double(double, double, double, int)> go = [&](double lo, double hi, double whole,
                                                                int d) {
        const double mid = 0.5 * (lo + hi);
        const double left = simpson(lo, mid);
        const double right = simpson(mid, hi);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return go(lo, mid, left, d - 1) + go(mid, hi, right, d - 1);
    };
    return go(a, b, simpson(a, b), depth);
}

// Sample mean and standard deviation (n-1 normalization).
inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    return {mean, sd};
}

// Pearson correlation of two equal-length samples.
inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const auto [ma, sa] = mean_std(a);
    const auto [mb, sb] = mean_std(b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - ma) * (b[i] - mb);
    acc /= static_cast<double>(a.size() - 1);
    return acc / (sa * sb);
}

} // namespace testsupport
