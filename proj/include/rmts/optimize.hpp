#pragma once

// Gradient-free minimizers: Nelder-Mead simplex and Powell conjugate
// directions. Both are deterministic: identical inputs produce identical
// iterate sequences. Non-finite objective values during the search are
// treated as +infinity; a non-finite value at the starting point (or any
// initial simplex vertex) raises InitializationError.

#include <cstddef>
#include <functional>
#include <vector>

#include "rmts/errors.hpp"

namespace rmts {

using Objective = std::function<double(const std::vector<double>&)>;

struct OptimizeResult {
    std::vector<double> x_best;
    double f_best = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
    std::vector<double> trace; // best value after each iteration, if recorded
};

struct NelderMeadOptions {
    double init_step = 0.1; // offset of the initial simplex along each axis
    double f_tol = 1e-8;    // convergence on the simplex value spread
    double x_tol = 1e-8;    // convergence on the simplex diameter
    std::size_t max_iter = 2000;
    bool record_trace = false;
};

struct PowellOptions {
    double line_tol = 1e-8; // relative tolerance of each line minimization
    double f_tol = 1e-8;    // convergence on the per-cycle relative decrease
    std::size_t max_iter = 1000; // direction cycles
    bool record_trace = false;
};

// Standard simplex method with reflection/expansion/contraction/shrink
// coefficients (1, 2, 0.5, 0.5).
OptimizeResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                           const NelderMeadOptions& opts = {});

// Powell's conjugate-direction method with bracketing plus Brent line
// minimization and the usual largest-decrease direction replacement rule.
OptimizeResult powell(const Objective& f, const std::vector<double>& x0,
                      const PowellOptions& opts = {});

} // namespace rmts
