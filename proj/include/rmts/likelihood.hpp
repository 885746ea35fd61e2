#pragma once

// Exact Gaussian negative log-likelihood of an order-1 real model and the
// maximum-likelihood fit driver.
//
// The conditional law of X_i(T+1) given X(T) is Gaussian with
//   mean     sum_j r_ij X_j(T) + b_i
//   variance sum_j sigma_ij^2 X_j(T)^2 + sigma_b_i^2
// and the likelihood is the product over the available consecutive-pair
// transitions. Optimization runs unconstrained over the sigma parameters:
// their sign never enters the objective, and fitted standard deviations are
// reported as absolute values.

#include <cstddef>
#include <string>
#include <vector>

#include "rmts/errors.hpp"
#include "rmts/linalg.hpp"
#include "rmts/model.hpp"
#include "rmts/optimize.hpp"

namespace rmts {

// Raw parameter set (R, Sigma, b, Sigma_b). Sigma entries may carry a sign;
// only their squares are ever used.
struct ModelParams {
    RealMatrix r;
    RealMatrix sigma;
    RealVector b;
    RealVector sigma_b;

    std::size_t dim() const { return b.dim(); }

    void validate() const {
        const std::size_t k = dim();
        if (!r.square() || !sigma.square() || r.rows() != k || sigma.rows() != k ||
            sigma_b.dim() != k)
            throw ShapeError("model params: inconsistent dimensions");
    }
};

// Order-1 unconstrained model with these parameters (stds taken as |sigma|).
RmtsModel<double> to_model(const ModelParams& params);

// Parameters of an order-1 real model; stds are the effective (scale
// applied) ones.
ModelParams params_from_model(const RmtsModel<double>& model);

// Maps every model parameter (r_ij, sigma_ij, b_i, sigma_b_i) to one free
// parameter index. Index grids are row-major.
struct TyingScheme {
    std::size_t dim = 0;
    std::size_t free_count = 0;
    std::vector<std::size_t> r_index;
    std::vector<std::size_t> sigma_index;
    std::vector<std::size_t> b_index;
    std::vector<std::size_t> sigma_b_index;

    // Every parameter free: k^2 + k^2 + k + k parameters ordered r (row
    // major), sigma, b, sigma_b.
    static TyingScheme full(std::size_t k);

    // Six free parameters (r_off, sigma_off, r_diag, sigma_diag, b,
    // sigma_b); requires k >= 2.
    static TyingScheme diag_offdiag(std::size_t k);

    static TyingScheme custom(std::size_t k, std::vector<std::size_t> r_index,
                              std::vector<std::size_t> sigma_index,
                              std::vector<std::size_t> b_index,
                              std::vector<std::size_t> sigma_b_index);

    void validate() const;
};

ModelParams unpack(const TyingScheme& tying, const std::vector<double>& free);

// Inverse of unpack up to sigma signs; each free slot takes the value of the
// first parameter mapped to it.
std::vector<double> pack(const TyingScheme& tying, const ModelParams& params);

// Trial variances below this floor are clamped inside log/division during
// optimization.
inline constexpr double kVarianceFloor = 1e-12;

// Negative log-likelihood over the series' consecutive transitions. Throws
// DegenerateLikelihoodError if a conditional variance is exactly zero and
// NumericError if the sum is not finite.
double nll(const ModelParams& params, const RealSeries& series);

// Joint likelihood of several independent series: the sum of their nlls.
double nll(const ModelParams& params, const std::vector<RealSeries>& series);

namespace detail {

// Objective used by the fit driver: same sum with the variance floor applied
// unconditionally, so pathological trial points stay finite.
double nll_floored(const ModelParams& params, const RealSeries& series);

} // namespace detail

enum class OptimizerKind { nelder_mead, powell };

inline const char* to_string(OptimizerKind k) {
    return k == OptimizerKind::nelder_mead ? "nelder_mead" : "powell";
}

struct FitOptions {
    NelderMeadOptions nelder_mead;
    PowellOptions powell;
};

struct FitResult {
    ModelParams params; // stds reported as absolute values
    double nll = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
    std::string optimizer_name;
    std::vector<double> free; // raw free parameters at the optimum
};

// Minimizes the joint nll over the tying scheme's free parameters. An
// exhausted optimizer budget yields converged = false, not an error; a
// degenerate likelihood at the initial point raises InitializationError.
FitResult fit(const std::vector<RealSeries>& series, const TyingScheme& tying,
              const std::vector<double>& init, OptimizerKind optimizer,
              const FitOptions& opts = {});

} // namespace rmts
