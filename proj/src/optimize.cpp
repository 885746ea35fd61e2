#include "rmts/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rmts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double guarded_eval(const Objective& f, const std::vector<double>& x, std::size_t& evals) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
}

} // namespace

// ---------------------------------------------------------------------------
// Nelder-Mead

OptimizeResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                           const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    if (n == 0) throw InitializationError("nelder_mead: empty starting point");

    OptimizeResult result;
    std::vector<std::vector<double>> simplex(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opts.init_step;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        fv[i] = guarded_eval(f, simplex[i], result.evaluations);
        if (!std::isfinite(fv[i]))
            throw InitializationError("nelder_mead: objective not finite at an initial simplex vertex");
    }

    // index order, best first; stable to keep the method deterministic
    std::vector<std::size_t> order(n + 1);
    auto sort_order = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    };
    sort_order();

    auto diameter = [&] {
        double d = 0.0;
        const auto& best = simplex[order[0]];
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d = std::max(d, std::abs(simplex[order[i]][j] - best[j]));
        return d;
    };

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    while (result.iterations < opts.max_iter) {
        const std::size_t best = order[0];
        const std::size_t worst = order[n];
        const std::size_t second_worst = order[n - 1];

        // both the value spread and the diameter must collapse: two vertices
        // placed symmetrically about a minimum already agree in f
        if (fv[worst] - fv[best] < opts.f_tol && diameter() < opts.x_tol) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - simplex[worst][j]);
        const double fr = guarded_eval(f, xr, result.evaluations);

        bool shrink = false;
        if (fr < fv[best]) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (xr[j] - centroid[j]);
            const double fe = guarded_eval(f, xe, result.evaluations);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second_worst]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else if (fr < fv[worst]) {
            for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (xr[j] - centroid[j]);
            const double fc = guarded_eval(f, xc, result.evaluations);
            if (fc <= fr) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                shrink = true;
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (simplex[worst][j] - centroid[j]);
            const double fc = guarded_eval(f, xc, result.evaluations);
            if (fc < fv[worst]) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                shrink = true;
            }
        }

        if (shrink) {
            for (std::size_t i = 0; i <= n; ++i) {
                if (i == order[0]) continue;
                for (std::size_t j = 0; j < n; ++j)
                    simplex[i][j] = simplex[order[0]][j] + 0.5 * (simplex[i][j] - simplex[order[0]][j]);
                fv[i] = guarded_eval(f, simplex[i], result.evaluations);
            }
        }

        sort_order();
        ++result.iterations;
        if (opts.record_trace) result.trace.push_back(fv[order[0]]);
    }

    result.x_best = simplex[order[0]];
    result.f_best = fv[order[0]];
    return result;
}

// ---------------------------------------------------------------------------
// Powell

namespace {

struct LineFn {
    const Objective& f;
    const std::vector<double>& origin;
    const std::vector<double>& dir;
    std::size_t& evals;
    mutable std::vector<double> scratch;

    double operator()(double t) const {
        scratch = origin;
        for (std::size_t j = 0; j < scratch.size(); ++j) scratch[j] += t * dir[j];
        ++evals;
        const double v = f(scratch);
        return std::isfinite(v) ? v : kInf;
    }
};

// Downhill bracketing of a minimum (golden expansion with parabolic trial
// steps). f0 is the already-known value at a.
template <typename Fn>
void bracket(const Fn& g, double& a, double& b, double& c, double& fa, double& fb, double& fc,
             double f0) {
    constexpr double kGold = 1.618034;
    constexpr double kLimit = 100.0;
    constexpr double kTiny = 1e-20;
    fa = f0;
    fb = g(b);
    if (fb > fa) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    c = b + kGold * (b - a);
    fc = g(c);
    int guard = 0;
    while (fb > fc && ++guard < 80) {
        const double r = (b - a) * (fb - fc);
        const double q = (b - c) * (fb - fa);
        double denom = 2.0 * std::max(std::abs(q - r), kTiny);
        if (q - r < 0.0) denom = -denom;
        double u = b - ((b - c) * q - (b - a) * r) / denom;
        const double ulim = b + kLimit * (c - b);
        double fu;
        if ((b - u) * (u - c) > 0.0) {
            fu = g(u);
            if (fu < fc) {
                a = b;
                fa = fb;
                b = u;
                fb = fu;
                return;
            }
            if (fu > fb) {
                c = u;
                fc = fu;
                return;
            }
            u = c + kGold * (c - b);
            fu = g(u);
        } else if ((c - u) * (u - ulim) > 0.0) {
            fu = g(u);
            if (fu < fc) {
                b = c;
                c = u;
                u = c + kGold * (c - b);
                fb = fc;
                fc = fu;
                fu = g(u);
            }
        } else if ((u - ulim) * (ulim - c) >= 0.0) {
            u = ulim;
            fu = g(u);
        } else {
            u = c + kGold * (c - b);
            fu = g(u);
        }
        a = b;
        b = c;
        c = u;
        fa = fb;
        fb = fc;
        fc = fu;
    }
}

// Brent's method on a bracketed minimum.
template <typename Fn>
double brent(const Fn& g, double a, double b, double c, double fb, double tol, double& fmin) {
    constexpr int kMaxIter = 100;
    constexpr double kCGold = 0.3819660;
    constexpr double kZeps = 1e-18;
    double lo = std::min(a, c);
    double hi = std::max(a, c);
    double x = b, w = b, v = b;
    double fx = fb, fw = fb, fv = fb;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        const double xm = 0.5 * (lo + hi);
        const double tol1 = tol * std::abs(x) + kZeps;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (hi - lo)) break;
        bool golden = true;
        if (std::abs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_tmp = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_tmp) && p > q * (lo - x) && p < q * (hi - x)) {
                d = p / q;
                const double u = x + d;
                if (u - lo < tol2 || hi - u < tol2) d = (xm >= x) ? tol1 : -tol1;
                golden = false;
            }
        }
        if (golden) {
            e = (x >= xm) ? lo - x : hi - x;
            d = kCGold * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d : x + ((d >= 0.0) ? tol1 : -tol1);
        const double fu = g(u);
        if (fu <= fx) {
            if (u >= x)
                lo = x;
            else
                hi = x;
            v = w;
            w = x;
            x = u;
            fv = fw;
            fw = fx;
            fx = fu;
        } else {
            if (u < x)
                lo = u;
            else
                hi = u;
            if (fu <= fw || w == x) {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    fmin = fx;
    return x;
}

// Minimizes from `point` along `dir`; updates point and fp. Returns the
// achieved decrease.
double line_minimize(const Objective& f, std::vector<double>& point, const std::vector<double>& dir,
                     double& fp, double line_tol, std::size_t& evals) {
    LineFn g{f, point, dir, evals, {}};
    double a = 0.0, b = 1.0, c, fa, fb, fc;
    bracket(g, a, b, c, fa, fb, fc, fp);
    double fmin;
    const double tmin = brent(g, a, b, c, fb, line_tol, fmin);
    if (fmin >= fp) return 0.0; // no improvement along this direction
    for (std::size_t j = 0; j < point.size(); ++j) point[j] += tmin * dir[j];
    const double decrease = fp - fmin;
    fp = fmin;
    return decrease;
}

} // namespace

OptimizeResult powell(const Objective& f, const std::vector<double>& x0,
                      const PowellOptions& opts) {
    const std::size_t n = x0.size();
    if (n == 0) throw InitializationError("powell: empty starting point");

    OptimizeResult result;
    std::vector<double> p = x0;
    double fp = guarded_eval(f, p, result.evaluations);
    if (!std::isfinite(fp))
        throw InitializationError("powell: objective not finite at the starting point");

    std::vector<std::vector<double>> dirs(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) dirs[i][i] = 1.0;
    auto reset_dirs = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            std::fill(dirs[i].begin(), dirs[i].end(), 0.0);
            dirs[i][i] = 1.0;
        }
    };
    bool fresh_basis = true; // direction set is the coordinate basis

    while (result.iterations < opts.max_iter) {
        const double f_start = fp;
        const std::vector<double> p_start = p;
        double largest_decrease = 0.0;
        std::size_t largest_index = 0;

        for (std::size_t i = 0; i < n; ++i) {
            const double dec = line_minimize(f, p, dirs[i], fp, opts.line_tol, result.evaluations);
            if (dec > largest_decrease) {
                largest_decrease = dec;
                largest_index = i;
            }
        }

        ++result.iterations;
        if (opts.record_trace) result.trace.push_back(fp);

        if (2.0 * (f_start - fp) <= opts.f_tol * (std::abs(f_start) + std::abs(fp)) + 1e-25) {
            // replaced directions can collapse toward a dependent set and
            // stall off-minimum; accept convergence only from a fresh basis
            if (fresh_basis) {
                result.converged = true;
                break;
            }
            reset_dirs();
            fresh_basis = true;
            continue;
        }

        // Powell's direction-replacement test on the extrapolated point
        std::vector<double> extrapolated(n), new_dir(n);
        double dir_norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            new_dir[j] = p[j] - p_start[j];
            extrapolated[j] = 2.0 * p[j] - p_start[j];
            dir_norm = std::max(dir_norm, std::abs(new_dir[j]));
        }
        if (dir_norm == 0.0) continue;
        const double f_extra = guarded_eval(f, extrapolated, result.evaluations);
        if (f_extra < f_start) {
            const double t = 2.0 * (f_start - 2.0 * fp + f_extra) *
                                 (f_start - fp - largest_decrease) *
                                 (f_start - fp - largest_decrease) -
                             largest_decrease * (f_start - f_extra) * (f_start - f_extra);
            if (t < 0.0) {
                line_minimize(f, p, new_dir, fp, opts.line_tol, result.evaluations);
                dirs[largest_index] = dirs[n - 1];
                dirs[n - 1] = new_dir;
                fresh_basis = false;
            }
        }
    }

    result.x_best = std::move(p);
    result.f_best = fp;
    return result;
}

} // namespace rmts
