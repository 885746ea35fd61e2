#include "rmts/rmde.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "rmts/threads.hpp"

namespace rmts {

double rmexp_scalar_density(double y, double t) {
    if (!(t > 0.0)) throw DomainError("rmexp_scalar_density: horizon must be positive");
    if (y <= 0.0) return 0.0;
    const double log_y = std::log(y);
    const double z = log_y + 0.5 * t * t;
    return std::exp(-z * z / (2.0 * t * t)) / (y * std::sqrt(2.0 * M_PI) * t);
}

RmexpLogStats rmexp_moment_check(const RmexpConfig<double>& cfg) {
    cfg.validate();
    if (cfg.dist.dim() != 1)
        throw DomainError("rmexp_moment_check: entry law must be 1x1");
    if (cfg.dist.mean(0, 0) != 0.0)
        throw DomainError("rmexp_moment_check: entry law must have zero mean");

    const double sd = cfg.dist.scale * cfg.dist.std(0, 0);
    const double fluct_w = sd * cfg.horizon / std::sqrt(static_cast<double>(cfg.steps));
    std::vector<double> log_y(cfg.paths);
    std::vector<char> positive(cfg.paths);

    auto run_chunk = [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            RngStream rng(cfg.seed, p);
            double y = 1.0;
            if (fluct_w != 0.0)
                for (std::size_t t = 0; t < cfg.steps; ++t) y *= 1.0 + fluct_w * rng.normal();
            positive[p] = y > 0.0 ? 1 : 0;
            log_y[p] = y > 0.0 ? std::log(y) : 0.0;
        }
    };

    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(cfg.paths));
    if (workers <= 1) {
        run_chunk(0, cfg.paths);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (cfg.paths + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = static_cast<std::size_t>(w) * chunk;
            const std::size_t end = std::min(cfg.paths, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_chunk, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    RmexpLogStats stats;
    stats.logs.reserve(cfg.paths);
    double sum = 0.0;
    for (std::size_t p = 0; p < cfg.paths; ++p) {
        if (!positive[p]) {
            ++stats.nonpositive;
            continue;
        }
        stats.logs.push_back(log_y[p]);
        sum += log_y[p];
    }
    stats.paths_used = stats.logs.size();
    if (stats.paths_used == 0)
        throw InsufficientDataError("rmexp_moment_check: no positive paths");
    stats.mean_log = sum / static_cast<double>(stats.paths_used);
    double ss = 0.0;
    for (double v : stats.logs) {
        const double d = v - stats.mean_log;
        ss += d * d;
    }
    stats.std_log = stats.paths_used > 1
                        ? std::sqrt(ss / static_cast<double>(stats.paths_used - 1))
                        : 0.0;
    return stats;
}

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

double ks_distance_normal(std::vector<double> samples, double mean, double sd) {
    if (samples.empty()) throw InsufficientDataError("ks_distance_normal: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = normal_cdf(samples[i], mean, sd);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(cdf - lo, hi - cdf));
    }
    return d;
}

} // namespace rmts
