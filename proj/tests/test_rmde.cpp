#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rmts/rmde.hpp"
#include "support.hpp"

using namespace rmts;

namespace {

RmexpConfig<double> scalar_config(double mean, double sd, double horizon, std::size_t steps,
                                  std::size_t paths = 1, std::uint64_t seed = 0) {
    RmexpConfig<double> cfg;
    cfg.dist.mean = RealMatrix(1, 1, mean);
    cfg.dist.std = RealMatrix(1, 1, sd);
    cfg.horizon = horizon;
    cfg.steps = steps;
    cfg.paths = paths;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("deterministic zero law gives the identity product") {
    RmexpConfig<double> cfg;
    cfg.dist.mean = RealMatrix(3, 3, 0.0);
    cfg.dist.std = RealMatrix(3, 3, 0.0);
    cfg.horizon = 2.0;
    cfg.steps = 500;
    RngStream rng(1);
    CHECK(rmexp_sample(cfg, rng) == RealMatrix::identity(3));
}

TEST_CASE("deterministic scalar law converges to the exponential") {
    for (const double m : {1.0, -0.7}) {
        const auto cfg = scalar_config(m, 0.0, 1.0, 1000000);
        RngStream rng(2);
        const double value = rmexp_sample(cfg, rng)(0, 0);
        CHECK(std::abs(value - std::exp(m)) / std::exp(m) < 1e-4);
    }
}

TEST_CASE("scalar standard-normal products stay positive at moderate depth") {
    const auto cfg = scalar_config(0.0, 1.0, 1.0, 1000);
    int positive = 0;
    for (int p = 0; p < 1000; ++p) {
        RngStream rng(3, static_cast<std::uint64_t>(p));
        positive += rmexp_sample(cfg, rng)(0, 0) > 0.0;
    }
    CHECK(positive >= 995);
}

TEST_CASE("scalar density: closed-form point values and domain handling") {
    for (const double t : {0.5, 1.0, 2.0}) {
        const double median = std::exp(-0.5 * t * t);
        CHECK(rmexp_scalar_density(median, t) ==
              doctest::Approx(std::exp(0.5 * t * t) / (std::sqrt(2.0 * M_PI) * t)).epsilon(1e-12));
    }
    CHECK(rmexp_scalar_density(0.0, 1.0) == 0.0);
    CHECK(rmexp_scalar_density(-2.0, 1.0) == 0.0);
    CHECK_THROWS_AS(rmexp_scalar_density(1.0, 0.0), DomainError);
}

TEST_CASE("scalar density integrates to one and to half at the median") {
    const double t = 1.0;
    const auto density = [&](double y) { return rmexp_scalar_density(y, t); };
    const double median = std::exp(-0.5 * t * t);
    const double below = testsupport::adaptive_simpson(density, 1e-9, median, 1e-10);
    CHECK(std::abs(below - 0.5) < 1e-6);
    const double total =
        below + testsupport::adaptive_simpson(density, median, std::exp(7.0), 1e-10);
    CHECK(std::abs(total - 1.0) < 1e-6);
}

TEST_CASE("log statistics match the lognormal parameters") {
    auto cfg = scalar_config(0.0, 1.0, 1.0, 2000, 100000, 7);
    const auto stats = rmexp_moment_check(cfg);
    CHECK(stats.paths_used + stats.nonpositive == 100000);
    CHECK(std::abs(stats.mean_log + 0.5) < 0.02);
    CHECK(std::abs(stats.std_log - 1.0) < 0.02);
}

TEST_CASE("log statistics collapse in the short-horizon limit") {
    const auto stats = rmexp_moment_check(scalar_config(0.0, 1.0, 1e-4, 100, 2000, 8));
    CHECK(std::abs(stats.mean_log) < 1e-3);
    CHECK(stats.std_log < 1e-2);
}

TEST_CASE("deterministic zero law has exactly zero logs") {
    const auto stats = rmexp_moment_check(scalar_config(0.0, 0.0, 1.0, 100, 50, 9));
    CHECK(stats.mean_log == 0.0);
    CHECK(stats.std_log == 0.0);
    CHECK(stats.nonpositive == 0);
}

TEST_CASE("moment check validates the law") {
    CHECK_THROWS_AS(rmexp_moment_check(scalar_config(0.5, 1.0, 1.0, 10, 10)), DomainError);
    RmexpConfig<double> wide;
    wide.dist.mean = RealMatrix(2, 2, 0.0);
    wide.dist.std = RealMatrix(2, 2, 1.0);
    wide.horizon = 1.0;
    wide.steps = 10;
    wide.paths = 10;
    CHECK_THROWS_AS(rmexp_moment_check(wide), DomainError);
}

TEST_CASE("moment check is deterministic under a fixed seed") {
    const auto cfg = scalar_config(0.0, 1.0, 1.0, 200, 5000, 11);
    const auto a = rmexp_moment_check(cfg);
    const auto b = rmexp_moment_check(cfg);
    CHECK(a.mean_log == b.mean_log);
    CHECK(a.std_log == b.std_log);
    CHECK(a.nonpositive == b.nonpositive);
}

TEST_CASE("inhomogeneous solution with zero noise equals the homogeneous product") {
    RmexpConfig<double> cfg;
    cfg.dist.mean = RealMatrix(2, 2, 0.1);
    cfg.dist.std = RealMatrix(2, 2, 0.3);
    cfg.horizon = 1.5;
    cfg.steps = 200;
    NoiseDistribution<double> zero_noise;
    zero_noise.mean = RealVector(2, 0.0);
    zero_noise.std = RealVector(2, 0.0);
    const RealVector x0{1.0, -2.0};

    RngStream r1(12), r2(12);
    const RealVector via_inhomogeneous = inhomogeneous_solution_mc(cfg, zero_noise, x0, r1);
    const RealVector via_product = rmexp_sample(cfg, r2) * x0;
    CHECK(max_norm(via_inhomogeneous - via_product) == 0.0);
}

TEST_CASE("inhomogeneous solution matches the discretized iteration on shared draws") {
    RmexpConfig<double> cfg;
    cfg.dist.mean = RealMatrix(2, 2, -0.2);
    cfg.dist.std = RealMatrix(2, 2, 0.25);
    for (std::size_t i = 0; i < 2; ++i) cfg.dist.mean(i, i) = 0.3;
    cfg.horizon = 1.0;
    cfg.steps = 100;
    NoiseDistribution<double> noise;
    noise.mean = RealVector(2, 0.5);
    noise.std = RealVector(2, 0.2);
    const RealVector x0{0.5, 1.5};

    RngStream r1(13);
    const RealVector closed = inhomogeneous_solution_mc(cfg, noise, x0, r1);

    // oracle: iterate x <- F x + dt * b with the same documented draw order
    RngStream r2(13);
    const double dt = cfg.horizon / static_cast<double>(cfg.steps);
    const double fluct = cfg.horizon / std::sqrt(static_cast<double>(cfg.steps));
    RealVector x = x0;
    for (std::size_t t = 0; t < cfg.steps; ++t) {
        const RealMatrix a = sample_matrix(cfg.dist, r2);
        RealMatrix f(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                f(i, j) = dt * cfg.dist.mean(i, j) + fluct * (a(i, j) - cfg.dist.mean(i, j));
                if (i == j) f(i, j) += 1.0;
            }
        const RealVector b = sample_noise(noise, r2);
        RealVector next = f * x;
        for (std::size_t i = 0; i < 2; ++i) next[i] += dt * b[i];
        x = next;
    }
    CHECK(max_norm(closed - x) < 1e-8);
}

TEST_CASE("zero coefficient law integrates the noise mean") {
    RmexpConfig<double> cfg;
    cfg.dist.mean = RealMatrix(2, 2, 0.0);
    cfg.dist.std = RealMatrix(2, 2, 0.0);
    cfg.horizon = 3.0;
    cfg.steps = 3000;
    NoiseDistribution<double> noise;
    noise.mean = RealVector{1.0, -0.5};
    noise.std = RealVector(2, 0.0);
    const RealVector x0{0.25, 0.75};
    RngStream rng(14);
    const RealVector x = inhomogeneous_solution_mc(cfg, noise, x0, rng);
    CHECK(std::abs(x[0] - (0.25 + 3.0 * 1.0)) < 1e-10);
    CHECK(std::abs(x[1] - (0.75 + 3.0 * -0.5)) < 1e-10);
}

TEST_CASE("empirical law approaches the lognormal limit as the grid refines") {
    const std::vector<std::size_t> grids = {10, 100, 1000};
    std::vector<std::vector<double>> distances(grids.size());
    for (int seed = 0; seed < 5; ++seed) {
        for (std::size_t g = 0; g < grids.size(); ++g) {
            const auto stats = rmexp_moment_check(
                scalar_config(0.0, 1.0, 1.0, grids[g], 10000, 20 + seed));
            distances[g].push_back(ks_distance_normal(stats.logs, -0.5, 1.0));
        }
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    const double d10 = median(distances[0]);
    const double d100 = median(distances[1]);
    const double d1000 = median(distances[2]);
    CHECK(d10 > d100);
    CHECK(d100 > d1000);
}

TEST_CASE("ks distance helper behaves") {
    // exact normal quantiles give a tiny distance
    std::vector<double> quantiles;
    const int n = 1000;
    for (int i = 1; i <= n; ++i) {
        // crude quantile via bisection on the cdf
        double lo = -10.0, hi = 10.0;
        const double target = (i - 0.5) / n;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (normal_cdf(mid, 0.0, 1.0) < target ? lo : hi) = mid;
        }
        quantiles.push_back(0.5 * (lo + hi));
    }
    CHECK(ks_distance_normal(quantiles, 0.0, 1.0) < 0.002);

    // a shifted sample is far from the reference law
    std::vector<double> shifted = quantiles;
    for (auto& v : shifted) v += 1.0;
    CHECK(ks_distance_normal(shifted, 0.0, 1.0) > 0.3);
}

TEST_CASE("rmexp config validation") {
    auto cfg = scalar_config(0.0, 1.0, 0.0, 10);
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = scalar_config(0.0, 1.0, 1.0, 0);
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}
