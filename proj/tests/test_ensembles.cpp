#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rmts/ensembles.hpp"
#include "rmts/moments.hpp"
#include "support.hpp"

using namespace rmts;

TEST_CASE("zero stds return the means exactly") {
    MatrixDistribution<double> dist;
    dist.mean = RealMatrix{{1.0, -2.0}, {0.25, 4.0}};
    dist.std = RealMatrix(2, 2, 0.0);
    RngStream rng(1);
    CHECK(sample_matrix(dist, rng) == dist.mean);
    // no randomness consumed by deterministic entries
    RngStream fresh(1);
    CHECK(rng.next_u64() == fresh.next_u64());

    NoiseDistribution<double> noise;
    noise.mean = RealVector{3.0, -1.0};
    noise.std = RealVector(2, 0.0);
    CHECK(sample_noise(noise, rng) == noise.mean);
}

TEST_CASE("symmetric constraint produces exactly symmetric draws") {
    MatrixDistribution<double> dist = preset_goe(4);
    RngStream rng(2);
    for (int rep = 0; rep < 20; ++rep) {
        const RealMatrix a = sample_matrix(dist, rng);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK(a(i, j) == a(j, i));
    }
}

TEST_CASE("entry sampling hits the requested moments") {
    // one entry with r = 0 and effective std f*sigma = 0.1
    MatrixDistribution<double> dist;
    dist.mean = RealMatrix(1, 1, 0.0);
    dist.std = RealMatrix(1, 1, 1.0);
    dist.scale = 0.1;
    RngStream rng(3);
    std::vector<double> draws(100000);
    for (auto& d : draws) d = sample_matrix(dist, rng)(0, 0);
    const auto [mean, sd] = testsupport::mean_std(draws);
    CHECK(std::abs(mean) < 0.002);
    CHECK(std::abs(sd - 0.1) < 0.002);
}

TEST_CASE("noise sampling hits the requested moments componentwise") {
    NoiseDistribution<double> noise;
    noise.mean = RealVector(2, 1.0);
    noise.std = RealVector(2, 1.0);
    RngStream rng(4);
    std::vector<double> first(100000), second(100000);
    for (std::size_t i = 0; i < first.size(); ++i) {
        const RealVector v = sample_noise(noise, rng);
        first[i] = v[0];
        second[i] = v[1];
    }
    CHECK(std::abs(testsupport::mean_std(first).first - 1.0) < 0.016);
    CHECK(std::abs(testsupport::mean_std(second).first - 1.0) < 0.016);
}

TEST_CASE("dimension-zero noise yields an empty vector") {
    NoiseDistribution<double> noise;
    RngStream rng(5);
    CHECK(sample_noise(noise, rng).dim() == 0);
}

TEST_CASE("GOE preset") {
    const auto goe = preset_goe(2);
    CHECK(goe.constraint == Constraint::symmetric);
    CHECK(goe.std(0, 0) == std::sqrt(2.0));
    CHECK(goe.std(1, 1) == std::sqrt(2.0));
    CHECK(goe.std(0, 1) == 1.0);
    CHECK(goe.std(1, 0) == 1.0);
    CHECK(max_norm(goe.mean) == 0.0);
    CHECK(preset_goe(1).std(0, 0) == std::sqrt(2.0));

    // scale multiplies effective stds
    auto scaled = preset_goe(2);
    scaled.scale = 0.1;
    const RealMatrix var = effective_variance(scaled);
    CHECK(var(0, 0) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(var(0, 1) == doctest::Approx(0.01).epsilon(1e-12));

    CHECK_THROWS_AS(preset_goe(0), DomainError);
}

TEST_CASE("GUE preset and Hermitian draws") {
    const auto gue = preset_gue(3);
    CHECK(gue.constraint == Constraint::hermitian);
    CHECK(gue.std(0, 1).real() == std::sqrt(0.5));
    CHECK(gue.std(0, 1).imag() == std::sqrt(0.5));
    CHECK(gue.std(0, 0) == Complex{1.0, 0.0});

    RngStream rng(6);
    for (int rep = 0; rep < 20; ++rep) {
        const ComplexMatrix a = sample_matrix(gue, rng);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(a(i, i).imag() == 0.0);
            for (std::size_t j = 0; j < 3; ++j) CHECK(a(i, j) == std::conj(a(j, i)));
        }
    }
}

TEST_CASE("GUE off-diagonal entry has unit total variance") {
    const auto gue = preset_gue(2);
    RngStream rng(7);
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const ComplexMatrix a = sample_matrix(gue, rng);
        acc += std::norm(a(0, 1));
    }
    CHECK(std::abs(acc / n - 1.0) < 0.01);
}

TEST_CASE("same distribution and seed reproduce samples bit for bit") {
    const auto gue = preset_gue(3);
    RngStream r1(11), r2(11);
    for (int rep = 0; rep < 5; ++rep) CHECK(sample_matrix(gue, r1) == sample_matrix(gue, r2));
}

TEST_CASE("unconstrained entries are mutually independent") {
    MatrixDistribution<double> dist;
    dist.mean = RealMatrix(2, 2, 0.0);
    dist.std = RealMatrix(2, 2, 1.0);
    RngStream rng(8);
    const int n = 100000;
    std::vector<std::vector<double>> entries(4, std::vector<double>(n));
    for (int t = 0; t < n; ++t) {
        const RealMatrix a = sample_matrix(dist, rng);
        for (std::size_t e = 0; e < 4; ++e) entries[e][t] = a.data()[e];
    }
    for (std::size_t e1 = 0; e1 < 4; ++e1)
        for (std::size_t e2 = e1 + 1; e2 < 4; ++e2)
            CHECK(std::abs(testsupport::correlation(entries[e1], entries[e2])) < 0.01);
}

TEST_CASE("distribution validation") {
    MatrixDistribution<double> dist;
    dist.mean = RealMatrix(2, 2, 0.0);
    dist.std = RealMatrix(2, 2, -0.5);
    CHECK_THROWS_AS(dist.validate(), DomainError);

    dist.std = RealMatrix(2, 2, 1.0);
    dist.std(0, 1) = 2.0; // asymmetric std under a symmetric constraint
    dist.constraint = Constraint::symmetric;
    CHECK_THROWS_AS(dist.validate(), DomainError);

    MatrixDistribution<Complex> herm = preset_gue(2);
    herm.std(0, 0) = Complex(1.0, 0.5); // imaginary std on the diagonal
    CHECK_THROWS_AS(herm.validate(), DomainError);

    MatrixDistribution<double> ragged;
    ragged.mean = RealMatrix(2, 2, 0.0);
    ragged.std = RealMatrix(3, 3, 0.0);
    CHECK_THROWS_AS(ragged.validate(), ShapeError);
}

TEST_CASE("complex unconstrained sampling draws real and imaginary parts") {
    MatrixDistribution<Complex> dist;
    dist.mean = ComplexMatrix(1, 1, Complex(1.0, -1.0));
    dist.std = ComplexMatrix(1, 1, Complex(0.5, 0.25));
    RngStream rng(9);
    std::vector<double> re(50000), im(50000);
    for (std::size_t i = 0; i < re.size(); ++i) {
        const Complex z = sample_matrix(dist, rng)(0, 0);
        re[i] = z.real();
        im[i] = z.imag();
    }
    const auto [mre, sre] = testsupport::mean_std(re);
    const auto [mim, sim] = testsupport::mean_std(im);
    CHECK(mre == doctest::Approx(1.0).epsilon(0.02));
    CHECK(mim == doctest::Approx(-1.0).epsilon(0.02));
    CHECK(sre == doctest::Approx(0.5).epsilon(0.05));
    CHECK(sim == doctest::Approx(0.25).epsilon(0.05));
}
