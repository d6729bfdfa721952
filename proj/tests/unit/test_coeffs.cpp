#include <doctest.h>

#include <cmath>

#include "jumpgauss/coeffs.hpp"
#include "jumpgauss/rng.hpp"

using namespace jumpgauss;
using coeffs::JumpCoefficient;
using measures::LevyMeasureModel;

namespace {
const LevyMeasureModel& half() {
    static const auto m = LevyMeasureModel::power_law(0.5);
    return m;
}
} // namespace

TEST_CASE("small-jump drift closed forms") {
    const auto tanh_coef = JumpCoefficient::preset("sigma-tanh");
    // sigma(0) = 2, b = 1/2: 2 * eps^{1/2} / (1/2)
    CHECK(coeffs::drift_b_eps(tanh_coef, half(), 0.0, 0.0, 0.01) ==
          doctest::Approx(0.4).epsilon(1e-13));
    const auto identity = JumpCoefficient::preset("identity");
    CHECK(coeffs::drift_b_eps(identity, half(), 0.0, 0.0, 1.0) ==
          doctest::Approx(2.0).epsilon(1e-13));
    const auto zero = JumpCoefficient::preset("zero");
    CHECK(coeffs::drift_b_eps(zero, half(), 0.0, 0.0, 0.3) == 0.0);
}

TEST_CASE("small-jump variance closed forms") {
    const auto tanh_coef = JumpCoefficient::preset("sigma-tanh");
    CHECK(coeffs::diffusion_a_eps(tanh_coef, half(), 0.0, 0.0, 0.01) ==
          doctest::Approx(4.0 * std::pow(0.01, 1.5) / 1.5).epsilon(1e-13));
    const auto identity = JumpCoefficient::preset("identity");
    CHECK(coeffs::diffusion_a_eps(identity, half(), 0.0, 0.0, 1.0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    const auto zero = JumpCoefficient::preset("zero");
    CHECK(coeffs::diffusion_a_eps(zero, half(), 0.0, 0.0, 0.3) == 0.0);
}

TEST_CASE("closed form and quadrature agree on random points") {
    // The same coefficient presented without the factorized flag exercises
    // the quadrature route.
    auto sigma = [](double x) { return 2.0 + std::tanh(x); };
    const JumpCoefficient general(
        [sigma](double, double z, double x) { return sigma(x) * z; },
        [](double, double z, double x) { const double t = std::tanh(x); return (1.0 - t * t) * z; },
        [sigma](double, double, double x) { return sigma(x); },
        measures::Envelope::linear(3.0));
    const auto factorized = JumpCoefficient::preset("sigma-tanh");
    sampling::RngStream s(321, {0, 0, sampling::Purpose::generic, 0});
    for (int i = 0; i < 20; ++i) {
        const double x = -3.0 + 6.0 * s.next_uniform();
        const double eps = 0.01 + 0.99 * s.next_uniform();
        const double b1 = coeffs::drift_b_eps(factorized, half(), 0.0, x, eps);
        const double b2 = coeffs::drift_b_eps(general, half(), 0.0, x, eps);
        CHECK(std::fabs(b1 - b2) <= 1e-8 * std::fabs(b1));
        const double a1 = coeffs::diffusion_a_eps(factorized, half(), 0.0, x, eps);
        const double a2 = coeffs::diffusion_a_eps(general, half(), 0.0, x, eps);
        CHECK(std::fabs(a1 - a2) <= 1e-8 * std::fabs(a1));
    }
}

TEST_CASE("drift and variance grow with eps and variance stays nonnegative") {
    const auto coef = JumpCoefficient::preset("sigma-tanh");
    double prev_b = 0.0, prev_a = 0.0;
    for (int i = 1; i <= 20; ++i) {
        const double eps = i / 20.0;
        const double b = coeffs::drift_b_eps(coef, half(), 0.0, 1.3, eps);
        const double a = coeffs::diffusion_a_eps(coef, half(), 0.0, 1.3, eps);
        CHECK(b >= prev_b);
        CHECK(a >= prev_a);
        CHECK(a >= 0.0);
        prev_b = b;
        prev_a = a;
    }
}

TEST_CASE("unknown preset is rejected") {
    CHECK_THROWS_AS(JumpCoefficient::preset("heston"), lookup_error);
}

TEST_CASE("derivatives in the bank pass finite-difference checks") {
    const double h = 1e-5;
    for (const auto& tf : coeffs::test_bank()) {
        for (int i = 0; i <= 40; ++i) {
            const double x = -4.0 + 8.0 * i / 40.0;
            const double fd1 = (tf.phi(x + h) - tf.phi(x - h)) / (2.0 * h);
            CHECK(std::fabs(tf.d1(x) - fd1) <= 1e-6 * (1.0 + std::fabs(tf.d2(x))));
            const double fd2 = (tf.d1(x + h) - tf.d1(x - h)) / (2.0 * h);
            CHECK(std::fabs(tf.d2(x) - fd2) <= 1e-6 * (1.0 + std::fabs(tf.d3(x))));
            const double fd3 = (tf.d2(x + h) - tf.d2(x - h)) / (2.0 * h);
            CHECK(std::fabs(tf.d3(x) - fd3) <= 1e-4);
        }
    }
}

TEST_CASE("declared norms dominate sampled derivative sums") {
    for (const auto& tf : coeffs::test_bank()) {
        double sup1 = 0.0, sup3 = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double x = -20.0 + 40.0 * i / 4000.0;
            const double s1 = std::fabs(tf.phi(x)) + std::fabs(tf.d1(x));
            const double s3 = s1 + std::fabs(tf.d2(x)) + std::fabs(tf.d3(x));
            sup1 = std::max(sup1, s1);
            sup3 = std::max(sup3, s3);
        }
        CHECK(tf.norm_1inf >= sup1);
        CHECK(tf.norm_3inf >= sup3);
    }
}

TEST_CASE("hypothesis spot checks") {
    std::vector<std::array<double, 3>> grid;
    for (double s : {0.0, 0.5, 1.0})
        for (double z : {1.0, 2.0, 5.0, 20.0})
            for (double x : {-3.0, 0.0, 3.0}) grid.push_back({s, z, x});

    SUBCASE("factorized sigma-tanh satisfies its envelope") {
        const auto coef = JumpCoefficient::preset("sigma-tanh");
        const auto report = coeffs::hypothesis_spot_check(coef, grid);
        CHECK(report.all_pass());
    }
    SUBCASE("zero coefficient fails a positive ellipticity floor") {
        const auto coef = JumpCoefficient::preset("zero");
        const auto report = coeffs::hypothesis_spot_check(
            coef, grid, [](double) { return 0.1; });
        CHECK_FALSE(report.all_pass());
    }
    SUBCASE("identity passes the stretched-exponential floor") {
        const auto coef = JumpCoefficient::preset("identity");
        const auto report = coeffs::hypothesis_spot_check(
            coef, grid, [](double z) { return std::exp(-std::pow(z, 0.25)) / (z * z * z * z); });
        CHECK(report.all_pass());
    }
    SUBCASE("identity at z = 1 dominates exp(-1)") {
        const auto coef = JumpCoefficient::preset("identity");
        const std::vector<std::array<double, 3>> point{{0.0, 1.0, 0.0}};
        const auto report = coeffs::hypothesis_spot_check(
            coef, point, [](double z) { return std::exp(-std::pow(z, 0.25)); });
        CHECK(report.all_pass());
    }
    SUBCASE("empty grid is rejected") {
        const auto coef = JumpCoefficient::preset("identity");
        CHECK_THROWS_AS(coeffs::hypothesis_spot_check(coef, {}), std::domain_error);
    }
}
