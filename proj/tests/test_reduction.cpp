#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "numeraire/analytic.hpp"
#include "numeraire/errors.hpp"
#include "numeraire/reduction.hpp"
#include "oracles/oracles.hpp"

using namespace numeraire;

namespace {

HomogeneousPayoff payoff(std::function<double(std::span<const double>)> f) { return {std::move(f)}; }

ReducedProblem one_dim(double variance, std::function<double(double)> f, double maturity = 1.0) {
    ReducedProblem r;
    r.b_matrix = Matrix{{variance}};
    r.payoff_f = [f](std::span<const double> z) { return f(z[0]); };
    r.maturity = maturity;
    return r;
}

}  // namespace

TEST(Homogeneity, ExchangeIsHomogeneous) {
    auto p = payoff([](std::span<const double> s) { return std::max(s[1] - s[0], 0.0); });
    EXPECT_TRUE(check_homogeneity(p, 2, 200, 1e-12));
}

TEST(Homogeneity, FixedStrikeIsNot) {
    auto p = payoff([](std::span<const double> s) { return std::max(s[1] - 1.0, 0.0); });
    EXPECT_FALSE(check_homogeneity(p, 2, 200, 1e-12));
}

TEST(Homogeneity, EsopPayoff) {
    auto p = payoff([](std::span<const double> s) { return s[1] - 0.85 * std::min(s[1], s[0]); });
    EXPECT_TRUE(check_homogeneity(p, 2, 200, 1e-12));
}

TEST(Homogeneity, NonFiniteThrows) {
    auto p = payoff([](std::span<const double>) { return std::nan(""); });
    EXPECT_THROW((void)check_homogeneity(p, 2, 10, 1e-12), EvaluationError);
}

TEST(Reduce, TwoAssets) {
    const Matrix b = reduced_matrix(CovarianceMatrix(Matrix{{0.04, 0.03}, {0.03, 0.09}}));
    ASSERT_EQ(b.rows(), 1u);
    EXPECT_NEAR(b(0, 0), 0.07, 1e-15);
}

TEST(Reduce, DiagonalThreeAssets) {
    const double s0 = 0.04, s1 = 0.09, s2 = 0.16;
    const Matrix b = reduced_matrix(CovarianceMatrix(Matrix{{s0, 0, 0}, {0, s1, 0}, {0, 0, s2}}));
    EXPECT_NEAR(b(0, 0), s0 + s1, 1e-15);
    EXPECT_NEAR(b(0, 1), s0, 1e-15);
    EXPECT_NEAR(b(1, 0), s0, 1e-15);
    EXPECT_NEAR(b(1, 1), s0 + s2, 1e-15);
}

TEST(Reduce, MatchesEtaConstruction) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal(0.0, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
        oracle::Dense l(3, std::vector<double>(2));
        std::vector<AssetDynamics> assets(3);
        for (std::size_t i = 0; i < 3; ++i) {
            for (auto& v : l[i]) v = normal(rng);
            assets[i].loadings = l[i];
        }
        const Matrix b = reduced_matrix(covariance_from_loadings(assets));
        const auto ref = oracle::reduced_by_eta(oracle::matmul_transpose(l));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(b(i, j), ref[i][j], 1e-14);
    }
}

TEST(Reduce, PayoffFixesFirstAsset) {
    auto problem = make_problem({{100.0, {0.2, 0.0}}, {95.0, {0.1, 0.2}}},
                                payoff([](std::span<const double> s) { return std::max(s[1] - s[0], 0.0); }),
                                1.0);
    const auto r = reduce(problem);
    EXPECT_EQ(r.dimension(), 1u);
    const double z = 1.3;
    EXPECT_NEAR(r.payoff_f(std::span<const double>(&z, 1)), 0.3, 1e-15);
}

TEST(Reduce, RejectsInhomogeneousPayoff) {
    auto problem = make_problem({{100.0, {0.2}}, {95.0, {0.3}}},
                                payoff([](std::span<const double> s) { return std::max(s[1] - 1.0, 0.0); }),
                                1.0);
    EXPECT_THROW((void)reduce(problem), ReductionError);
}

TEST(Psd, Scalars) {
    EXPECT_TRUE(certify_psd(Matrix{{0.07}}));
    EXPECT_TRUE(certify_psd(Matrix{{0.0, 0.0}, {0.0, 0.0}}));
    EXPECT_FALSE(certify_psd(Matrix{{0.04, 0.1}, {0.1, 0.04}}));
}

TEST(Psd, ShapeChecks) {
    EXPECT_THROW((void)certify_psd(Matrix(2, 3)), ShapeError);
    EXPECT_THROW((void)certify_psd(Matrix{{1.0, 0.5}, {0.2, 1.0}}), ShapeError);
}

TEST(Psd, RandomReductions) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dims(2, 6);
    std::normal_distribution<double> normal(0.0, 0.4);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = dims(rng), m = dims(rng);
        std::vector<AssetDynamics> assets(n);
        for (auto& a : assets) {
            a.loadings.resize(m);
            for (auto& v : a.loadings) v = normal(rng);
        }
        ASSERT_TRUE(certify_psd(reduced_matrix(covariance_from_loadings(assets)))) << trial;
    }
}

TEST(Quadrature, AtTheMoneyCall) {
    const auto r = one_dim(0.04, [](double z) { return std::max(z - 1.0, 0.0); });
    const double z = 1.0;
    const double v = quadrature_price(r, std::span<const double>(&z, 1), 0.0);
    EXPECT_NEAR(v, 2.0 * oracle::normal_cdf(0.1) - 1.0, 1e-9);
    EXPECT_NEAR(v, bs_call({.spot = 1.0, .strike = 1.0, .vol = 0.2, .tau = 1.0}), 1e-9);
}

TEST(Quadrature, LinearAndConstantPayoffs) {
    const auto lin = one_dim(0.09, [](double z) { return z; }, 2.0);
    const auto one = one_dim(0.09, [](double) { return 1.0; }, 2.0);
    for (double z : {0.5, 1.0, 1.7}) {
        EXPECT_NEAR(quadrature_price(lin, std::span<const double>(&z, 1), 0.0), z, 1e-9 * z);
        EXPECT_NEAR(quadrature_price(one, std::span<const double>(&z, 1), 0.5), 1.0, 1e-9);
    }
}

TEST(Quadrature, TwoDimensionalBestOf) {
    // max(S1, S2) - S0 relative to S0 with independent assets; compare with a
    // one-dimensional exchange split: max(z1, z2) = z1 + max(z2 - z1, 0).
    auto problem = make_problem(
        {{1.0, {0.2, 0.0, 0.0}}, {1.0, {0.0, 0.3, 0.0}}, {1.0, {0.0, 0.0, 0.25}}},
        payoff([](std::span<const double> s) { return std::max(s[1], s[2]); }), 1.0);
    const auto r = reduce(problem);
    const std::array<double, 2> z{1.1, 0.9};
    const double v = quadrature_price(r, z, 0.0);
    // S1 as numeraire for the exchange part: variance 0.3^2 + 0.25^2.
    const double exch = bs_call({.spot = 0.9, .strike = 1.1, .vol = std::sqrt(0.09 + 0.0625), .tau = 1.0});
    EXPECT_NEAR(v, 1.1 + exch, 1e-7);
}

TEST(Quadrature, Errors) {
    auto three = make_problem({{1, {0.2}}, {1, {0.3}}, {1, {0.1}}, {1, {0.4}}},
                              payoff([](std::span<const double> s) { return s[1]; }), 1.0);
    const auto r3 = reduce(three);
    const std::array<double, 3> z3{1, 1, 1};
    EXPECT_THROW((void)quadrature_price(r3, z3, 0.0), UnsupportedDimensionError);

    const auto flat = one_dim(0.0, [](double z) { return z; });
    const double z = 1.0;
    EXPECT_THROW((void)quadrature_price(flat, std::span<const double>(&z, 1), 0.0), DegeneracyError);
}

TEST(Quadrature, KinkNearPanelEdge) {
    // The strike lands a hair past an integration panel boundary here.
    const auto r = one_dim(0.09, [](double z) { return std::max(z - 100.0, 0.0); });
    const double z = 90.0;
    const double v = quadrature_price(r, std::span<const double>(&z, 1), 0.0);
    const double ref = oracle::lognormal_call(90.0, 100.0, 0.0, 0.0, 0.3, 1.0);
    EXPECT_NEAR(v, ref, 1e-10 * ref);
}
