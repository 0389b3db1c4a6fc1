#include <gtest/gtest.h>

#include <random>

#include "numeraire/errors.hpp"
#include "numeraire/model.hpp"
#include "oracles/oracles.hpp"

using namespace numeraire;

TEST(Covariance, RankOneLoadings) {
    const std::vector<AssetDynamics> assets{{1.0, {0.2}}, {1.0, {0.3}}};
    const auto a = covariance_from_loadings(assets);
    EXPECT_NEAR(a(0, 0), 0.04, 1e-15);
    EXPECT_NEAR(a(0, 1), 0.06, 1e-15);
    EXPECT_NEAR(a(1, 0), 0.06, 1e-15);
    EXPECT_NEAR(a(1, 1), 0.09, 1e-15);
}

TEST(Covariance, OrthogonalDrivers) {
    const std::vector<AssetDynamics> assets{{1.0, {0.2, 0.0}}, {1.0, {0.0, 0.3}}};
    const auto a = covariance_from_loadings(assets);
    EXPECT_EQ(a(0, 1), 0.0);
    EXPECT_NEAR(a(1, 1), 0.09, 1e-15);
}

TEST(Covariance, MatchesNaiveProduct) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal(0.0, 0.3);
    std::vector<AssetDynamics> assets(5);
    oracle::Dense l(5, std::vector<double>(3));
    for (std::size_t i = 0; i < 5; ++i) {
        for (auto& v : l[i]) v = normal(rng);
        assets[i].loadings = l[i];
    }
    const auto a = covariance_from_loadings(assets);
    const auto ref = oracle::matmul_transpose(l);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(a(i, j), ref[i][j], 1e-15);
}

TEST(Covariance, RaggedLoadingsThrow) {
    const std::vector<AssetDynamics> assets{{1.0, {0.2, 0.1}}, {1.0, {0.3}}};
    EXPECT_THROW((void)covariance_from_loadings(assets), DimensionError);
}

TEST(Covariance, RejectsIndefinite) {
    EXPECT_THROW(CovarianceMatrix(Matrix{{0.04, 0.1}, {0.1, 0.04}}), Error);
    EXPECT_THROW(CovarianceMatrix(Matrix{{0.04, 0.01}, {0.02, 0.04}}), Error);
}

TEST(Validate, EsopDefaultsAreValid) { EXPECT_TRUE(validate(Esop{}).empty()); }

TEST(Validate, EsopResetAfterMaturity) {
    Esop e;
    e.t_reset = 1.5;
    const auto v = validate(e);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0], "t_reset must precede maturity");
}

TEST(Validate, CorrelationBoundary) {
    FxStrike f;
    f.rho = 1.0;
    const auto v = validate(f);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("rho"), std::string::npos);
}

TEST(Validate, ZeroVolatilityOnlyInRelaxedForm) {
    Savings s;
    s.sigma_x = 0.0;
    s.sigma_i = 0.0;
    EXPECT_FALSE(validate(s).empty());
    EXPECT_TRUE(validate_allowing_zero_vol(s).empty());
}

TEST(Validate, RequireValidListsEverything) {
    Esop e;
    e.t_reset = 1.5;
    e.sigma = -1.0;
    try {
        require_valid(e);
        FAIL();
    } catch (const ValidationError& err) {
        const std::string msg = err.what();
        EXPECT_NE(msg.find("t_reset"), std::string::npos);
        EXPECT_NE(msg.find("sigma"), std::string::npos);
    }
}

TEST(Quote, MethodNamesRoundTrip) {
    for (Method m : {Method::analytic, Method::pde_full, Method::pde_reduced, Method::quadrature,
                     Method::monte_carlo}) {
        EXPECT_EQ(parse_method(method_name(m)), m);
    }
    EXPECT_FALSE(parse_method("simpson"));
}

TEST(Quote, ProductTypes) {
    EXPECT_EQ(product_type(Esop{}), "esop");
    EXPECT_EQ(product_type(Corporate{}), "corporate");
    EXPECT_EQ(product_maturity(Convertible{}), 1.0);
}
