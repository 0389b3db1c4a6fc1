#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "numeraire/errors.hpp"
#include "numeraire/ratecurve.hpp"
#include "oracles/oracles.hpp"

using namespace numeraire;

namespace {

// p_t + 1/2 sigma_r^2 p_rr + (theta (mu_r - r) - lambda sigma_r) p_r - r p, relative to p.
double bond_residual(const VasicekModel& m, double r, double t, double T) {
    const double hr = 1e-4, ht = 1e-5;
    auto p = [&](double rr, double tt) { return bond_price(m, rr, tt, T); };
    const double p0 = p(r, t);
    const double pt = (p(r, t + ht) - p(r, t - ht)) / (2 * ht);
    const double pr = (p(r + hr, t) - p(r - hr, t)) / (2 * hr);
    const double prr = (p(r + hr, t) - 2 * p0 + p(r - hr, t)) / (hr * hr);
    const double res = pt + 0.5 * m.sigma_r * m.sigma_r * prr +
                       (m.theta * (m.mu_r - r) - m.lambda * m.sigma_r) * pr - r * p0;
    return res / p0;
}

}  // namespace

TEST(BFactor, Limits) {
    VasicekModel m;
    EXPECT_EQ(b_factor(m, 1.0, 1.0), 0.0);
    m.theta = 1e-12;
    EXPECT_NEAR(b_factor(m, 0.0, 3.0), 3.0, 1e-10);
}

TEST(BFactor, ExtendedPrecision) {
    VasicekModel m;
    EXPECT_NEAR(b_factor(m, 0.0, 2.0), static_cast<double>(oracle::vasicek_b(0.5L, 2.0L)), 1e-15);
}

TEST(AFactor, TerminalAndDeterministic) {
    VasicekModel m;
    EXPECT_EQ(a_factor(m, 2.0, 2.0), 1.0);
    m.sigma_r = 0.0;
    const double b = b_factor(m, 0.0, 2.0);
    EXPECT_NEAR(a_factor(m, 0.0, 2.0), std::exp((b - 2.0) * m.mu_r), 1e-15);
}

TEST(BondPrice, SatisfiesPde) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        VasicekModel m{.theta = 0.1 + u(rng), .mu_r = 0.01 + 0.07 * u(rng), .sigma_r = 0.002 + 0.03 * u(rng),
                       .lambda = -0.2 + 0.4 * u(rng), .r0 = 0.03};
        const double r = -0.01 + 0.1 * u(rng), t = u(rng), T = t + 0.2 + 5 * u(rng);
        EXPECT_LT(std::abs(bond_residual(m, r, t, T)), 1e-6);
    }
}

TEST(BondPrice, FastReversionDiscountsAtLongRunLevel) {
    VasicekModel m{.theta = 1e6, .mu_r = 0.05, .sigma_r = 0.0, .lambda = 0.0, .r0 = 0.03};
    EXPECT_NEAR(bond_price(m, 0.03, 0.0, 2.0), std::exp(-0.05 * 2.0), 1e-7);
}

TEST(ShortRate, RoundTrip) {
    VasicekModel m;
    EXPECT_NEAR(short_rate_from_bond(m, bond_price(m, 0.03, 0.0, 2.0), 0.0, 2.0), 0.03, 1e-15);
    EXPECT_NEAR(short_rate_from_bond(m, a_factor(m, 0.0, 2.0), 0.0, 2.0), 0.0, 1e-15);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double r = -0.02 + 0.12 * u(rng), t = 2 * u(rng), T = t + 0.05 + 10 * u(rng);
        EXPECT_NEAR(short_rate_from_bond(m, bond_price(m, r, t, T), t, T), r, 1e-12);
    }
    EXPECT_THROW((void)short_rate_from_bond(m, 1.0, 2.0, 2.0), DomainError);
}

TEST(SigmaP, Composition) {
    VasicekModel m;
    EXPECT_EQ(sigma_p(m, 2.0, 2.0), 0.0);
    EXPECT_NEAR(sigma_p(m, 0.0, 2.0), 0.01 * b_factor(m, 0.0, 2.0), 1e-17);
    m.sigma_r = 0.0;
    EXPECT_EQ(sigma_p(m, 0.0, 2.0), 0.0);
}

TEST(IntegratedVariance, NoRateVolatility) {
    VasicekModel m;
    m.sigma_r = 0.0;
    EXPECT_NEAR(integrated_variance(m, 0.25, 0.3, 0.2, 1.0, 2.0), 0.0625 * 0.8, 1e-15);
}

TEST(IntegratedVariance, MatchesQuadrature) {
    VasicekModel m;
    EXPECT_NEAR(integrated_variance(m, 0.0, 0.0, 0.0, 1.0, 2.0),
                oracle::integrated_variance(m.theta, m.sigma_r, 0.0, 0.0, 0.0, 1.0, 2.0), 1e-16);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        VasicekModel v{.theta = 0.05 + u(rng), .mu_r = 0.05, .sigma_r = 0.005 + 0.03 * u(rng)};
        const double sa = 0.05 + 0.4 * u(rng), rho = -0.95 + 1.9 * u(rng);
        const double t = u(rng), t0 = t + 0.1 + 2 * u(rng), t1 = t0 + 3 * u(rng);
        const double ref = oracle::integrated_variance(v.theta, v.sigma_r, sa, rho, t, t0, t1);
        EXPECT_NEAR(integrated_variance(v, sa, rho, t, t0, t1), ref, 1e-10 * ref);
    }
}
