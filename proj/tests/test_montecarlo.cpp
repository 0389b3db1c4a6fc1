#include <gtest/gtest.h>

#include <cmath>

#include "numeraire/analytic.hpp"
#include "numeraire/errors.hpp"
#include "numeraire/montecarlo.hpp"
#include "numeraire/philox.hpp"
#include "oracles/oracles.hpp"

using namespace numeraire;

TEST(Philox, KnownAnswers) {
    using C = Philox4x32::Counter;
    EXPECT_EQ(Philox4x32::generate({0, 0, 0, 0}, {0, 0}),
              (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::generate({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                   {0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NormalStream, Moments) {
    const std::size_t n = 200'000;
    double sum = 0, sum2 = 0, sum4 = 0;
    for (std::size_t p = 0; p < n; ++p) {
        const double z = NormalStream(1, p)(0);
        sum += z;
        sum2 += z * z;
        sum4 += z * z * z * z;
    }
    EXPECT_LT(std::abs(sum / n), 4.0 / std::sqrt(double(n)));
    EXPECT_LT(std::abs(sum2 / n - 1.0), 4.0 * std::sqrt(2.0 / n));
    EXPECT_LT(std::abs(sum4 / n - 3.0), 4.0 * std::sqrt(96.0 / n));
}

TEST(NormalStream, Addressable) {
    const NormalStream a(42, 7), b(42, 7), c(43, 7);
    EXPECT_EQ(a(5), b(5));
    EXPECT_NE(a(5), c(5));
    EXPECT_EQ(a(4), a.pair(2)[0]);
}

TEST(PriceMc, ZeroVolatilityIsDeterministic) {
    Esop e;
    e.sigma = 0.0;
    auto r = price_mc(e, {.paths = 1000});
    EXPECT_NEAR(r.estimate, e.spot * (1.0 - e.beta * std::exp(-e.rate * (e.maturity - e.t_reset))), 1e-12);
    EXPECT_EQ(r.std_error, 0.0);

    FxStrike f;
    f.sigma_s = f.sigma_x = 0.0;
    r = price_mc(f, {.paths = 1000});
    EXPECT_NEAR(r.estimate, f.spot * f.fx - f.strike_usd() * std::exp(-f.r_d * f.maturity), 1e-12);
    EXPECT_EQ(r.std_error, 0.0);
}

TEST(PriceMc, EsopMatchesClosedForm) {
    const Esop e;
    const auto r = price_mc(e, {});
    EXPECT_EQ(r.paths_used, 1'000'000u);
    EXPECT_LE(std::abs(r.estimate - esop_price(e, e.spot, 0.0)), 3.0 * r.std_error);
}

TEST(PriceMc, FxPoundMeasure) {
    const FxStrike f;
    const auto r = price_mc_fx_gbp(f, {.paths = 400'000});
    EXPECT_LE(std::abs(r.estimate - fx_option_gbp(f, f.spot, 1.0 / f.fx, 0.0)), 3.0 * r.std_error);
}

TEST(PriceMc, IndependentOfThreadCount) {
    const Savings s;
    const auto one = price_mc(s, {.paths = 50'000, .threads = 1});
    const auto four = price_mc(s, {.paths = 50'000, .threads = 4});
    EXPECT_EQ(one.estimate, four.estimate);
    EXPECT_EQ(one.std_error, four.std_error);
}

TEST(PriceMc, BadSpecs) {
    EXPECT_THROW((void)price_mc(Esop{}, {.paths = 0}), SpecError);
    EXPECT_THROW((void)price_mc(Esop{}, {.steps = 0}), SpecError);
    Esop e;
    e.t_reset = 2.0;
    EXPECT_THROW((void)price_mc(e, {.paths = 10}), ValidationError);
}

TEST(BondMc, MatchesAffinePrice) {
    const VasicekModel m;
    const auto r = bond_mc(m, 2.0, {});
    EXPECT_LE(std::abs(r.estimate - bond_price(m, m.r0, 0.0, 2.0)), 3.0 * r.std_error);
}

TEST(Vasicek, DeterministicPath) {
    VasicekModel m;
    m.sigma_r = 0.0;
    const std::vector<double> times{0.0, 0.5, 1.0, 3.0};
    const auto path = sample_vasicek(m, times, 1);
    for (std::size_t k = 0; k < times.size(); ++k)
        EXPECT_NEAR(path[k], oracle::ou_mean(m.theta, m.mu_r, m.r0, times[k]), 1e-15);
}

TEST(Vasicek, SmallStepVariance) {
    VasicekModel m;
    m.theta = 1e-9;
    EXPECT_NEAR(vasicek_transition_variance(m, 1.0), m.sigma_r * m.sigma_r, 1e-10);
}

TEST(Vasicek, TerminalMoments) {
    const VasicekModel m;
    const std::vector<double> times{0.25, 0.5, 1.0, 2.0};
    const std::size_t n = 1'000'000;
    double sum = 0, sum2 = 0;
    for (std::size_t p = 0; p < n; ++p) {
        const double r = sample_vasicek(m, times, 99, p).back();
        sum += r;
        sum2 += r * r;
    }
    const double mean = sum / n, var = sum2 / n - mean * mean;
    const double ref_mean = oracle::ou_mean(m.theta, m.mu_r, m.r0, 2.0);
    const double ref_var = oracle::ou_variance(m.theta, m.sigma_r, 2.0);
    EXPECT_LT(std::abs(mean - ref_mean), 4.0 * std::sqrt(ref_var / n));
    EXPECT_LT(std::abs(var - ref_var), 4.0 * ref_var * std::sqrt(2.0 / n));
}
