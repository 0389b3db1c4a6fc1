#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "numeraire/analytic.hpp"
#include "numeraire/errors.hpp"
#include "numeraire/pde.hpp"
#include "numeraire/product_pde.hpp"
#include "numeraire/ratecurve.hpp"

using namespace numeraire;

namespace {

Pde1Spec call_1d(double vol, double rate, double strike, double maturity) {
    Pde1Spec s;
    s.diffusion = [vol](double) { return vol * vol; };
    s.drift = [rate](double) { return rate; };
    s.discount = [rate](double) { return rate; };
    s.terminal = [strike](double z) { return std::max(z - strike, 0.0); };
    s.maturity = maturity;
    s.center = strike;
    return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Solve1d, ConstantTerminal) {
    Pde1Spec s;
    s.diffusion = [](double) { return 0.09; };
    s.terminal = [](double) { return 2.5; };
    const auto u = solve_1d(s, {});
    for (double z : {0.7, 1.0, 1.4}) EXPECT_NEAR(u(z, 0.0), 2.5, 1e-13);
}

TEST(Solve1d, LinearTerminalIsExact) {
    Pde1Spec s;
    s.diffusion = [](double t) { return 0.04 + 0.05 * t; };
    s.drift = [](double) { return 0.03; };
    s.discount = [](double) { return 0.03; };
    s.terminal = [](double z) { return z; };
    const auto u = solve_1d(s, {});
    for (double z : {0.8, 1.0, 1.2}) EXPECT_NEAR(u(z, 0.0), z, 1e-12);
}

TEST(Solve1d, CallMatchesBlackScholes) {
    const double k = 130.0;
    const auto u = solve_1d(call_1d(0.22, 0.05, k, 1.0), {});
    for (double m : {0.8, 0.9, 1.0, 1.1, 1.25}) {
        const double z = m * k;
        const double ref = bs_call({.spot = z, .strike = k, .rate = 0.05, .carry = 0.05, .vol = 0.22, .tau = 1.0});
        EXPECT_LT(rel(u(z, 0.0), ref), 1e-4) << m;
    }
}

TEST(Solve1d, TimeDependentDiffusion) {
    Convertible c;
    const auto p = convertible_pde(c);
    const auto u = solve_1d(p.reduced, {});
    const double z = p.reduced_spot();
    const double var = integrated_variance(c.vasicek, c.sigma_s, c.rho, 0.0, c.conv_date, c.bond_maturity);
    const double ref = 1.0 + bs_call({.spot = z, .strike = 1.0, .vol = std::sqrt(var / c.conv_date), .tau = c.conv_date});
    EXPECT_LT(rel(u(z, 0.0), ref), 1e-4);
}

TEST(Solve1d, GridConvergence) {
    const double k = 100.0;
    const double ref = bs_call({.spot = k, .strike = k, .rate = 0.05, .carry = 0.05, .vol = 0.2, .tau = 1.0});
    double previous = 1.0;
    for (std::size_t n : {50u, 100u, 200u, 400u}) {
        const auto u = solve_1d(call_1d(0.2, 0.05, k, 1.0), {.nodes_per_axis = n, .time_steps = n / 2});
        const double err = rel(u(k, 0.0), ref);
        EXPECT_LT(err, previous);
        previous = err;
    }
    EXPECT_LT(previous, 1e-4);
}

TEST(Solve1d, MaximumPrinciple) {
    // Digital payoff bounded in [0, 1] without discounting stays in [0, 1].
    Pde1Spec s;
    s.diffusion = [](double) { return 0.16; };
    s.terminal = [](double z) { return z > 1.0 ? 1.0 : 0.0; };
    const auto u = solve_1d(s, {.nodes_per_axis = 200, .time_steps = 100});
    for (std::size_t k = 0; k < u.times().size(); ++k)
        for (double v : u.level(k)) {
            EXPECT_GE(v, -1e-12);
            EXPECT_LE(v, 1.0 + 1e-12);
        }
}

TEST(Solve1d, MonotoneInSpot) {
    const auto u = solve_1d(call_1d(0.3, 0.02, 1.0, 2.0), {});
    const auto level = u.level(0);
    for (std::size_t i = 1; i < level.size(); ++i) EXPECT_GE(level[i], level[i - 1] - 1e-14);
}

TEST(Solve1d, Errors) {
    const auto u = solve_1d(call_1d(0.2, 0.0, 1.0, 1.0), {});
    EXPECT_THROW((void)u(u.axis().upper() * 2, 0.0), ExtrapolationError);
    EXPECT_THROW((void)u(1.0, 2.0), ExtrapolationError);
    EXPECT_THROW((void)solve_1d(call_1d(0.2, 0.0, 1.0, 1.0), {.nodes_per_axis = 4}), Error);
}

TEST(Solve2d, FrozenStateIsIdentity) {
    Pde2Spec s;
    s.diffusion = [](double) { return Diffusion2{}; };
    s.terminal = [](double x, double) { return x; };
    const auto v = solve_2d(s, {.nodes_per_axis = 40, .time_steps = 10});
    for (double x : {0.97, 1.0, 1.03}) EXPECT_NEAR(v(x, 1.0), x, 1e-13);
    EXPECT_THROW((void)v(1.0, 1.0, 0.5), DomainError);
}

TEST(Solve2d, RejectsIndefiniteDiffusion) {
    Pde2Spec s;
    s.diffusion = [](double) { return Diffusion2{0.04, 0.1, 0.04}; };
    s.terminal = [](double x, double y) { return std::max(x - y, 0.0); };
    EXPECT_THROW((void)solve_2d(s, {.nodes_per_axis = 40, .time_steps = 10}), StabilityError);
}

TEST(Solve2d, Esop) {
    Esop e;
    const auto p = esop_pde(e);
    const auto v = solve_2d(p.full, {});
    EXPECT_LT(rel(v(e.spot, e.spot), esop_price(e, e.spot, 0.0)), 5e-4);
}

TEST(Solve2d, Convertible) {
    Convertible c;
    const auto p = convertible_pde(c);
    const auto v = solve_2d(p.full, {});
    EXPECT_LT(rel(v(p.spot[0], p.spot[1]), convertible_price(c, c.spot, c.vasicek.r0, 0.0)), 5e-4);
}

TEST(Reduction, Esop) {
    const auto p = esop_pde(Esop{});
    const std::array<std::array<double, 2>, 3> probes{{{90, 90}, {100, 100}, {110, 110}}};
    EXPECT_LT(reduction_gap(p.full, 1, {}, probes), 1e-3);
}

TEST(Reduction, Savings) {
    const auto p = savings_pde(Savings{});
    const std::array<std::array<double, 2>, 1> probes{{p.spot}};
    EXPECT_LT(reduction_gap(p.full, 0, {}, probes), 1e-3);
}

TEST(Reduction, Corporate) {
    const auto p = corporate_pde(Corporate{});
    const std::array<std::array<double, 2>, 1> probes{{p.spot}};
    EXPECT_LT(reduction_gap(p.full, 1, {}, probes), 1e-3);
}

TEST(Reduction, NonHomogeneousTerminalThrows) {
    auto p = esop_pde(Esop{});
    p.full.terminal = [](double x, double) { return std::max(x - 100.0, 0.0); };
    EXPECT_THROW((void)reduce_pde(p.full, 1), ReductionError);
}

TEST(Reduction, ReducedCoefficients) {
    const FxStrike f;
    const auto p = fx_gbp_pde(f);
    const auto r = reduce_pde(p.full, 1);
    const double expected = f.sigma_s * f.sigma_s + 2 * f.rho * f.sigma_s * f.sigma_x + f.sigma_x * f.sigma_x;
    EXPECT_NEAR(r.diffusion(0.3), expected, 1e-15);
    EXPECT_NEAR(r.drift(0.3), f.r_d, 1e-15);
    EXPECT_NEAR(r.discount(0.3), f.r_d, 1e-15);
}
