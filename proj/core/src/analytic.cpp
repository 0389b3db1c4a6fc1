#include "numeraire/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "numeraire/errors.hpp"
#include "numeraire/ratecurve.hpp"

namespace numeraire {

namespace {

constexpr double kDegenerateSd = 1e-12;
constexpr double kSaturatedD = 40.0;

/// a N(d1) - b N(d2), d1 = (ln(a/b) + sd^2/2) / sd, d2 = d1 - sd: the value of
/// exchanging b for a when ln(a/b) has total standard deviation sd.
double exchange(double a, double b, double sd) {
    if (b <= 0.0) return a;
    if (a <= 0.0) return 0.0;
    if (sd < kDegenerateSd) return std::max(a - b, 0.0);
    const double d1 = std::clamp((std::log(a / b) + 0.5 * sd * sd) / sd, -kSaturatedD, kSaturatedD);
    const double d2 = std::clamp(d1 - sd, -kSaturatedD, kSaturatedD);
    return a * norm_cdf(d1) - b * norm_cdf(d2);
}

double remaining(double t, double maturity, const char* what) {
    if (!(t <= maturity)) throw DomainError(std::string(what) + ": valuation time after maturity");
    return maturity - t;
}

}  // namespace

double norm_cdf(double x) {
    if (x > 0.0) return 1.0 - norm_cdf(-x);
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double bs_call(const BsInputs& in) {
    const double sd = in.vol * std::sqrt(in.tau);
    const double forward = in.spot * std::exp(in.carry * in.tau);
    const double discount = std::exp(-in.rate * in.tau);
    return discount * exchange(forward, in.strike, sd);
}

double esop_price(const Esop& spec, double s, double t) {
    if (!(t >= 0.0 && t <= spec.t_reset))
        throw DomainError("esop_price covers 0 <= t <= T0; use esop_price_after_reset");
    const double unit_call = bs_call({.spot = 1.0,
                                      .strike = 1.0,
                                      .rate = spec.rate,
                                      .carry = spec.rate,
                                      .vol = spec.sigma,
                                      .tau = spec.maturity - spec.t_reset});
    return s * (1.0 - spec.beta + spec.beta * unit_call);
}

double esop_price(const Esop& spec, double t) { return esop_price(spec, spec.spot, t); }

double esop_price_after_reset(const Esop& spec, double s_reset, double s, double t) {
    if (!(t >= spec.t_reset && t < spec.maturity))
        throw DomainError("esop_price_after_reset covers T0 <= t < T1");
    if (!(s_reset > 0.0)) throw DomainError("reset price must be positive");
    return (1.0 - spec.beta) * s + spec.beta * bs_call({.spot = s,
                                                        .strike = s_reset,
                                                        .rate = spec.rate,
                                                        .carry = spec.rate,
                                                        .vol = spec.sigma,
                                                        .tau = spec.maturity - t});
}

double fx_effective_vol(const FxStrike& spec) {
    const double v = spec.sigma_s * spec.sigma_s + 2.0 * spec.rho * spec.sigma_s * spec.sigma_x +
                     spec.sigma_x * spec.sigma_x;
    return std::sqrt(std::max(v, 0.0));
}

double fx_option_usd(const FxStrike& spec, double s, double x, double t) {
    const double tau = remaining(t, spec.maturity, "fx_option_usd");
    return bs_call({.spot = s * x,
                    .strike = spec.strike_usd(),
                    .rate = spec.r_d,
                    .carry = spec.r_d,
                    .vol = fx_effective_vol(spec),
                    .tau = tau});
}

double fx_option_gbp(const FxStrike& spec, double s, double y, double t) {
    const double tau = remaining(t, spec.maturity, "fx_option_gbp");
    return bs_call({.spot = s,
                    .strike = spec.strike_usd() * y,
                    .rate = spec.r_d,
                    .carry = spec.r_d,
                    .vol = fx_effective_vol(spec),
                    .tau = tau});
}

double savings_effective_vol(const Savings& spec) {
    const double v = spec.sigma_x * spec.sigma_x + 2.0 * spec.rho * spec.sigma_x * spec.sigma_i +
                     spec.sigma_i * spec.sigma_i;
    return std::sqrt(std::max(v, 0.0));
}

double savings_domestic(const Savings& spec, double x, double i, double t) {
    const double tau = remaining(t, spec.maturity, "savings_domestic");
    if (t < 0.0) throw DomainError("savings_domestic: negative valuation time");
    const double domestic_leg = i * std::exp(spec.r_d * t);
    const double foreign_leg = x * spec.fx * std::exp(spec.r_f * t);
    // I e^{r_d t} N(d1) + X Y(0) e^{r_f t} N(-d2) = foreign leg + exchange option
    return foreign_leg +
           exchange(domestic_leg, foreign_leg, savings_effective_vol(spec) * std::sqrt(tau));
}

double savings_foreign(const Savings& spec, double y, double i, double t) {
    return y * savings_domestic(spec, 1.0 / y, i, t);
}

double convertible_price(const Convertible& spec, double s, double r_short, double t) {
    if (!(t <= spec.conv_date)) throw DomainError("convertible_price needs t <= T0");
    const auto& m = spec.vasicek;
    const double p = bond_price(m, r_short, t, spec.bond_maturity);
    const double var = integrated_variance(m, spec.sigma_s, spec.rho, t, spec.conv_date,
                                           spec.bond_maturity);
    return p + exchange(s, p, std::sqrt(var));
}

double corporate_convertible_price(const Corporate& spec, double v, double r_short, double t) {
    if (!(t <= spec.maturity)) throw DomainError("corporate_convertible_price needs t <= T");
    const double c = spec.dilution();
    if (spec.face == 0.0) return c * v;
    const auto& m = spec.vasicek;
    const double kp = spec.face * bond_price(m, r_short, t, spec.maturity);
    const double var = integrated_variance(m, spec.sigma_v, spec.rho, t, spec.maturity, spec.maturity);
    return kp + exchange(c * v, kp, std::sqrt(var));
}

double analytic_price(const ProductSpec& spec) {
    struct Visitor {
        double operator()(const Esop& p) const { return esop_price(p, p.spot, 0.0); }
        double operator()(const FxStrike& p) const { return fx_option_usd(p, p.spot, p.fx, 0.0); }
        double operator()(const Savings& p) const {
            return savings_domestic(p, 1.0 / p.fx, p.price_level, 0.0);
        }
        double operator()(const Convertible& p) const {
            return convertible_price(p, p.spot, p.vasicek.r0, 0.0);
        }
        double operator()(const Corporate& p) const {
            return corporate_convertible_price(p, p.firm_value, p.vasicek.r0, 0.0);
        }
    };
    return std::visit(Visitor{}, spec);
}

}  // namespace numeraire
