#pragma once

#include "numeraire/model.hpp"

namespace numeraire {

/// Standard normal CDF. Built as N(x) = 1 - N(-x) for x > 0 so the symmetry holds
/// to rounding of the final subtraction.
[[nodiscard]] double norm_cdf(double x);

struct BsInputs {
    double spot = 1.0;
    double strike = 1.0;
    double rate = 0.0;
    double carry = 0.0;
    double vol = 0.0;
    double tau = 0.0;
};

/// Black-Scholes call with cost of carry:
///   spot e^{(carry - rate) tau} N(d1) - strike e^{-rate tau} N(d2).
/// Total deviation vol sqrt(tau) below 1e-12 returns the discounted forward intrinsic value.
[[nodiscard]] double bs_call(const BsInputs& in);

/// ESOP value for 0 <= t <= T0 at stock price s (the S(T0) strike is not yet fixed).
[[nodiscard]] double esop_price(const Esop& spec, double s, double t);
[[nodiscard]] double esop_price(const Esop& spec, double t);

/// ESOP value for T0 <= t < T1 once S(T0) = s_reset is known:
/// (1 - beta) s + beta * call(s, strike s_reset).
[[nodiscard]] double esop_price_after_reset(const Esop& spec, double s_reset, double s, double t);

/// Dollar value of the fixed-dollar-strike option at stock price s (pounds) and
/// exchange rate x (dollars per pound).
[[nodiscard]] double fx_option_usd(const FxStrike& spec, double s, double x, double t);

/// Pound value at exchange rate y (pounds per dollar).
[[nodiscard]] double fx_option_gbp(const FxStrike& spec, double s, double y, double t);

/// Volatility of S X (equivalently S / Y).
[[nodiscard]] double fx_effective_vol(const FxStrike& spec);

/// Domestic value of the savings plan at exchange rate x (domestic per foreign)
/// and price level i.
[[nodiscard]] double savings_domestic(const Savings& spec, double x, double i, double t);

/// Foreign value at y = 1/x: y * savings_domestic(1/y, i, t).
[[nodiscard]] double savings_foreign(const Savings& spec, double y, double i, double t);

/// Volatility of I / X.
[[nodiscard]] double savings_effective_vol(const Savings& spec);

/// Convertible bond value for t < T0 given stock price s and short rate r_short.
[[nodiscard]] double convertible_price(const Convertible& spec, double s, double r_short, double t);

/// Corporate convertible value for t < T given firm value v and short rate r_short.
[[nodiscard]] double corporate_convertible_price(const Corporate& spec, double v, double r_short,
                                                 double t);

/// Closed-form value of any product at t = 0 and its own spot inputs. FX quotes
/// are in dollars, savings quotes in domestic currency.
[[nodiscard]] double analytic_price(const ProductSpec& spec);

}  // namespace numeraire
