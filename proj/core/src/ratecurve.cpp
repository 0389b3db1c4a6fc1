#include "numeraire/ratecurve.hpp"

#include <algorithm>
#include <cmath>

#include "numeraire/errors.hpp"

namespace numeraire {

namespace {

constexpr double kSeriesThreshold = 1e-8;

// (1 - e^{-x}) / x
double one_minus_exp_over(double x) {
    if (x < kSeriesThreshold) return 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
    return -std::expm1(-x) / x;
}

// (B - tau) / tau = (1 - e^{-x}) / x - 1, accurate for small x
double b_minus_tau_ratio(double x) {
    if (x < 1e-2) {
        // -x/2 + x^2/6 - x^3/24 + x^4/120 - x^5/720 + x^6/5040
        double term = -x / 2.0;
        double sum = term;
        for (int k = 3; k <= 8; ++k) {
            term *= -x / k;
            sum += term;
        }
        return sum;
    }
    return -std::expm1(-x) / x - 1.0;
}

void require_ordered(double t, double maturity) {
    if (!(t <= maturity)) throw DomainError("valuation time must not exceed maturity");
}

}  // namespace

double b_factor(const VasicekModel& model, double t, double maturity) {
    require_ordered(t, maturity);
    const double tau = maturity - t;
    if (tau == 0.0) return 0.0;
    return tau * one_minus_exp_over(model.theta * tau);
}

double a_factor(const VasicekModel& model, double t, double maturity) {
    require_ordered(t, maturity);
    const double tau = maturity - t;
    if (tau == 0.0) return 1.0;
    const double theta = model.theta;
    const double s2 = model.sigma_r * model.sigma_r;
    const double b = b_factor(model, t, maturity);
    const double b_minus_tau = tau * b_minus_tau_ratio(theta * tau);
    const double level = model.risk_neutral_level() - s2 / (2.0 * theta * theta);
    return std::exp(b_minus_tau * level - s2 * b * b / (4.0 * theta));
}

double bond_price(const VasicekModel& model, double r, double t, double maturity) {
    return a_factor(model, t, maturity) * std::exp(-b_factor(model, t, maturity) * r);
}

double short_rate_from_bond(const VasicekModel& model, double p, double t, double maturity) {
    if (!(t < maturity)) throw DomainError("short rate inversion needs t < maturity (B = 0)");
    if (!(p > 0.0)) throw DomainError("bond price must be positive");
    const double b = b_factor(model, t, maturity);
    return -(std::log(p) - std::log(a_factor(model, t, maturity))) / b;
}

double sigma_p(const VasicekModel& model, double t, double maturity) {
    return model.sigma_r * b_factor(model, t, maturity);
}

double integrated_variance(const VasicekModel& model, double sigma_a, double rho, double t,
                           double t0, double t1) {
    if (!(t <= t0 && t0 <= t1)) throw DomainError("integrated variance needs t <= T0 <= T1");
    if (t0 == t) return 0.0;
    const double theta = model.theta;
    const double sr = model.sigma_r;
    // Substitute s = t1 - u; integrate over s in [s0, s1].
    const double s0 = t1 - t0;
    const double s1 = t1 - t;
    const double len = s1 - s0;

    double int_b = 0.0;   // integral of B(s)
    double int_b2 = 0.0;  // integral of B(s)^2
    if (theta * s1 < 1.0) {
        // Antiderivatives as power series in x = theta s:
        //   B(s)   = sum_{k>=1} (-theta)^{k-1} s^k / k!
        //   B(s)^2 = sum_{k>=2} (2^k - 2) (-theta)^{k-2} s^k / k!
        auto antiderivatives = [theta](double s) {
            double ib = 0.0;
            double ib2 = 0.0;
            double pk = s;  // (-theta)^{k-1} s^k / k!
            for (int k = 1; k <= 40; ++k) {
                if (k > 1) pk *= -theta * s / k;
                ib += pk * s / (k + 1);
                if (k >= 2) ib2 += (std::ldexp(1.0, k) - 2.0) * (pk / -theta) * s / (k + 1);
            }
            return std::pair{ib, ib2};
        };
        if (theta == 0.0) {
            int_b = (s1 * s1 - s0 * s0) / 2.0;
            int_b2 = (s1 * s1 * s1 - s0 * s0 * s0) / 3.0;
        } else {
            const auto [b1, b21] = antiderivatives(s1);
            const auto [b0, b20] = antiderivatives(s0);
            int_b = b1 - b0;
            int_b2 = b21 - b20;
        }
    } else {
        // e^{-theta s0} - e^{-theta s1} and its squared-exponent analogue, without cancellation
        const double d1 = std::exp(-theta * s0) * -std::expm1(-theta * len);
        const double d2 = std::exp(-2.0 * theta * s0) * -std::expm1(-2.0 * theta * len);
        int_b = (len - d1 / theta) / theta;
        int_b2 = (len - 2.0 * d1 / theta + d2 / (2.0 * theta)) / (theta * theta);
    }
    const double v =
        sigma_a * sigma_a * len + 2.0 * rho * sigma_a * sr * int_b + sr * sr * int_b2;
    return std::max(v, 0.0);
}

}  // namespace numeraire
