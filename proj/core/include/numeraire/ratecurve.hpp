#pragma once

namespace numeraire {

/// Vasicek short-rate model dr = theta (mu_r - r) dt + sigma_r dW.
///
/// `lambda` is the market price of rate risk entering the bond equation
/// p_t + sigma_r^2/2 p_rr - r p = (lambda sigma_r - theta (mu_r - r)) p_r,
/// so the pricing-measure long-run level is mu_r - lambda sigma_r / theta.
struct VasicekModel {
    double theta = 0.5;
    double mu_r = 0.05;
    double sigma_r = 0.01;
    double lambda = 0.0;
    double r0 = 0.03;

    /// Long-run level under the pricing measure.
    [[nodiscard]] double risk_neutral_level() const noexcept {
        return mu_r - lambda * sigma_r / theta;
    }
};

/// (1 - exp(-theta (T - t))) / theta, with a Taylor branch for theta (T - t) < 1e-8.
[[nodiscard]] double b_factor(const VasicekModel& model, double t, double maturity);

/// A(t, T) of the affine bond price p = A exp(-B r).
[[nodiscard]] double a_factor(const VasicekModel& model, double t, double maturity);

/// Zero-coupon bond price p(r, t; T).
[[nodiscard]] double bond_price(const VasicekModel& model, double r, double t, double maturity);

/// Inverts bond_price for the short rate. Throws DomainError when t >= T.
[[nodiscard]] double short_rate_from_bond(const VasicekModel& model, double p, double t,
                                          double maturity);

/// Bond price volatility sigma_r B(t, T).
[[nodiscard]] double sigma_p(const VasicekModel& model, double t, double maturity);

/// Closed form of the integral over [t, t0] of
///   sigma_a^2 + 2 rho sigma_a Sigma_p(u, t1) + Sigma_p(u, t1)^2.
/// This is the total variance of ln(asset / p(., t1)) accumulated up to t0.
[[nodiscard]] double integrated_variance(const VasicekModel& model, double sigma_a, double rho,
                                         double t, double t0, double t1);

}  // namespace numeraire
