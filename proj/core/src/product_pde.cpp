#include "numeraire/product_pde.hpp"

#include <algorithm>
#include <cmath>

#include "numeraire/ratecurve.hpp"

namespace numeraire {

double ProductPde::from_reduced(const Solution1d& u) const {
    if (!numeraire_axis) return u(spot[0] * spot[1], 0.0);
    const std::size_t k = *numeraire_axis;
    return spot[k] * u(spot[1 - k] / spot[k], 0.0);
}

double ProductPde::reduced_spot() const {
    if (!numeraire_axis) return spot[0] * spot[1];
    const std::size_t k = *numeraire_axis;
    return spot[1 - k] / spot[k];
}

namespace {

auto constant(double v) {
    return [v](double, double, double) { return v; };
}

auto constant1(double v) {
    return [v](double) { return v; };
}

}  // namespace

ProductPde esop_pde(const Esop& spec) {
    const double sigma = spec.sigma, r = spec.rate, beta = spec.beta, t0 = spec.t_reset;
    const double k = std::exp(-r * (spec.maturity - t0));
    auto sigma0 = [sigma, t0](double t) { return t < t0 ? sigma : 0.0; };

    ProductPde p;
    p.full.diffusion = [sigma, sigma0](double t) {
        const double s0 = sigma0(t);
        return Diffusion2{sigma * sigma, sigma * s0, s0 * s0};
    };
    p.full.drift_x = constant(r);
    p.full.drift_y = constant(r);
    p.full.discount = constant(r);
    p.full.terminal = [beta, k](double s, double s0) { return s - beta * std::min(s, k * s0); };
    p.full.maturity = spec.maturity;
    p.full.center = {spec.spot, spec.spot};
    p.full.breakpoints = {t0};

    p.reduced.diffusion = [sigma, sigma0](double t) {
        const double d = sigma - sigma0(t);
        return d * d;
    };
    p.reduced.terminal = [beta, k](double z) {
        return (1.0 - beta) * z + beta * std::max(z - k, 0.0);
    };
    p.reduced.maturity = spec.maturity;
    p.reduced.center = 1.0;
    p.reduced.breakpoints = {t0};

    p.numeraire_axis = 1;
    p.spot = {spec.spot, spec.spot};
    return p;
}

ProductPde fx_usd_pde(const FxStrike& spec) {
    const double ss = spec.sigma_s, sx = spec.sigma_x, rho = spec.rho;
    const double kd = spec.strike_usd();

    ProductPde p;
    p.full.diffusion = [ss, sx, rho](double) { return Diffusion2{ss * ss, rho * ss * sx, sx * sx}; };
    p.full.drift_x = constant(spec.r_p - rho * ss * sx);
    p.full.drift_y = constant(spec.r_d - spec.r_p);
    p.full.discount = constant(spec.r_d);
    p.full.terminal = [kd](double s, double x) { return std::max(s * x - kd, 0.0); };
    p.full.maturity = spec.maturity;
    p.full.center = {spec.spot, spec.fx};

    const double v = ss * ss + 2.0 * rho * ss * sx + sx * sx;
    p.reduced.diffusion = constant1(v);
    p.reduced.drift = constant1(spec.r_d);
    p.reduced.discount = constant1(spec.r_d);
    p.reduced.terminal = [kd](double z) { return std::max(z - kd, 0.0); };
    p.reduced.maturity = spec.maturity;
    p.reduced.center = spec.spot * spec.fx;

    p.spot = {spec.spot, spec.fx};
    return p;
}

ProductPde fx_gbp_pde(const FxStrike& spec) {
    const double ss = spec.sigma_s, sx = spec.sigma_x, rho = spec.rho;
    const double kd = spec.strike_usd();
    const double y0 = 1.0 / spec.fx;

    ProductPde p;
    p.full.diffusion = [ss, sx, rho](double) { return Diffusion2{ss * ss, -rho * ss * sx, sx * sx}; };
    p.full.drift_x = constant(spec.r_p);
    p.full.drift_y = constant(spec.r_p - spec.r_d);
    p.full.discount = constant(spec.r_p);
    p.full.terminal = [kd](double s, double y) { return std::max(s - kd * y, 0.0); };
    p.full.maturity = spec.maturity;
    p.full.center = {spec.spot, y0};

    const double v = ss * ss + 2.0 * rho * ss * sx + sx * sx;
    p.reduced.diffusion = constant1(v);
    p.reduced.drift = constant1(spec.r_d);
    p.reduced.discount = constant1(spec.r_d);
    p.reduced.terminal = [kd](double z) { return std::max(z - kd, 0.0); };
    p.reduced.maturity = spec.maturity;
    p.reduced.center = spec.spot / y0;

    p.numeraire_axis = 1;
    p.spot = {spec.spot, y0};
    return p;
}

ProductPde savings_pde(const Savings& spec) {
    const double sx = spec.sigma_x, si = spec.sigma_i, rho = spec.rho;
    const double grow_d = std::exp(spec.r_d * spec.maturity);
    const double grow_f = spec.fx * std::exp(spec.r_f * spec.maturity);

    ProductPde p;
    p.full.diffusion = [sx, si, rho](double) { return Diffusion2{sx * sx, -rho * sx * si, si * si}; };
    p.full.drift_x = constant(spec.r_d - spec.r_f);
    p.full.drift_y = constant(0.0);
    p.full.discount = constant(spec.r_d);
    p.full.terminal = [grow_d, grow_f](double x, double i) {
        return std::max(grow_d * i, grow_f * x);
    };
    p.full.maturity = spec.maturity;
    const double x0 = 1.0 / spec.fx;
    p.full.center = {x0, spec.price_level};

    const double v = sx * sx + 2.0 * rho * sx * si + si * si;
    p.reduced.diffusion = constant1(v);
    p.reduced.drift = constant1(spec.r_f - spec.r_d);
    p.reduced.discount = constant1(spec.r_f);
    p.reduced.terminal = [grow_d, grow_f](double z) {
        return grow_f + grow_d * std::max(z - grow_f / grow_d, 0.0);
    };
    p.reduced.maturity = spec.maturity;
    p.reduced.center = spec.price_level / x0;

    p.numeraire_axis = 0;
    p.spot = {x0, spec.price_level};
    return p;
}

namespace {

// Shared shape of the convertible and the corporate bond: an asset with
// constant volatility and a zero-coupon bond maturing at `bond_maturity`, both
// drifting at the short rate implied by the bond price.
ProductPde asset_and_bond(double sigma, double rho, const VasicekModel& m, double expiry,
                          double bond_maturity, double asset_spot) {
    ProductPde p;
    auto sig_p = [m, bond_maturity](double t) { return sigma_p(m, t, bond_maturity); };
    p.full.diffusion = [sigma, rho, sig_p](double t) {
        const double sp = sig_p(t);
        return Diffusion2{sigma * sigma, -rho * sigma * sp, sp * sp};
    };
    auto rate = [m, bond_maturity](double t, double, double bond) {
        return short_rate_from_bond(m, bond, t, bond_maturity);
    };
    p.full.drift_x = rate;
    p.full.drift_y = rate;
    p.full.discount = rate;
    p.full.state_dependence = Pde2Spec::Dependence::y_only;
    p.full.maturity = expiry;
    const double p0 = bond_price(m, m.r0, 0.0, bond_maturity);
    p.full.center = {asset_spot, p0};

    p.reduced.diffusion = [sigma, rho, sig_p](double t) {
        const double sp = sig_p(t);
        return sigma * sigma + 2.0 * rho * sigma * sp + sp * sp;
    };
    p.reduced.maturity = expiry;
    p.reduced.center = asset_spot / p0;

    p.numeraire_axis = 1;
    p.spot = {asset_spot, p0};
    return p;
}

}  // namespace

ProductPde convertible_pde(const Convertible& spec) {
    ProductPde p = asset_and_bond(spec.sigma_s, spec.rho, spec.vasicek, spec.conv_date,
                                  spec.bond_maturity, spec.spot);
    p.full.terminal = [](double s, double bond) { return std::max(s, bond); };
    p.reduced.terminal = [](double z) { return 1.0 + std::max(z - 1.0, 0.0); };
    return p;
}

ProductPde corporate_pde(const Corporate& spec) {
    ProductPde p = asset_and_bond(spec.sigma_v, spec.rho, spec.vasicek, spec.maturity,
                                  spec.maturity, spec.firm_value);
    const double k = spec.face, c = spec.dilution();
    p.full.terminal = [k, c](double v, double bond) { return std::max(k * bond, c * v); };
    if (k == 0.0) {
        p.reduced.terminal = [c](double z) { return c * z; };
    } else {
        p.reduced.terminal = [k, c](double z) { return k + c * std::max(z - k / c, 0.0); };
    }
    return p;
}

ProductPde product_pde(const ProductSpec& spec) {
    struct Visitor {
        ProductPde operator()(const Esop& p) const { return esop_pde(p); }
        ProductPde operator()(const FxStrike& p) const { return fx_usd_pde(p); }
        ProductPde operator()(const Savings& p) const { return savings_pde(p); }
        ProductPde operator()(const Convertible& p) const { return convertible_pde(p); }
        ProductPde operator()(const Corporate& p) const { return corporate_pde(p); }
    };
    return std::visit(Visitor{}, spec);
}

}  // namespace numeraire
