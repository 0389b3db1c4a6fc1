#include "numeraire/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "linalg.hpp"
#include "numeraire/errors.hpp"

namespace numeraire {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

double Matrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

CovarianceMatrix::CovarianceMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (!entries_.square()) throw ShapeError("covariance matrix must be square");
    if (!detail::symmetric(entries_)) throw ShapeError("covariance matrix must be symmetric");
    if (entries_.rows() > 0 && detail::min_eigenvalue(entries_) < -1e-10 * std::abs(entries_.trace()))
        throw ShapeError("covariance matrix must be positive semidefinite");
}

CovarianceMatrix covariance_from_loadings(std::span<const AssetDynamics> assets) {
    const std::size_t n = assets.size();
    if (n == 0) throw DimensionError("at least one asset is required");
    const std::size_t m = assets.front().loadings.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (assets[i].loadings.size() != m)
            throw DimensionError("loading row " + std::to_string(i) + " has " +
                                 std::to_string(assets[i].loadings.size()) +
                                 " entries, expected " + std::to_string(m));
    }
    if (m == 0) throw DimensionError("loading rows must be non-empty");
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < m; ++k) s += assets[i].loadings[k] * assets[j].loadings[k];
            a(i, j) = s;
            a(j, i) = s;
        }
    }
    return CovarianceMatrix(std::move(a));
}

MultiAssetProblem make_problem(std::vector<AssetDynamics> assets, HomogeneousPayoff payoff,
                               double maturity) {
    for (const auto& a : assets)
        if (!(a.spot > 0.0)) throw DomainError("asset spot must be positive");
    if (!(maturity > 0.0)) throw DomainError("maturity must be positive");
    auto cov = covariance_from_loadings(assets);
    return MultiAssetProblem{std::move(assets), std::move(cov), std::move(payoff), maturity};
}

// ---------------------------------------------------------------------------

std::string_view product_type(const ProductSpec& spec) {
    struct Visitor {
        std::string_view operator()(const Esop&) const { return "esop"; }
        std::string_view operator()(const FxStrike&) const { return "fx_strike"; }
        std::string_view operator()(const Savings&) const { return "savings"; }
        std::string_view operator()(const Convertible&) const { return "convertible"; }
        std::string_view operator()(const Corporate&) const { return "corporate"; }
    };
    return std::visit(Visitor{}, spec);
}

double product_maturity(const ProductSpec& spec) {
    struct Visitor {
        double operator()(const Esop& p) const { return p.maturity; }
        double operator()(const FxStrike& p) const { return p.maturity; }
        double operator()(const Savings& p) const { return p.maturity; }
        double operator()(const Convertible& p) const { return p.conv_date; }
        double operator()(const Corporate& p) const { return p.maturity; }
    };
    return std::visit(Visitor{}, spec);
}

namespace {

class Checker {
public:
    explicit Checker(bool allow_zero_vol) : allow_zero_vol_(allow_zero_vol) {}

    void finite(std::string_view field, double v) {
        if (!std::isfinite(v)) add(field, "must be finite");
    }
    void positive(std::string_view field, double v) {
        if (!(v > 0.0)) add(field, "must be positive");
    }
    void nonnegative(std::string_view field, double v) {
        if (!(v >= 0.0)) add(field, "must be nonnegative");
    }
    void volatility(std::string_view field, double v) {
        if (allow_zero_vol_) nonnegative(field, v);
        else positive(field, v);
    }
    void correlation(std::string_view field, double v) {
        if (!(v > -1.0 && v < 1.0))
            add(field, "must lie in open interval (−1,1)");
    }
    void vasicek(const VasicekModel& m) {
        for (auto [name, v] : {std::pair<std::string_view, double>{"theta", m.theta},
                               {"mu_r", m.mu_r},
                               {"sigma_r", m.sigma_r},
                               {"lambda", m.lambda},
                               {"r0", m.r0}})
            finite(name, v);
        positive("theta", m.theta);
        nonnegative("sigma_r", m.sigma_r);
    }
    void message(std::string text) { out_.push_back(std::move(text)); }

    std::vector<std::string> take() { return std::move(out_); }

private:
    void add(std::string_view field, std::string_view what) {
        std::string msg(field);
        msg += ' ';
        msg += what;
        // A NaN can fail several predicates; report each field/bound once.
        for (const auto& existing : out_)
            if (existing == msg) return;
        out_.push_back(std::move(msg));
    }

    bool allow_zero_vol_;
    std::vector<std::string> out_;
};

std::vector<std::string> check(const ProductSpec& spec, bool allow_zero_vol) {
    Checker c(allow_zero_vol);
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Esop>) {
                for (auto [n, v] : {std::pair<std::string_view, double>{"beta", p.beta},
                                    {"t_reset", p.t_reset},
                                    {"maturity", p.maturity},
                                    {"sigma", p.sigma},
                                    {"rate", p.rate},
                                    {"spot", p.spot}})
                    c.finite(n, v);
                if (!(p.beta >= 0.0 && p.beta <= 1.0)) c.message("beta must lie in [0,1]");
                c.positive("t_reset", p.t_reset);
                if (!(p.t_reset < p.maturity)) c.message("t_reset must precede maturity");
                c.volatility("sigma", p.sigma);
                c.positive("spot", p.spot);
            } else if constexpr (std::is_same_v<T, FxStrike>) {
                for (auto [n, v] : {std::pair<std::string_view, double>{"sigma_s", p.sigma_s},
                                    {"sigma_x", p.sigma_x},
                                    {"rho", p.rho},
                                    {"r_d", p.r_d},
                                    {"r_p", p.r_p},
                                    {"spot", p.spot},
                                    {"fx", p.fx},
                                    {"maturity", p.maturity}})
                    c.finite(n, v);
                c.volatility("sigma_s", p.sigma_s);
                c.volatility("sigma_x", p.sigma_x);
                c.correlation("rho", p.rho);
                c.positive("spot", p.spot);
                c.positive("fx", p.fx);
                c.positive("maturity", p.maturity);
            } else if constexpr (std::is_same_v<T, Savings>) {
                for (auto [n, v] : {std::pair<std::string_view, double>{"sigma_x", p.sigma_x},
                                    {"sigma_i", p.sigma_i},
                                    {"rho", p.rho},
                                    {"r_d", p.r_d},
                                    {"r_f", p.r_f},
                                    {"fx", p.fx},
                                    {"price_level", p.price_level},
                                    {"maturity", p.maturity}})
                    c.finite(n, v);
                c.volatility("sigma_x", p.sigma_x);
                c.volatility("sigma_i", p.sigma_i);
                c.correlation("rho", p.rho);
                c.positive("fx", p.fx);
                c.positive("price_level", p.price_level);
                c.positive("maturity", p.maturity);
            } else if constexpr (std::is_same_v<T, Convertible>) {
                for (auto [n, v] : {std::pair<std::string_view, double>{"sigma_s", p.sigma_s},
                                    {"rho", p.rho},
                                    {"conv_date", p.conv_date},
                                    {"bond_maturity", p.bond_maturity},
                                    {"spot", p.spot}})
                    c.finite(n, v);
                c.volatility("sigma_s", p.sigma_s);
                c.correlation("rho", p.rho);
                c.positive("conv_date", p.conv_date);
                if (!(p.conv_date < p.bond_maturity))
                    c.message("conv_date must precede bond_maturity");
                c.positive("spot", p.spot);
                c.vasicek(p.vasicek);
            } else {
                for (auto [n, v] : {std::pair<std::string_view, double>{"shares", p.shares},
                                    {"bonds", p.bonds},
                                    {"conv_rate", p.conv_rate},
                                    {"face", p.face},
                                    {"sigma_v", p.sigma_v},
                                    {"rho", p.rho},
                                    {"maturity", p.maturity},
                                    {"firm_value", p.firm_value}})
                    c.finite(n, v);
                if (!(p.shares >= 1.0) || std::floor(p.shares) != p.shares)
                    c.message("shares must be an integer >= 1");
                if (!(p.bonds >= 0.0) || std::floor(p.bonds) != p.bonds)
                    c.message("bonds must be an integer >= 0");
                c.positive("conv_rate", p.conv_rate);
                c.nonnegative("face", p.face);
                c.volatility("sigma_v", p.sigma_v);
                c.correlation("rho", p.rho);
                c.positive("maturity", p.maturity);
                c.positive("firm_value", p.firm_value);
                if (!(p.shares + p.bonds * p.conv_rate > 0.0))
                    c.message("shares + bonds * conv_rate must be positive");
                c.vasicek(p.vasicek);
            }
        },
        spec);
    return c.take();
}

}  // namespace

std::vector<std::string> validate(const ProductSpec& spec) { return check(spec, false); }

std::vector<std::string> validate_allowing_zero_vol(const ProductSpec& spec) {
    return check(spec, true);
}

void require_valid(const ProductSpec& spec) {
    const auto v = validate(spec);
    if (v.empty()) return;
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "\n" : "") << v[i];
    throw ValidationError(os.str());
}

// ---------------------------------------------------------------------------

std::string_view method_name(Method m) {
    switch (m) {
        case Method::analytic: return "analytic";
        case Method::pde_full: return "pde_full";
        case Method::pde_reduced: return "pde_reduced";
        case Method::quadrature: return "quadrature";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (auto m : {Method::analytic, Method::pde_full, Method::pde_reduced, Method::quadrature,
                   Method::monte_carlo})
        if (method_name(m) == name) return m;
    return std::nullopt;
}

PriceQuote::PriceQuote(double value, Method method, std::optional<double> std_error)
    : value_(value), method_(method), std_error_(std_error) {
    if ((method == Method::monte_carlo) != std_error.has_value())
        throw SpecError("std_error is present exactly for monte_carlo quotes");
    if (std_error && !(*std_error >= 0.0)) throw SpecError("std_error must be nonnegative");
}

}  // namespace numeraire
