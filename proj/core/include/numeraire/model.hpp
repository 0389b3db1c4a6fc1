#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "numeraire/ratecurve.hpp"

namespace numeraire {

/// Dense row-major matrix. Small (n <= a handful) in every use here.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] double trace() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Asset with spot S_i(0) and volatility loadings sigma_i1..sigma_im on
/// independent Brownian drivers.
struct AssetDynamics {
    double spot = 1.0;
    std::vector<double> loadings;
};

/// Instantaneous covariance a_ij of log-returns. Construction checks symmetry
/// (1e-12 relative) and positive semidefiniteness (min eigenvalue >= -1e-10 trace).
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(Matrix entries);

    [[nodiscard]] const Matrix& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return entries_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

private:
    Matrix entries_;
};

/// Terminal payoff P(S_0, ..., S_n); expected to be positively homogeneous of degree one.
struct HomogeneousPayoff {
    std::function<double(std::span<const double>)> evaluate;

    double operator()(std::span<const double> s) const { return evaluate(s); }
};

struct MultiAssetProblem {
    std::vector<AssetDynamics> assets;
    CovarianceMatrix covariance;
    HomogeneousPayoff payoff;
    double maturity = 1.0;
    std::function<double(double)> short_rate = [](double) { return 0.0; };
};

/// a_ij = sum_k loadings_i[k] loadings_j[k]. Throws DimensionError on ragged rows.
[[nodiscard]] CovarianceMatrix covariance_from_loadings(std::span<const AssetDynamics> assets);

/// Builds a problem, checking covariance dimension against the asset count.
[[nodiscard]] MultiAssetProblem make_problem(std::vector<AssetDynamics> assets,
                                             HomogeneousPayoff payoff, double maturity);

// ---------------------------------------------------------------------------
// Products

/// Employee stock ownership plan: pay S(T1) - beta min(S(T0), S(T1)) at T1.
struct Esop {
    double beta = 0.85;
    double t_reset = 0.5;
    double maturity = 1.0;
    double sigma = 0.2;
    double rate = 0.05;
    double spot = 100.0;
};

/// Call on a pound-denominated stock with a fixed dollar strike K_d = S(0) X(0).
/// `fx` is X(0), dollars per pound.
struct FxStrike {
    double sigma_s = 0.2;
    double sigma_x = 0.1;
    double rho = 0.3;
    double r_d = 0.05;
    double r_p = 0.03;
    double spot = 100.0;
    double fx = 1.3;
    double maturity = 1.0;

    [[nodiscard]] double strike_usd() const noexcept { return spot * fx; }
};

/// Savings account paying max{e^{r_d T} I(T), Y(0) e^{r_f T} X(T)} in domestic currency.
/// `fx` is Y(0), foreign per domestic; `price_level` is I(0), a gross index.
struct Savings {
    double sigma_x = 0.1;
    double sigma_i = 0.05;
    double rho = 0.2;
    double r_d = 0.04;
    double r_f = 0.02;
    double fx = 0.25;
    double price_level = 1.0;
    double maturity = 1.0;
};

/// Zero-coupon bond maturing at bond_maturity, convertible into one share at conv_date.
struct Convertible {
    double sigma_s = 0.25;
    double rho = 0.2;
    double conv_date = 1.0;
    double bond_maturity = 2.0;
    VasicekModel vasicek{};
    double spot = 1.0;
};

/// Corporate bond paying max{K, alpha S(T)} at T, with firm value V = m S + n C.
struct Corporate {
    double shares = 1e6;
    double bonds = 1e4;
    double conv_rate = 2.0;
    double face = 1.0;
    double sigma_v = 0.3;
    double rho = -0.1;
    double maturity = 1.0;
    VasicekModel vasicek{.theta = 0.3, .mu_r = 0.04, .sigma_r = 0.01, .lambda = 0.0, .r0 = 0.03};
    double firm_value = 2e6;

    /// alpha / (m + n alpha), the share of firm value received on conversion.
    [[nodiscard]] double dilution() const noexcept {
        return conv_rate / (shares + bonds * conv_rate);
    }
};

using ProductSpec = std::variant<Esop, FxStrike, Savings, Convertible, Corporate>;

/// JSON discriminator of a product: "esop", "fx_strike", "savings", "convertible", "corporate".
[[nodiscard]] std::string_view product_type(const ProductSpec& spec);

/// Date of the product's final payoff (T1 for the ESOP, the conversion date for
/// the convertible).
[[nodiscard]] double product_maturity(const ProductSpec& spec);

/// Field-level bound violations; empty iff the spec is valid. Never throws.
[[nodiscard]] std::vector<std::string> validate(const ProductSpec& spec);

/// As validate, but zero volatilities are accepted (deterministic limits).
[[nodiscard]] std::vector<std::string> validate_allowing_zero_vol(const ProductSpec& spec);

/// Throws ValidationError listing every violation, one per line.
void require_valid(const ProductSpec& spec);

// ---------------------------------------------------------------------------
// Quotes

enum class Method { analytic, pde_full, pde_reduced, quadrature, monte_carlo };

[[nodiscard]] std::string_view method_name(Method m);
[[nodiscard]] std::optional<Method> parse_method(std::string_view name);

/// A price from one method; std_error is set iff method is monte_carlo.
class PriceQuote {
public:
    PriceQuote(double value, Method method, std::optional<double> std_error = std::nullopt);

    [[nodiscard]] double value() const noexcept { return value_; }
    [[nodiscard]] Method method() const noexcept { return method_; }
    [[nodiscard]] std::optional<double> std_error() const noexcept { return std_error_; }

private:
    double value_;
    Method method_;
    std::optional<double> std_error_;
};

}  // namespace numeraire
