#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "numeraire/model.hpp"
#include "numeraire/montecarlo.hpp"
#include "numeraire/pde.hpp"

namespace numeraire {

struct AgreementReport {
    ProductSpec product;
    std::vector<PriceQuote> quotes;
    /// max |q - analytic| / |analytic| over the non-MC quotes.
    double max_rel_gap_deterministic = 0.0;
    /// |analytic - mc| / std_error; infinite if a zero-error estimate disagrees.
    double mc_z_score = 0.0;
    bool passed = false;
    double tol = 1e-3;
    std::uint64_t seed = 0;
    /// Set when a method could not run (the report then fails).
    std::string error;
};

/// Prices the product with every applicable method: analytic, both PDEs, the
/// quadrature formula for constant-coefficient products (FX and savings), and
/// Monte Carlo. FX is compared in dollars. Disagreement is reported, not
/// thrown; an invalid spec raises ValidationError.
[[nodiscard]] AgreementReport verify_product(const ProductSpec& spec, const GridSpec& grid,
                                             const McSpec& mc, double tol = 1e-3);

/// The quadrature formula applied through a traded numeraire: the dollar bond
/// for the FX option, the foreign savings account for the savings plan. Empty
/// for products with time-dependent coefficients.
[[nodiscard]] std::optional<double> quadrature_value(const ProductSpec& spec);

struct SuiteConfig {
    GridSpec grid{};
    McSpec mc{};
    double tol = 1e-3;
};

struct SuiteSummary {
    std::size_t total = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    double worst_gap = 0.0;
    double worst_z = 0.0;
};

struct SuiteResult {
    std::vector<AgreementReport> reports;
    SuiteSummary summary;
};

/// Verifies each product in order. Invalid products become failed reports
/// carrying the validation messages.
[[nodiscard]] SuiteResult run_suite(const std::vector<ProductSpec>& specs, const SuiteConfig& config);

/// The five default scenarios.
[[nodiscard]] std::vector<ProductSpec> default_suite();

[[nodiscard]] std::string report_to_json(const AgreementReport& report);
[[nodiscard]] std::string suite_to_json(const SuiteResult& result, const SuiteConfig& config);
/// Header "product,method,value,std_error,seed", one row per quote.
[[nodiscard]] std::string suite_to_csv(const SuiteResult& result);

}  // namespace numeraire
