#include "numeraire/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json_text.hpp"
#include "numeraire/analytic.hpp"
#include "numeraire/errors.hpp"
#include "numeraire/io.hpp"
#include "numeraire/product_pde.hpp"
#include "numeraire/reduction.hpp"

namespace numeraire {

namespace {

using Json = nlohmann::ordered_json;

Json product_json(const ProductSpec& spec) { return Json::parse(product_to_json(spec)); }

Json report_json(const AgreementReport& r) {
    Json j;
    j["product"] = product_json(r.product);
    Json quotes = Json::array();
    for (const auto& q : r.quotes) {
        Json e;
        e["method"] = std::string(method_name(q.method()));
        e["value"] = q.value();
        e["std_error"] = q.std_error() ? Json(*q.std_error()) : Json(nullptr);
        quotes.push_back(e);
    }
    j["quotes"] = quotes;
    j["max_rel_gap_deterministic"] = r.max_rel_gap_deterministic;
    j["mc_z_score"] = r.mc_z_score;
    j["tol"] = r.tol;
    j["seed"] = r.seed;
    j["passed"] = r.passed;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

}  // namespace

std::optional<double> quadrature_value(const ProductSpec& spec) {
    if (const auto* p = std::get_if<FxStrike>(&spec)) {
        // Numeraire: the dollar bond e^{r_d t}; second asset S X in dollars.
        const double strike = p->strike_usd() * std::exp(-p->r_d * p->maturity);
        auto problem = make_problem(
            {AssetDynamics{1.0, {0.0}}, AssetDynamics{p->spot * p->fx, {fx_effective_vol(*p)}}},
            HomogeneousPayoff{[strike](std::span<const double> s) {
                return std::max(s[1] - strike * s[0], 0.0);
            }},
            p->maturity);
        const double z = p->spot * p->fx;
        return quadrature_price(reduce(problem), std::span<const double>(&z, 1), 0.0);
    }
    if (const auto* p = std::get_if<Savings>(&spec)) {
        // Numeraire: Y(0) e^{r_f t} X(t); second asset e^{r_d t} I(t). Both start at
        // Y(0) X(0) = 1 and I(0) respectively.
        const double side = std::sqrt(1.0 - p->rho * p->rho) * p->sigma_i;
        auto problem = make_problem(
            {AssetDynamics{1.0, {p->sigma_x, 0.0}},
             AssetDynamics{p->price_level, {-p->rho * p->sigma_i, side}}},
            HomogeneousPayoff{[](std::span<const double> s) { return std::max(s[0], s[1]); }},
            p->maturity);
        const double z = p->price_level;
        return quadrature_price(reduce(problem), std::span<const double>(&z, 1), 0.0);
    }
    return std::nullopt;
}

AgreementReport verify_product(const ProductSpec& spec, const GridSpec& grid, const McSpec& mc,
                               double tol) {
    require_valid(spec);
    AgreementReport r{spec, {}, 0.0, 0.0, false, tol, mc.seed, {}};
    const double analytic = analytic_price(spec);
    r.quotes.emplace_back(analytic, Method::analytic);
    const double scale = std::max(std::abs(analytic), std::numeric_limits<double>::min());
    auto record = [&](double v, Method m) {
        r.quotes.emplace_back(v, m);
        r.max_rel_gap_deterministic = std::max(r.max_rel_gap_deterministic, std::abs(v - analytic) / scale);
    };
    try {
        const ProductPde pde = product_pde(spec);
        record(solve_2d(pde.full, grid)(pde.spot[0], pde.spot[1], 0.0), Method::pde_full);
        record(pde.from_reduced(solve_1d(pde.reduced, grid)), Method::pde_reduced);
        if (auto q = quadrature_value(spec)) record(*q, Method::quadrature);
        const McResult m = price_mc(spec, mc);
        r.quotes.emplace_back(m.estimate, Method::monte_carlo, m.std_error);
        const double diff = std::abs(analytic - m.estimate);
        if (m.std_error > 0.0) r.mc_z_score = diff / m.std_error;
        else r.mc_z_score = diff <= 1e-12 * scale ? 0.0 : std::numeric_limits<double>::infinity();
    } catch (const Error& e) {
        r.error = e.what();
    }
    r.passed = r.error.empty() && r.max_rel_gap_deterministic <= tol && r.mc_z_score <= 3.0;
    return r;
}

SuiteResult run_suite(const std::vector<ProductSpec>& specs, const SuiteConfig& config) {
    SuiteResult out;
    for (const auto& spec : specs) {
        AgreementReport r;
        try {
            r = verify_product(spec, config.grid, config.mc, config.tol);
        } catch (const ValidationError& e) {
            r = AgreementReport{spec, {}, 0.0, 0.0, false, config.tol, config.mc.seed, e.what()};
        }
        auto& s = out.summary;
        ++s.total;
        if (r.passed) ++s.passed;
        else ++s.failed;
        s.worst_gap = std::max(s.worst_gap, r.max_rel_gap_deterministic);
        s.worst_z = std::max(s.worst_z, r.mc_z_score);
        out.reports.push_back(std::move(r));
    }
    return out;
}

std::vector<ProductSpec> default_suite() {
    return {Esop{}, FxStrike{}, Savings{}, Convertible{}, Corporate{}};
}

std::string report_to_json(const AgreementReport& report) { return detail::to_text(report_json(report)); }

std::string suite_to_json(const SuiteResult& result, const SuiteConfig& config) {
    Json j;
    Json c;
    c["nodes_per_axis"] = config.grid.nodes_per_axis;
    c["time_steps"] = config.grid.time_steps;
    c["span_sigmas"] = config.grid.span_sigmas;
    c["paths"] = config.mc.paths;
    c["steps_per_year"] = config.mc.steps;
    c["seed"] = config.mc.seed;
    c["antithetic"] = config.mc.antithetic;
    c["tol"] = config.tol;
    j["config"] = c;
    Json reports = Json::array();
    for (const auto& r : result.reports) reports.push_back(report_json(r));
    j["reports"] = reports;
    Json s;
    s["total"] = result.summary.total;
    s["passed"] = result.summary.passed;
    s["failed"] = result.summary.failed;
    s["worst_gap"] = result.summary.worst_gap;
    s["worst_z"] = result.summary.worst_z;
    j["summary"] = s;
    return detail::to_text(j);
}

std::string suite_to_csv(const SuiteResult& result) {
    std::string out = "product,method,value,std_error,seed\n";
    for (const auto& r : result.reports)
        for (const auto& q : r.quotes) {
            const bool mc = q.method() == Method::monte_carlo;
            out += std::string(product_type(r.product)) + ',' + std::string(method_name(q.method())) + ',' +
                   format_number(q.value()) + ',' + (mc ? format_number(*q.std_error()) : "") + ',' +
                   (mc ? std::to_string(r.seed) : "") + '\n';
        }
    return out;
}

}  // namespace numeraire
