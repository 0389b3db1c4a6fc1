#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "numeraire/analytic.hpp"
#include "numeraire/errors.hpp"
#include "numeraire/io.hpp"
#include "numeraire/montecarlo.hpp"
#include "numeraire/product_pde.hpp"
#include "numeraire/ratecurve.hpp"
#include "numeraire/reduction.hpp"
#include "numeraire/verify.hpp"

namespace numeraire::cli {

namespace {

constexpr const char* kUsage =
    "usage: numeraire <command> [options]\n"
    "\n"
    "commands:\n"
    "  price    price one product        --input spec.json [--method analytic|pde_full|pde_reduced|quadrature|monte_carlo]\n"
    "  verify   cross-check all methods  [--input suite.json]\n"
    "  reduce   print the reduced matrix --input problem.json [--method quadrature]\n"
    "  curve    tabulate Vasicek bonds   --input vasicek.json\n"
    "\n"
    "options: --input --method --output --format json|csv --seed --paths\n"
    "         --grid-nodes --time-steps --tol\n";

struct Options {
    std::string input;
    std::string method;
    std::string output;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> grid_nodes;
    std::optional<std::size_t> time_steps;
    std::optional<double> tol;
};

// Bad input that is the caller's to fix: exit 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

std::string read_file(const std::string& path) {
    if (path.empty()) throw InputError("--input is required");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

GridSpec grid_of(const Options& o) {
    GridSpec g;
    if (o.grid_nodes) g.nodes_per_axis = *o.grid_nodes;
    if (o.time_steps) g.time_steps = *o.time_steps;
    return g;
}

McSpec mc_of(const Options& o) {
    McSpec m;
    if (o.seed) m.seed = *o.seed;
    if (o.paths) m.paths = *o.paths;
    return m;
}

std::string csv_number(std::optional<double> v) { return v ? format_number(*v) : ""; }

std::string price(const Options& o) {
    const ProductSpec spec = product_from_json(read_file(o.input));
    require_valid(spec);
    const std::string name = o.method.empty() ? "analytic" : o.method;
    const auto method = parse_method(name);
    if (!method) throw InputError("unknown method \"" + name + "\"");
    const std::string type(product_type(spec));

    std::optional<PriceQuote> quote;
    std::optional<std::uint64_t> seed;
    switch (*method) {
        case Method::analytic:
            quote.emplace(analytic_price(spec), *method);
            break;
        case Method::pde_full: {
            const ProductPde p = product_pde(spec);
            quote.emplace(solve_2d(p.full, grid_of(o))(p.spot[0], p.spot[1], 0.0), *method);
            break;
        }
        case Method::pde_reduced: {
            const ProductPde p = product_pde(spec);
            quote.emplace(p.from_reduced(solve_1d(p.reduced, grid_of(o))), *method);
            break;
        }
        case Method::quadrature: {
            const auto v = quadrature_value(spec);
            if (!v) throw InputError("method quadrature is not available for product " + type);
            quote.emplace(*v, *method);
            break;
        }
        case Method::monte_carlo: {
            const McSpec mc = mc_of(o);
            const McResult r = price_mc(spec, mc);
            quote.emplace(r.estimate, *method, r.std_error);
            seed = mc.seed;
            break;
        }
    }
    if (o.format == "csv")
        return "product,method,value,std_error,seed\n" + type + ',' + name + ',' +
               format_number(quote->value()) + ',' + csv_number(quote->std_error()) + ',' +
               (seed ? std::to_string(*seed) : "") + '\n';
    return quote_to_json(type, *quote, seed) + '\n';
}

std::string verify(const Options& o) {
    const std::vector<ProductSpec> specs = o.input.empty() ? default_suite() : products_from_json(read_file(o.input));
    SuiteConfig cfg;
    cfg.grid = grid_of(o);
    cfg.mc = mc_of(o);
    if (o.tol) cfg.tol = *o.tol;
    const SuiteResult result = run_suite(specs, cfg);
    if (o.format == "csv") return suite_to_csv(result);
    return suite_to_json(result, cfg) + '\n';
}

HomogeneousPayoff payoff_from(const Json& j, std::size_t assets) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw InputError("payoff needs a string \"type\"");
    const std::string type = j["type"];
    if (type == "exchange") {
        if (assets != 2) throw InputError("exchange payoff needs exactly two assets");
        return {[](std::span<const double> s) { return std::max(s[1] - s[0], 0.0); }};
    }
    if (type == "best_of")
        return {[](std::span<const double> s) { return *std::max_element(s.begin(), s.end()); }};
    if (type == "worst_of")
        return {[](std::span<const double> s) { return *std::min_element(s.begin(), s.end()); }};
    if (type == "spread") {
        if (!j.contains("weights") || !j["weights"].is_array() || j["weights"].size() != assets)
            throw InputError("spread payoff needs one weight per asset");
        const auto w = j["weights"].get<std::vector<double>>();
        return {[w](std::span<const double> s) {
            double v = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * s[i];
            return std::max(v, 0.0);
        }};
    }
    if (type == "fixed_strike_call") {
        const double k = j.value("strike", 1.0);
        const auto a = j.value("asset", std::size_t{1});
        if (a >= assets) throw InputError("fixed_strike_call asset index out of range");
        return {[k, a](std::span<const double> s) { return std::max(s[a] - k, 0.0); }};
    }
    throw InputError("unknown payoff type \"" + type + "\"");
}

std::string reduce_command(const Options& o) {
    const Json j = parse_json(read_file(o.input));
    if (!j.is_object() || !j.contains("assets") || !j["assets"].is_array())
        throw InputError("problem needs an \"assets\" array");
    std::vector<AssetDynamics> assets;
    try {
        for (const auto& a : j["assets"])
            assets.push_back({a.at("spot").get<double>(), a.at("loadings").get<std::vector<double>>()});
    } catch (const Json::exception& e) {
        throw InputError(std::string("bad asset entry: ") + e.what());
    }
    const double maturity = j.value("maturity", 1.0);
    if (!j.contains("payoff")) throw InputError("problem needs a \"payoff\"");
    auto problem = make_problem(assets, payoff_from(j["payoff"], assets.size()), maturity);
    const ReducedProblem reduced = reduce(problem);
    std::optional<double> value;
    if (o.method == "quadrature") {
        std::vector<double> z;
        for (std::size_t i = 1; i < assets.size(); ++i) z.push_back(assets[i].spot / assets[0].spot);
        value = assets[0].spot * quadrature_price(reduced, z, 0.0);
    } else if (!o.method.empty()) {
        throw InputError("reduce supports --method quadrature only");
    }
    return reduced_to_json(reduced, value) + '\n';
}

std::string curve(const Options& o) {
    const Json j = parse_json(read_file(o.input));
    VasicekModel m;
    std::vector<double> maturities{0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0};
    try {
        m.theta = j.value("theta", m.theta);
        m.mu_r = j.value("mu_r", m.mu_r);
        m.sigma_r = j.value("sigma_r", m.sigma_r);
        m.lambda = j.value("lambda", m.lambda);
        m.r0 = j.value("r0", m.r0);
        if (j.contains("maturities")) maturities = j["maturities"].get<std::vector<double>>();
    } catch (const Json::exception& e) {
        throw InputError(std::string("bad curve input: ") + e.what());
    }
    if (!(m.theta > 0.0)) throw ValidationError("theta must be positive");
    if (!(m.sigma_r >= 0.0)) throw ValidationError("sigma_r must be nonnegative");
    for (double t : maturities)
        if (!(t >= 0.0)) throw ValidationError("maturities must be nonnegative");

    if (o.format == "csv") {
        std::string s = "T,bond_price,sigma_p\n";
        for (double t : maturities)
            s += format_number(t) + ',' + format_number(bond_price(m, m.r0, 0.0, t)) + ',' +
                 format_number(sigma_p(m, 0.0, t)) + '\n';
        return s;
    }
    std::string s = "[";
    for (std::size_t i = 0; i < maturities.size(); ++i) {
        const double t = maturities[i];
        s += std::string(i ? ",\n  " : "\n  ") + "{\"T\": " + format_number(t) +
             ", \"bond_price\": " + format_number(bond_price(m, m.r0, 0.0, t)) +
             ", \"sigma_p\": " + format_number(sigma_p(m, 0.0, t)) + "}";
    }
    return s + (maturities.empty() ? "]\n" : "\n]\n");
}

void add_options(CLI::App& app, Options& o) {
    app.add_option("--input", o.input, "input JSON file");
    app.add_option("--method", o.method, "pricing method");
    app.add_option("--output", o.output, "write results here instead of stdout");
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", o.seed, "Monte Carlo seed");
    app.add_option("--paths", o.paths, "Monte Carlo paths");
    app.add_option("--grid-nodes", o.grid_nodes, "PDE nodes per axis");
    app.add_option("--time-steps", o.time_steps, "PDE time steps");
    app.add_option("--tol", o.tol, "relative tolerance for verify");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    static const std::vector<std::string> commands{"price", "verify", "reduce", "curve"};
    if (args.empty() || std::find(commands.begin(), commands.end(), args.front()) == commands.end()) {
        if (!args.empty() && (args.front() == "-h" || args.front() == "--help")) {
            out << kUsage;
            return ok;
        }
        if (!args.empty()) err << "unknown command: " << args.front() << "\n";
        err << kUsage;
        return usage;
    }
    const std::string command = args.front();

    Options o;
    CLI::App app{"numeraire " + command};
    add_options(app, o);
    std::vector<std::string> rest(args.rbegin(), args.rend() - 1);  // CLI11 wants reversed order
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help() << kUsage;
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << kUsage;
        return usage;
    }

    try {
        if (o.grid_nodes && *o.grid_nodes < 16) throw ValidationError("--grid-nodes must be at least 16");
        if (o.time_steps && *o.time_steps < 8) throw ValidationError("--time-steps must be at least 8");
        if (o.paths && *o.paths < 1) throw ValidationError("--paths must be at least 1");
        if (o.tol && !(*o.tol > 0.0)) throw ValidationError("--tol must be positive");
        std::string text;
        if (command == "price") text = price(o);
        else if (command == "verify") text = verify(o);
        else if (command == "reduce") text = reduce_command(o);
        else text = curve(o);

        if (o.output.empty()) {
            out << text;
        } else {
            std::ofstream f(o.output, std::ios::binary);
            if (!f) throw InputError("cannot write output file: " + o.output);
            f << text;
        }
        return ok;
    } catch (const ValidationError& e) {
        err << e.what() << "\n";
        return invalid_input;
    } catch (const SpecError& e) {
        err << e.what() << "\n";
        return invalid_input;
    } catch (const ReductionError& e) {
        err << e.what() << "\n";
        return invalid_input;
    } catch (const DimensionError& e) {
        err << e.what() << "\n";
        return invalid_input;
    } catch (const InputError& e) {
        err << e.what() << "\n";
        return invalid_input;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    }
}

}  // namespace numeraire::cli
