#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "numeraire/analytic.hpp"

using numeraire::cli::run;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("numeraire_cli_" + name);
    std::ofstream(path) << text;
    return path.string();
}

}  // namespace

TEST(Cli, PriceAnalytic) {
    const auto file = write_temp("esop.json", R"({"type": "esop"})");
    const auto r = call({"price", "--input", file, "--method", "analytic"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["method"], "analytic");
    EXPECT_EQ(j["product"], "esop");
    EXPECT_EQ(j["value"].get<double>(), numeraire::esop_price(numeraire::Esop{}, 100.0, 0.0));
}

TEST(Cli, PriceInvalidDates) {
    const auto file = write_temp("bad.json", R"({"type": "esop", "t_reset": 1.5, "maturity": 1.0})");
    const auto r = call({"price", "--input", file});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("t_reset must precede maturity"), std::string::npos);
}

TEST(Cli, PriceMonteCarloCsv) {
    const auto file = write_temp("savings.json", R"({"type": "savings"})");
    const auto r = call({"price", "--input", file, "--method", "monte_carlo", "--paths", "2000",
                         "--seed", "5", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("product,method,value,std_error,seed\nsavings,monte_carlo,", 0), 0u);
    EXPECT_NE(r.out.find(",5\n"), std::string::npos);
}

TEST(Cli, QuadratureUnavailable) {
    const auto file = write_temp("esop2.json", R"({"type": "esop"})");
    EXPECT_EQ(call({"price", "--input", file, "--method", "quadrature"}).code, 2);
}

TEST(Cli, ReduceExchange) {
    const auto file = write_temp("exchange.json", R"({"maturity": 1.0,
        "assets": [{"spot": 100, "loadings": [0.2, 0.0]}, {"spot": 95, "loadings": [0.15, 0.2]}],
        "payoff": {"type": "exchange"}})");
    const auto r = call({"reduce", "--input", file});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["dimension"], 1);
    const double a00 = 0.04, a01 = 0.03, a11 = 0.0225 + 0.04;
    EXPECT_NEAR(j["b_matrix"][0][0].get<double>(), a00 - 2 * a01 + a11, 1e-15);
}

TEST(Cli, ReduceFixedStrikeFails) {
    const auto file = write_temp("strike.json", R"({"assets": [{"spot": 1, "loadings": [0.2]},
        {"spot": 1, "loadings": [0.3]}], "payoff": {"type": "fixed_strike_call", "strike": 1, "asset": 1}})");
    EXPECT_EQ(call({"reduce", "--input", file}).code, 2);
}

TEST(Cli, Curve) {
    const auto file = write_temp("curve.json", R"({"maturities": [1, 2]})");
    const auto r = call({"curve", "--input", file, "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("T,bond_price,sigma_p\n", 0), 0u);
}

TEST(Cli, VerifyWritesOutputFile) {
    const auto in = write_temp("suite.json", R"({"products": [{"type": "savings"}]})");
    const auto out = (std::filesystem::temp_directory_path() / "numeraire_cli_report.json").string();
    const auto r = call({"verify", "--input", in, "--output", out, "--paths", "20000",
                         "--grid-nodes", "120", "--time-steps", "60"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(out);
    const auto j = nlohmann::json::parse(f);
    EXPECT_EQ(j["summary"]["total"], 1);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(call({}).code, 64);
    EXPECT_EQ(call({"bogus"}).code, 64);
    EXPECT_EQ(call({"price", "--bogus"}).code, 64);
    EXPECT_EQ(call({"price", "--input", "/nonexistent/file.json"}).code, 2);
    EXPECT_EQ(call({"price", "--input", write_temp("m.json", "{}"), "--method", "guess"}).code, 2);
}
