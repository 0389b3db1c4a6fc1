#include <gtest/gtest.h>

#include <cmath>

#include "numeraire/errors.hpp"
#include "numeraire/io.hpp"

using namespace numeraire;

TEST(Json, ProductRoundTrip) {
    Corporate c;
    c.face = 2.5;
    c.vasicek.theta = 0.7;
    const auto text = product_to_json(c);
    const auto back = product_from_json(text);
    ASSERT_TRUE(std::holds_alternative<Corporate>(back));
    EXPECT_EQ(std::get<Corporate>(back).face, 2.5);
    EXPECT_EQ(std::get<Corporate>(back).vasicek.theta, 0.7);
    EXPECT_EQ(product_to_json(back), text);
}

TEST(Json, MissingFieldsKeepDefaults) {
    const auto p = product_from_json(R"({"type": "esop", "beta": 0.5})");
    const auto& e = std::get<Esop>(p);
    EXPECT_EQ(e.beta, 0.5);
    EXPECT_EQ(e.spot, Esop{}.spot);
}

TEST(Json, Rejections) {
    EXPECT_THROW((void)product_from_json(R"({"type": "esop", "bta": 0.5})"), SpecError);
    EXPECT_THROW((void)product_from_json(R"({"type": "swap"})"), SpecError);
    EXPECT_THROW((void)product_from_json(R"({"type": "esop", "beta": "high"})"), SpecError);
    EXPECT_THROW((void)product_from_json("{"), SpecError);
}

TEST(Json, ProductLists) {
    const std::string one = R"({"type": "savings"})";
    EXPECT_EQ(products_from_json(one).size(), 1u);
    EXPECT_EQ(products_from_json("[" + one + "," + one + "]").size(), 2u);
    EXPECT_EQ(products_from_json(R"({"products": [)" + one + "]}").size(), 1u);
}

TEST(Json, QuoteFields) {
    const auto a = quote_to_json("esop", PriceQuote(1.5, Method::analytic));
    EXPECT_NE(a.find("\"std_error\": null"), std::string::npos);
    EXPECT_NE(a.find("\"seed\": null"), std::string::npos);
    const auto m = quote_to_json("esop", PriceQuote(1.5, Method::monte_carlo, 0.01), 7);
    EXPECT_NE(m.find("\"seed\": 7"), std::string::npos);
}

TEST(Json, Numbers) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(std::nan("")), "");
    EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}
