#include "numeraire/io.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "json_text.hpp"
#include "numeraire/errors.hpp"

namespace numeraire {

namespace {

using Json = nlohmann::ordered_json;

// Field name -> member, for one product type.
template <class P>
using Fields = std::vector<std::pair<std::string_view, std::function<double&(P&)>>>;

template <class P>
void add_vasicek(Fields<P>& f) {
    f.push_back({"theta", [](P& p) -> double& { return p.vasicek.theta; }});
    f.push_back({"mu_r", [](P& p) -> double& { return p.vasicek.mu_r; }});
    f.push_back({"sigma_r", [](P& p) -> double& { return p.vasicek.sigma_r; }});
    f.push_back({"lambda", [](P& p) -> double& { return p.vasicek.lambda; }});
    f.push_back({"r0", [](P& p) -> double& { return p.vasicek.r0; }});
}

#define NUMERAIRE_FIELD(name) {#name, [](auto& p) -> double& { return p.name; }}

Fields<Esop> esop_fields() {
    return {NUMERAIRE_FIELD(beta), NUMERAIRE_FIELD(t_reset), NUMERAIRE_FIELD(maturity),
            NUMERAIRE_FIELD(sigma), NUMERAIRE_FIELD(rate), NUMERAIRE_FIELD(spot)};
}

Fields<FxStrike> fx_fields() {
    return {NUMERAIRE_FIELD(sigma_s), NUMERAIRE_FIELD(sigma_x), NUMERAIRE_FIELD(rho),
            NUMERAIRE_FIELD(r_d),     NUMERAIRE_FIELD(r_p),     NUMERAIRE_FIELD(spot),
            NUMERAIRE_FIELD(fx),      NUMERAIRE_FIELD(maturity)};
}

Fields<Savings> savings_fields() {
    return {NUMERAIRE_FIELD(sigma_x), NUMERAIRE_FIELD(sigma_i),     NUMERAIRE_FIELD(rho),
            NUMERAIRE_FIELD(r_d),     NUMERAIRE_FIELD(r_f),         NUMERAIRE_FIELD(fx),
            NUMERAIRE_FIELD(price_level), NUMERAIRE_FIELD(maturity)};
}

Fields<Convertible> convertible_fields() {
    Fields<Convertible> f{NUMERAIRE_FIELD(sigma_s), NUMERAIRE_FIELD(rho), NUMERAIRE_FIELD(conv_date),
                          NUMERAIRE_FIELD(bond_maturity), NUMERAIRE_FIELD(spot)};
    add_vasicek(f);
    return f;
}

Fields<Corporate> corporate_fields() {
    Fields<Corporate> f{NUMERAIRE_FIELD(shares),   NUMERAIRE_FIELD(bonds),   NUMERAIRE_FIELD(conv_rate),
                        NUMERAIRE_FIELD(face),     NUMERAIRE_FIELD(sigma_v), NUMERAIRE_FIELD(rho),
                        NUMERAIRE_FIELD(maturity), NUMERAIRE_FIELD(firm_value)};
    add_vasicek(f);
    return f;
}

#undef NUMERAIRE_FIELD

template <class P>
ProductSpec read_fields(const Json& j, const Fields<P>& fields, std::string_view type) {
    P p{};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "type") continue;
        auto f = std::find_if(fields.begin(), fields.end(),
                              [&](const auto& e) { return e.first == it.key(); });
        if (f == fields.end())
            throw SpecError("unknown field \"" + it.key() + "\" for product type " + std::string(type));
        if (!it.value().is_number())
            throw SpecError("field \"" + it.key() + "\" must be a number");
        f->second(p) = it.value().get<double>();
    }
    return p;
}

template <class P>
Json write_fields(const P& product, const Fields<P>& fields) {
    P copy = product;
    Json j;
    j["type"] = std::string(product_type(ProductSpec{product}));
    for (const auto& [name, get] : fields) j[std::string(name)] = get(copy);
    return j;
}

ProductSpec from_json_value(const Json& j) {
    if (!j.is_object()) throw SpecError("product must be a JSON object");
    if (!j.contains("type") || !j["type"].is_string()) throw SpecError("product needs a string \"type\"");
    const std::string type = j["type"].get<std::string>();
    if (type == "esop") return read_fields(j, esop_fields(), type);
    if (type == "fx_strike") return read_fields(j, fx_fields(), type);
    if (type == "savings") return read_fields(j, savings_fields(), type);
    if (type == "convertible") return read_fields(j, convertible_fields(), type);
    if (type == "corporate") return read_fields(j, corporate_fields(), type);
    throw SpecError("unknown product type \"" + type + "\"");
}

Json parse(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

ProductSpec product_from_json(std::string_view text) { return from_json_value(parse(text)); }

std::vector<ProductSpec> products_from_json(std::string_view text) {
    const Json j = parse(text);
    std::vector<ProductSpec> out;
    const Json* list = &j;
    if (j.is_object() && j.contains("products")) list = &j["products"];
    if (list->is_array()) {
        for (const auto& e : *list) out.push_back(from_json_value(e));
    } else {
        out.push_back(from_json_value(*list));
    }
    return out;
}

std::string product_to_json(const ProductSpec& spec) {
    const Json j = std::visit(
        [](const auto& p) -> Json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Esop>) return write_fields(p, esop_fields());
            else if constexpr (std::is_same_v<T, FxStrike>) return write_fields(p, fx_fields());
            else if constexpr (std::is_same_v<T, Savings>) return write_fields(p, savings_fields());
            else if constexpr (std::is_same_v<T, Convertible>) return write_fields(p, convertible_fields());
            else return write_fields(p, corporate_fields());
        },
        spec);
    return detail::to_text(j);
}

std::string quote_to_json(std::string_view product, const PriceQuote& quote,
                          std::optional<std::uint64_t> seed) {
    Json j;
    j["product"] = std::string(product);
    j["method"] = std::string(method_name(quote.method()));
    j["value"] = quote.value();
    j["std_error"] = quote.std_error() ? Json(*quote.std_error()) : Json(nullptr);
    j["seed"] = seed ? Json(*seed) : Json(nullptr);
    return detail::to_text(j);
}

std::string reduced_to_json(const ReducedProblem& reduced, std::optional<double> value) {
    Json j;
    j["dimension"] = reduced.dimension();
    j["maturity"] = reduced.maturity;
    Json rows = Json::array();
    for (std::size_t i = 0; i < reduced.b_matrix.rows(); ++i) {
        Json row = Json::array();
        for (double v : reduced.b_matrix.row(i)) row.push_back(v);
        rows.push_back(row);
    }
    j["b_matrix"] = rows;
    if (value) j["value"] = *value;
    return detail::to_text(j);
}

std::string format_number(double v) { return detail::number_text(v); }

}  // namespace numeraire
