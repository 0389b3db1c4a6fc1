#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "numeraire/model.hpp"
#include "numeraire/reduction.hpp"

namespace numeraire {

/// Parses one product object: {"type": "esop", "beta": 0.85, ...}. Missing numeric
/// fields keep their defaults; unknown fields and malformed JSON raise SpecError.
/// Rate-model fields (theta, mu_r, sigma_r, lambda, r0) sit at the top level.
[[nodiscard]] ProductSpec product_from_json(std::string_view text);

/// A product object, an array of them, or {"products": [...]}.
[[nodiscard]] std::vector<ProductSpec> products_from_json(std::string_view text);

/// Every field of the product, in declaration order.
[[nodiscard]] std::string product_to_json(const ProductSpec& spec);

/// {"product": type, "method": name, "value": v, "std_error": se or null, "seed": s or null}
[[nodiscard]] std::string quote_to_json(std::string_view product, const PriceQuote& quote,
                                        std::optional<std::uint64_t> seed = std::nullopt);

/// {"dimension": n, "maturity": T, "b_matrix": [[...]]} plus "value" when given.
[[nodiscard]] std::string reduced_to_json(const ReducedProblem& reduced,
                                          std::optional<double> value = std::nullopt);

/// Number with 17 significant digits; empty for non-finite values.
[[nodiscard]] std::string format_number(double v);

}  // namespace numeraire
