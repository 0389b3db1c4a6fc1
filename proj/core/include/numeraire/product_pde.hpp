#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "numeraire/model.hpp"
#include "numeraire/pde.hpp"

namespace numeraire {

/// A product's pricing equation in its two natural state variables together with
/// the one-dimensional equation obtained by a change of variables.
struct ProductPde {
    Pde2Spec full;
    Pde1Spec reduced;
    /// Axis of `full` used as numeraire; empty when the reduction is z = x y
    /// instead of a ratio (the dollar-measure FX equation).
    std::optional<std::size_t> numeraire_axis;
    /// State (x, y) at t = 0.
    std::array<double, 2> spot{};

    /// Value of `full` at the spot from a solved reduced equation.
    [[nodiscard]] double from_reduced(const Solution1d& u) const;
    /// Reduced coordinate at the spot.
    [[nodiscard]] double reduced_spot() const;
};

/// (S, S0) with S0 = S(T0) frozen after the reset; numeraire S0.
[[nodiscard]] ProductPde esop_pde(const Esop& spec);
/// (S, X) in dollars; reduced in z = S X.
[[nodiscard]] ProductPde fx_usd_pde(const FxStrike& spec);
/// (S, Y) in pounds with Y pounds per dollar; numeraire Y.
[[nodiscard]] ProductPde fx_gbp_pde(const FxStrike& spec);
/// (X, I) in domestic currency; numeraire X.
[[nodiscard]] ProductPde savings_pde(const Savings& spec);
/// (S, p) with p the bond maturing at bond_maturity; numeraire p; solved to conv_date.
[[nodiscard]] ProductPde convertible_pde(const Convertible& spec);
/// (V, p) with p the bond maturing at the product maturity; numeraire p.
[[nodiscard]] ProductPde corporate_pde(const Corporate& spec);

/// The equation verified for a product: FX uses the dollar pair.
[[nodiscard]] ProductPde product_pde(const ProductSpec& spec);

}  // namespace numeraire
