#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "numeraire/model.hpp"
#include "numeraire/ratecurve.hpp"

namespace numeraire {

struct McSpec {
    std::size_t paths = 1'000'000;
    /// Time steps per year for the rate products (discount integral).
    std::size_t steps = 256;
    std::uint64_t seed = 20240917;
    bool antithetic = true;
    /// Worker threads; 0 uses the hardware concurrency.
    std::size_t threads = 0;
};

/// With antithetic sampling std_error is computed from the pair averages, which
/// are the independent draws; paths_used counts both members of every pair.
struct McResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t paths_used = 0;
};

/// Discounted expected payoff under the product's pricing dynamics. FX quotes
/// are in dollars, savings quotes in domestic currency. Throws SpecError for
/// paths = 0 or steps = 0 and ValidationError for an invalid product (zero
/// volatilities are allowed).
[[nodiscard]] McResult price_mc(const ProductSpec& spec, const McSpec& mc);

/// The FX option in pounds, simulated under the pound measure.
[[nodiscard]] McResult price_mc_fx_gbp(const FxStrike& spec, const McSpec& mc);

/// E[exp(-int_0^T r dt)] by exact rate paths and trapezoidal integration.
[[nodiscard]] McResult bond_mc(const VasicekModel& model, double maturity, const McSpec& mc);

/// Variance of the exact OU transition over dt: sigma_r^2 (1 - e^{-2 theta dt}) / (2 theta).
[[nodiscard]] double vasicek_transition_variance(const VasicekModel& model, double dt);

/// One exact rate path started at r0 at t = 0, observed at `times` (increasing,
/// nonnegative) under the pricing measure. Path `path` of stream `seed`.
[[nodiscard]] std::vector<double> sample_vasicek(const VasicekModel& model,
                                                 std::span<const double> times,
                                                 std::uint64_t seed, std::uint64_t path = 0);

}  // namespace numeraire
