#pragma once

#include <cstddef>
#include <functional>

namespace numeraire {

struct IntegrationResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
};

struct IntegrationOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    /// Equal panels the range is cut into before adapting. Enough panels keep
    /// narrow features (a payoff that is zero on most of the range) visible.
    std::size_t initial_panels = 16;
    std::size_t max_intervals = 4000;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b]: the interval
/// with the largest error estimate is bisected until the summed estimate drops
/// below max(abs_tol, rel_tol |value|) or the interval budget runs out.
[[nodiscard]] IntegrationResult integrate_adaptive(const std::function<double(double)>& f,
                                                   double a, double b,
                                                   const IntegrationOptions& options = {});

}  // namespace numeraire
