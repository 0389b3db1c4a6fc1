#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "numeraire/model.hpp"

namespace numeraire {

/// n-dimensional driftless problem obtained by taking S_0 as numeraire:
/// U = V / S_0, z_i = S_i / S_0, with
///   U_t + 1/2 sum_ij b_ij z_i z_j U_{z_i z_j} = 0,  U(z, T) = P(1, z).
struct ReducedProblem {
    Matrix b_matrix;
    std::function<double(std::span<const double>)> payoff_f;
    double maturity = 1.0;

    [[nodiscard]] std::size_t dimension() const noexcept { return b_matrix.rows(); }
};

/// Samples (S, a) with log-uniform components in [0.1, 10] from a fixed seed and
/// checks |P(aS) - a P(S)| <= tol (1 + |a P(S)|). Throws EvaluationError if the
/// payoff returns a non-finite value.
[[nodiscard]] bool check_homogeneity(const HomogeneousPayoff& payoff, std::size_t dim,
                                     std::size_t samples, double tol);

/// b_ij = a_00 - a_i0 - a_0j + a_ij for i, j = 1..n and F(z) = P(1, z).
/// Throws ReductionError if the payoff is not degree-1 homogeneous.
[[nodiscard]] ReducedProblem reduce(const MultiAssetProblem& problem);

/// The reduced coefficient matrix alone; no payoff check.
[[nodiscard]] Matrix reduced_matrix(const CovarianceMatrix& covariance);

/// Smallest eigenvalue >= -1e-10 trace(b). Throws ShapeError for non-square or
/// asymmetric input.
[[nodiscard]] bool certify_psd(const Matrix& b);

/// U(z, t) of the reduced problem for n in {1, 2}: the Gaussian-kernel integral
///   [2 pi tau]^{-n/2} |det B|^{-1/2} int F(y) / (y_1 ... y_n) exp(-a' B^{-1} a / (2 tau)) dy,
///   a_i = ln(z_i / y_i) - b_ii tau / 2,
/// evaluated in whitened log coordinates by adaptive Gauss-Kronrod quadrature.
///
/// The reduced equation carries no discount term, so `r_const` does not enter;
/// discounting comes back through the numeraire (V = S_0 U).
///
/// Throws UnsupportedDimensionError for n > 2 and DegeneracyError when
/// det(B) <= 1e-14.
[[nodiscard]] double quadrature_price(const ReducedProblem& reduced, std::span<const double> z,
                                      double t, double r_const = 0.0);

}  // namespace numeraire
