#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace numeraire {

/// One-dimensional terminal value problem
///   U_t + 1/2 d(t) z^2 U_zz + mu(t) z U_z - r(t) U = 0,  U(z, T) = terminal(z).
struct Pde1Spec {
    std::function<double(double)> diffusion;
    std::function<double(double)> drift = [](double) { return 0.0; };
    std::function<double(double)> discount = [](double) { return 0.0; };
    std::function<double(double)> terminal;
    double maturity = 1.0;
    /// Valuation point; the log grid is centred here.
    double center = 1.0;
    /// Times in (0, maturity) where coefficients jump. The time grid puts a node on
    /// each and restarts with damped steps there.
    std::vector<double> breakpoints;
};

/// Diffusion coefficients of 1/2 [a11 x^2 V_xx + 2 a12 x y V_xy + a22 y^2 V_yy].
struct Diffusion2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;
};

/// Two-dimensional terminal value problem
///   V_t + 1/2 [a11 x^2 V_xx + 2 a12 x y V_xy + a22 y^2 V_yy]
///       + mu1 x V_x + mu2 y V_y - r V = 0,   V(x, y, T) = terminal(x, y).
struct Pde2Spec {
    std::function<Diffusion2(double)> diffusion;
    /// (t, x, y) -> coefficient of x V_x, y V_y, and -V.
    std::function<double(double, double, double)> drift_x = [](double, double, double) { return 0.0; };
    std::function<double(double, double, double)> drift_y = [](double, double, double) { return 0.0; };
    std::function<double(double, double, double)> discount = [](double, double, double) { return 0.0; };
    /// none: drifts and discount are evaluated once per step at the centre;
    /// y_only: once per y node; full: at every node.
    enum class Dependence { none, y_only, full };
    Dependence state_dependence = Dependence::none;
    std::function<double(double, double)> terminal;
    double maturity = 1.0;
    std::array<double, 2> center = {1.0, 1.0};
    std::vector<double> breakpoints;
};

struct GridSpec {
    std::size_t nodes_per_axis = 400;
    std::size_t time_steps = 200;
    /// Log-space half-width of the grid in standard deviations of the state.
    double span_sigmas = 6.0;
};

/// Nodes of a log-uniform axis in the original variable.
struct Axis {
    std::vector<double> nodes;
    double log_step = 0.0;

    [[nodiscard]] double lower() const { return nodes.front(); }
    [[nodiscard]] double upper() const { return nodes.back(); }
};

/// Solution of solve_1d at every time level; interpolates with 4-point Lagrange
/// in z and linearly in t.
class Solution1d {
public:
    Solution1d(Axis axis, std::vector<double> times, std::vector<std::vector<double>> values);

    /// Throws ExtrapolationError outside the grid or the time span.
    double operator()(double z, double t) const;

    [[nodiscard]] const Axis& axis() const noexcept { return axis_; }
    [[nodiscard]] std::span<const double> times() const noexcept { return times_; }
    /// Nodal values at time level k (times()[k]).
    [[nodiscard]] std::span<const double> level(std::size_t k) const { return values_[k]; }

private:
    Axis axis_;
    std::vector<double> times_;
    std::vector<std::vector<double>> values_;
};

/// Solution of solve_2d at t = 0 on the tensor grid; bicubic Lagrange interpolation.
class Solution2d {
public:
    Solution2d(Axis x, Axis y, std::vector<double> values);

    /// Only t = 0 is stored; other times raise DomainError.
    double operator()(double x, double y, double t = 0.0) const;

    [[nodiscard]] const Axis& x_axis() const noexcept { return x_; }
    [[nodiscard]] const Axis& y_axis() const noexcept { return y_; }
    [[nodiscard]] double node(std::size_t i, std::size_t j) const {
        return values_[i * y_.nodes.size() + j];
    }

private:
    Axis x_;
    Axis y_;
    std::vector<double> values_;
};

/// Crank-Nicolson in time (coefficients frozen at each step's midpoint) with
/// Rannacher restarts, three-point stencils in z on a log-uniform grid, and a
/// zero-gamma far field.
[[nodiscard]] Solution1d solve_1d(const Pde1Spec& spec, const GridSpec& grid);

/// Craig-Sneyd ADI: mixed derivative explicit, one implicit sweep per axis,
/// Douglas steps at every restart. Throws StabilityError if a12^2 > a11 a22 at
/// any time node.
[[nodiscard]] Solution2d solve_2d(const Pde2Spec& spec, const GridSpec& grid);

/// One-dimensional problem for U = V / s_k, z = s_o / s_k, where k is the
/// numeraire axis and o the other one:
///   diffusion a11 - 2 a12 + a22, drift mu_o - mu_k, discount r - mu_k,
///   terminal F(z) = P with s_k = 1 and s_o = z.
/// Throws ReductionError if the terminal is not homogeneous or the reduced
/// coefficients vary with the state.
[[nodiscard]] Pde1Spec reduce_pde(const Pde2Spec& spec, std::size_t numeraire_axis);

/// max over probes of |V_2d(x, y, 0) - s_k U_1d(s_o / s_k, 0)| / |V_2d(x, y, 0)|.
[[nodiscard]] double reduction_gap(const Pde2Spec& spec, std::size_t numeraire_axis,
                                   const GridSpec& grid,
                                   std::span<const std::array<double, 2>> probes);

}  // namespace numeraire
