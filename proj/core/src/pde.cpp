#include "numeraire/pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "numeraire/errors.hpp"
#include "numeraire/integrate.hpp"
#include "numeraire/model.hpp"
#include "numeraire/reduction.hpp"

namespace numeraire {

namespace {

constexpr double kMinHalfWidth = 0.05;
constexpr double kKinkTol = 1e-10;
constexpr double kPsdTol = 1e-12;

// Three-point weights on a log-uniform grid. On such a grid z D_z and z^2 D_zz
// have the same weights at every node: with a = 1 - e^{-h}, b = e^h - 1 the
// neighbours sit at z (1 - a) and z (1 + b).
struct Stencil {
    double d1m, d10, d1p;  // z U_z
    double d2m, d20, d2p;  // z^2 U_zz
    double lo_gap, hi_gap; // a and b

    explicit Stencil(double h) {
        const double a = -std::expm1(-h);
        const double b = std::expm1(h);
        lo_gap = a;
        hi_gap = b;
        d1m = -b / (a * (a + b));
        d10 = (b - a) / (a * b);
        d1p = a / (b * (a + b));
        d2m = 2.0 / (a * (a + b));
        d20 = -2.0 / (a * b);
        d2p = 2.0 / (b * (a + b));
    }
};

struct Tridiag {
    std::vector<double> lo, di, up;
    explicit Tridiag(std::size_t n) : lo(n), di(n), up(n) {}
};

// Solves in place; rhs becomes the solution. scratch has the same size.
void thomas(const Tridiag& m, std::span<double> rhs, std::vector<double>& scratch) {
    const std::size_t n = rhs.size();
    scratch.resize(n);
    double beta = m.di[0];
    rhs[0] /= beta;
    for (std::size_t i = 1; i < n; ++i) {
        scratch[i] = m.up[i - 1] / beta;
        beta = m.di[i] - m.lo[i] * scratch[i];
        rhs[i] = (rhs[i] - m.lo[i] * rhs[i - 1]) / beta;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

Axis make_axis(double center, double half_width, std::size_t n) {
    Axis axis;
    axis.log_step = 2.0 * half_width / static_cast<double>(n - 1);
    const std::size_t mid = n / 2;
    const double lc = std::log(center);
    axis.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        axis.nodes[i] = std::exp(lc + (static_cast<double>(i) - static_cast<double>(mid)) * axis.log_step);
    axis.nodes[mid] = center;
    return axis;
}

double half_width(double variance, double log_drift, double span) {
    return std::max(span * std::sqrt(std::max(variance, 0.0)) + std::abs(log_drift), kMinHalfWidth);
}

// Ascending time nodes from 0 to maturity with a node on each breakpoint, and
// the indices where a segment ends (terminal plus breakpoints).
struct TimeGrid {
    std::vector<double> times;
    std::vector<bool> restart;  // restart[k]: the step from times[k] down to times[k-1] is damped
};

TimeGrid make_times(double maturity, const std::vector<double>& breakpoints, std::size_t steps) {
    if (!(maturity > 0.0) || !std::isfinite(maturity)) throw DomainError("maturity must be positive");
    std::vector<double> cuts{0.0};
    for (double b : breakpoints)
        if (b > 0.0 && b < maturity) cuts.push_back(b);
    cuts.push_back(maturity);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    TimeGrid g;
    g.times.push_back(0.0);
    g.restart.push_back(false);
    for (std::size_t s = 1; s < cuts.size(); ++s) {
        const double len = cuts[s] - cuts[s - 1];
        const auto n = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::llround(static_cast<double>(steps) * len / maturity)));
        for (std::size_t k = 1; k <= n; ++k) {
            g.times.push_back(k == n ? cuts[s] : cuts[s - 1] + len * static_cast<double>(k) / static_cast<double>(n));
            g.restart.push_back(k == n);
        }
    }
    return g;
}

// 4-point Lagrange interpolation on nodes; stencil index chosen around x.
double lagrange4(std::span<const double> nodes, std::size_t first,
                 const std::function<double(std::size_t)>& value, double x) {
    double sum = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        double w = 1.0;
        for (std::size_t b = 0; b < 4; ++b)
            if (b != a) w *= (x - nodes[first + b]) / (nodes[first + a] - nodes[first + b]);
        sum += w * value(first + a);
    }
    return sum;
}

std::size_t stencil_start(std::span<const double> nodes, double x) {
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    auto i = static_cast<std::ptrdiff_t>(it - nodes.begin()) - 2;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(nodes.size()) - 4));
}

std::array<double, 4> lagrange_weights(std::span<const double> nodes, std::size_t first, double x) {
    std::array<double, 4> w{};
    for (std::size_t a = 0; a < 4; ++a) {
        w[a] = 1.0;
        for (std::size_t b = 0; b < 4; ++b)
            if (b != a) w[a] *= (x - nodes[first + b]) / (nodes[first + a] - nodes[first + b]);
    }
    return w;
}

bool kinked(double fm, double f0, double fp, double a, double b) {
    // compare with the chord through the neighbours at relative offsets -a, +b
    const double chord = (b * fm + a * fp) / (a + b);
    return std::abs(f0 - chord) > kKinkTol * (std::abs(fm) + std::abs(f0) + std::abs(fp)) + 1e-300;
}

double cell_average_1d(const std::function<double(double)>& f, double lo, double hi) {
    IntegrationOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-15 * (hi - lo);
    opt.initial_panels = 4;
    opt.max_intervals = 400;
    return integrate_adaptive(f, lo, hi, opt).value / (hi - lo);
}

void require_grid(const GridSpec& grid) {
    if (grid.nodes_per_axis < 16) throw DomainError("nodes_per_axis must be at least 16");
    if (grid.time_steps < 8) throw DomainError("time_steps must be at least 8");
    if (!(grid.span_sigmas > 0.0)) throw DomainError("span_sigmas must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------

Solution1d::Solution1d(Axis axis, std::vector<double> times, std::vector<std::vector<double>> values)
    : axis_(std::move(axis)), times_(std::move(times)), values_(std::move(values)) {}

double Solution1d::operator()(double z, double t) const {
    const auto& n = axis_.nodes;
    if (!(z >= n.front() && z <= n.back()))
        throw ExtrapolationError("z = " + std::to_string(z) + " outside grid [" +
                                 std::to_string(n.front()) + ", " + std::to_string(n.back()) + "]");
    if (!(t >= times_.front() && t <= times_.back()))
        throw ExtrapolationError("t = " + std::to_string(t) + " outside solved time span");
    const std::size_t first = stencil_start(n, z);
    auto at_level = [&](std::size_t k) {
        const auto& v = values_[k];
        return lagrange4(n, first, [&](std::size_t i) { return v[i]; }, z);
    };
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    const auto k = static_cast<std::size_t>(it - times_.begin());
    if (times_[k] == t) return at_level(k);
    const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
    return (1.0 - w) * at_level(k - 1) + w * at_level(k);
}

Solution2d::Solution2d(Axis x, Axis y, std::vector<double> values)
    : x_(std::move(x)), y_(std::move(y)), values_(std::move(values)) {}

double Solution2d::operator()(double x, double y, double t) const {
    if (t != 0.0) throw DomainError("two-dimensional solutions are stored at t = 0 only");
    const auto& xn = x_.nodes;
    const auto& yn = y_.nodes;
    if (!(x >= xn.front() && x <= xn.back() && y >= yn.front() && y <= yn.back()))
        throw ExtrapolationError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                                 ") outside grid");
    const std::size_t fi = stencil_start(xn, x);
    const std::size_t fj = stencil_start(yn, y);
    const auto wx = lagrange_weights(xn, fi, x);
    const auto wy = lagrange_weights(yn, fj, y);
    double sum = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < 4; ++b) row += wy[b] * node(fi + a, fj + b);
        sum += wx[a] * row;
    }
    return sum;
}

// ---------------------------------------------------------------------------

Solution1d solve_1d(const Pde1Spec& spec, const GridSpec& grid) {
    require_grid(grid);
    if (!spec.diffusion || !spec.terminal) throw DomainError("diffusion and terminal are required");
    if (!(spec.center > 0.0)) throw DomainError("grid centre must be positive");
    const TimeGrid tg = make_times(spec.maturity, spec.breakpoints, grid.time_steps);
    const auto& times = tg.times;
    const std::size_t nt = times.size();

    double variance = 0.0;
    double log_drift = 0.0;
    for (std::size_t k = 1; k < nt; ++k) {
        const double dt = times[k] - times[k - 1];
        const double tm = 0.5 * (times[k] + times[k - 1]);
        const double d = spec.diffusion(tm);
        if (!(d >= 0.0)) throw StabilityError("negative diffusion at t = " + std::to_string(tm));
        variance += d * dt;
        log_drift += (spec.drift(tm) - 0.5 * d) * dt;
    }
    const std::size_t n = grid.nodes_per_axis;
    Axis axis = make_axis(spec.center, half_width(variance, log_drift, grid.span_sigmas), n);
    const Stencil st(axis.log_step);
    const auto& z = axis.nodes;

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = spec.terminal(z[i]);
    std::vector<double> smoothed = u;
    const double half = 0.5 * axis.log_step;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (kinked(u[i - 1], u[i], u[i + 1], st.lo_gap, st.hi_gap))
            smoothed[i] = cell_average_1d(spec.terminal, z[i] * std::exp(-half), z[i] * std::exp(half));
    }
    for (double v : smoothed)
        if (!std::isfinite(v)) throw EvaluationError("terminal payoff is not finite on the grid");
    u = std::move(smoothed);

    std::vector<std::vector<double>> levels(nt);
    levels[nt - 1] = u;

    Tridiag lhs(n);
    std::vector<double> rhs(n), scratch(n);

    // One theta-step of length dt with coefficients (d, mu, r).
    auto step = [&](double dt, double theta, double d, double mu, double r) {
        Tridiag op(n);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            op.lo[i] = 0.5 * d * st.d2m + mu * st.d1m;
            op.di[i] = 0.5 * d * st.d20 + mu * st.d10 - r;
            op.up[i] = 0.5 * d * st.d2p + mu * st.d1p;
        }
        op.di[0] = -mu / st.hi_gap - r;
        op.up[0] = mu / st.hi_gap;
        op.lo[n - 1] = -mu / st.lo_gap;
        op.di[n - 1] = mu / st.lo_gap - r;
        op.lo[0] = 0.0;
        op.up[n - 1] = 0.0;

        const double ex = (1.0 - theta) * dt;
        for (std::size_t i = 0; i < n; ++i) {
            double lu = op.di[i] * u[i];
            if (i > 0) lu += op.lo[i] * u[i - 1];
            if (i + 1 < n) lu += op.up[i] * u[i + 1];
            rhs[i] = u[i] + ex * lu;
            lhs.lo[i] = -theta * dt * op.lo[i];
            lhs.di[i] = 1.0 - theta * dt * op.di[i];
            lhs.up[i] = -theta * dt * op.up[i];
        }
        thomas(lhs, rhs, scratch);
        u.swap(rhs);
    };

    for (std::size_t k = nt - 1; k > 0; --k) {
        const double t1 = times[k];
        const double t0 = times[k - 1];
        const double dt = t1 - t0;
        if (tg.restart[k]) {
            for (int h = 0; h < 2; ++h) {
                const double tm = t1 - dt * (0.25 + 0.5 * h);
                step(0.5 * dt, 1.0, spec.diffusion(tm), spec.drift(tm), spec.discount(tm));
            }
        } else {
            const double tm = 0.5 * (t0 + t1);
            step(dt, 0.5, spec.diffusion(tm), spec.drift(tm), spec.discount(tm));
        }
        levels[k - 1] = u;
    }
    return Solution1d(std::move(axis), times, std::move(levels));
}

// ---------------------------------------------------------------------------

namespace {

// Tridiagonal coefficients of one axis operator, either shared by every line
// (state-independent coefficients) or stored per node.
struct AxisOperator {
    std::vector<double> lo, di, up;
    bool shared = true;
};

class Adi {
public:
    Adi(const Pde2Spec& spec, Axis x, Axis y)
        : spec_(spec), x_(std::move(x)), y_(std::move(y)), sx_(x_.log_step), sy_(y_.log_step),
          nx_(x_.nodes.size()), ny_(y_.nodes.size()) {}

    void set_coefficients(double t) {
        a12_ = spec_.diffusion(t).a12;
        const Diffusion2 a = spec_.diffusion(t);
        using D = Pde2Spec::Dependence;
        if (spec_.state_dependence == D::none) {
            const double cx = spec_.center[0], cy = spec_.center[1];
            const double mx = spec_.drift_x(t, cx, cy), my = spec_.drift_y(t, cx, cy);
            const double r = spec_.discount(t, cx, cy);
            build(op_x_, nx_, 1, sx_, a.a11, [&](std::size_t) { return std::pair{mx, r}; });
            build(op_y_, ny_, 1, sy_, a.a22, [&](std::size_t) { return std::pair{my, r}; });
            return;
        }
        const std::size_t n = nx_ * ny_;
        mu_x_.resize(n);
        mu_y_.resize(n);
        r_.resize(n);
        const bool y_only = spec_.state_dependence == D::y_only;
        for (std::size_t i = 0; i < nx_; ++i)
            for (std::size_t j = 0; j < ny_; ++j) {
                const std::size_t k = i * ny_ + j;
                if (y_only && i > 0) {
                    mu_x_[k] = mu_x_[j];
                    mu_y_[k] = mu_y_[j];
                    r_[k] = r_[j];
                    continue;
                }
                const double xv = y_only ? spec_.center[0] : x_.nodes[i], yv = y_.nodes[j];
                mu_x_[k] = spec_.drift_x(t, xv, yv);
                mu_y_[k] = spec_.drift_y(t, xv, yv);
                r_[k] = spec_.discount(t, xv, yv);
            }
        // x-operator stored at [i * ny + j] with line position i; y-operator likewise with position j.
        build(op_x_, nx_, ny_, sx_, a.a11, [&](std::size_t k) { return std::pair{mu_x_[k], r_[k]}; });
        build(op_y_, ny_, nx_, sy_, a.a22, [&](std::size_t k) { return std::pair{mu_y_[k], r_[k]}; });
    }

    // out = A_0 v (mixed term, zero on the boundary ring)
    void apply_mixed(const std::vector<double>& v, std::vector<double>& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        if (a12_ == 0.0) return;
        const std::array<double, 3> wx{sx_.d1m, sx_.d10, sx_.d1p};
        const std::array<double, 3> wy{sy_.d1m, sy_.d10, sy_.d1p};
        for (std::size_t i = 1; i + 1 < nx_; ++i)
            for (std::size_t j = 1; j + 1 < ny_; ++j) {
                double s = 0.0;
                for (std::size_t p = 0; p < 3; ++p) {
                    const double* row = &v[(i + p - 1) * ny_ + j - 1];
                    s += wx[p] * (wy[0] * row[0] + wy[1] * row[1] + wy[2] * row[2]);
                }
                out[i * ny_ + j] = a12_ * s;
            }
    }

    // out = A_1 v
    void apply_x(const std::vector<double>& v, std::vector<double>& out) const {
        for (std::size_t i = 0; i < nx_; ++i)
            for (std::size_t j = 0; j < ny_; ++j) {
                const std::size_t k = i * ny_ + j;
                const std::size_t c = op_x_.shared ? i : k;
                double s = op_x_.di[c] * v[k];
                if (i > 0) s += op_x_.lo[c] * v[k - ny_];
                if (i + 1 < nx_) s += op_x_.up[c] * v[k + ny_];
                out[k] = s;
            }
    }

    // out = A_2 v
    void apply_y(const std::vector<double>& v, std::vector<double>& out) const {
        for (std::size_t i = 0; i < nx_; ++i)
            for (std::size_t j = 0; j < ny_; ++j) {
                const std::size_t k = i * ny_ + j;
                const std::size_t c = op_y_.shared ? j : k;
                double s = op_y_.di[c] * v[k];
                if (j > 0) s += op_y_.lo[c] * v[k - 1];
                if (j + 1 < ny_) s += op_y_.up[c] * v[k + 1];
                out[k] = s;
            }
    }

    // (I - c A_1) out = rhs, all x-lines swept together so memory is walked row by row.
    void solve_x(double c, std::vector<double>& rhs) {
        cp_.resize(nx_ * ny_);
        beta_.resize(ny_);
        auto at = [&](const std::vector<double>& a, std::size_t i, std::size_t k) {
            return a[op_x_.shared ? i : k];
        };
        for (std::size_t j = 0; j < ny_; ++j) {
            beta_[j] = 1.0 - c * at(op_x_.di, 0, j);
            rhs[j] /= beta_[j];
        }
        for (std::size_t i = 1; i < nx_; ++i)
            for (std::size_t j = 0; j < ny_; ++j) {
                const std::size_t k = i * ny_ + j;
                const double lo = -c * at(op_x_.lo, i, k);
                cp_[k] = -c * at(op_x_.up, i - 1, k - ny_) / beta_[j];
                beta_[j] = 1.0 - c * at(op_x_.di, i, k) - lo * cp_[k];
                rhs[k] = (rhs[k] - lo * rhs[k - ny_]) / beta_[j];
            }
        for (std::size_t i = nx_ - 1; i-- > 0;)
            for (std::size_t j = 0; j < ny_; ++j) {
                const std::size_t k = i * ny_ + j;
                rhs[k] -= cp_[k + ny_] * rhs[k + ny_];
            }
    }

    // (I - c A_2) out = rhs, one contiguous y-line at a time.
    void solve_y(double c, std::vector<double>& rhs) {
        Tridiag m(ny_);
        std::vector<double> scratch(ny_);
        for (std::size_t i = 0; i < nx_; ++i) {
            const std::size_t base = op_y_.shared ? 0 : i * ny_;
            for (std::size_t j = 0; j < ny_; ++j) {
                m.lo[j] = -c * op_y_.lo[base + j];
                m.di[j] = 1.0 - c * op_y_.di[base + j];
                m.up[j] = -c * op_y_.up[base + j];
            }
            thomas(m, std::span<double>(rhs.data() + i * ny_, ny_), scratch);
        }
    }

    // Advances u backward by dt. Craig-Sneyd (theta = 1/2) or Douglas (theta = 1).
    void step(std::vector<double>& u, double dt, double theta, bool craig_sneyd) {
        const std::size_t n = u.size();
        a0u_.resize(n);
        a1u_.resize(n);
        a2u_.resize(n);
        y_buf_.resize(n);
        y0_.resize(n);
        tmp_.resize(n);
        apply_mixed(u, a0u_);
        apply_x(u, a1u_);
        apply_y(u, a2u_);
        for (std::size_t k = 0; k < n; ++k) y0_[k] = u[k] + dt * (a0u_[k] + a1u_[k] + a2u_[k]);
        const double c = theta * dt;
        auto sweeps = [&](std::vector<double>& v) {
            for (std::size_t k = 0; k < n; ++k) v[k] -= c * a1u_[k];
            solve_x(c, v);
            for (std::size_t k = 0; k < n; ++k) v[k] -= c * a2u_[k];
            solve_y(c, v);
        };
        y_buf_ = y0_;
        sweeps(y_buf_);
        if (craig_sneyd) {
            apply_mixed(y_buf_, tmp_);
            for (std::size_t k = 0; k < n; ++k) y_buf_[k] = y0_[k] + 0.5 * dt * (tmp_[k] - a0u_[k]);
            sweeps(y_buf_);
        }
        u.swap(y_buf_);
    }

    [[nodiscard]] const Axis& x() const { return x_; }
    [[nodiscard]] const Axis& y() const { return y_; }
    [[nodiscard]] const Stencil& sx() const { return sx_; }
    [[nodiscard]] const Stencil& sy() const { return sy_; }

private:
    // Operator along an axis of n nodes for `lines` lines. coef(k) gives (mu, r)
    // at storage index k; the discount is split evenly between the two axes.
    template <class Coef>
    void build(AxisOperator& op, std::size_t n, std::size_t lines, const Stencil& s, double d,
               const Coef& coef) {
        op.shared = lines == 1;
        const std::size_t total = n * lines;
        op.lo.resize(total);
        op.di.resize(total);
        op.up.resize(total);
        const bool along_x = &op == &op_x_;
        for (std::size_t line = 0; line < lines; ++line)
            for (std::size_t m = 0; m < n; ++m) {
                // storage index: row-major node index for per-node operators
                const std::size_t k = op.shared ? m : (along_x ? m * ny_ + line : line * ny_ + m);
                const auto [mu, rr] = coef(k);
                const double r = 0.5 * rr;
                if (m == 0) {
                    op.lo[k] = 0.0;
                    op.di[k] = -mu / s.hi_gap - r;
                    op.up[k] = mu / s.hi_gap;
                } else if (m + 1 == n) {
                    op.lo[k] = -mu / s.lo_gap;
                    op.di[k] = mu / s.lo_gap - r;
                    op.up[k] = 0.0;
                } else {
                    op.lo[k] = 0.5 * d * s.d2m + mu * s.d1m;
                    op.di[k] = 0.5 * d * s.d20 + mu * s.d10 - r;
                    op.up[k] = 0.5 * d * s.d2p + mu * s.d1p;
                }
            }
    }

    const Pde2Spec& spec_;
    Axis x_, y_;
    Stencil sx_, sy_;
    std::size_t nx_, ny_;
    double a12_ = 0.0;
    std::vector<double> mu_x_, mu_y_, r_;
    AxisOperator op_x_, op_y_;
    std::vector<double> a0u_, a1u_, a2u_, y_buf_, y0_, tmp_, cp_, beta_;
};

void require_psd(const Diffusion2& a, double t) {
    if (!(a.a11 >= 0.0 && a.a22 >= 0.0) ||
        a.a12 * a.a12 > a.a11 * a.a22 * (1.0 + kPsdTol) + 1e-300)
        throw StabilityError("diffusion matrix is not positive semidefinite at t = " + std::to_string(t));
}

}  // namespace

Solution2d solve_2d(const Pde2Spec& spec, const GridSpec& grid) {
    require_grid(grid);
    if (!spec.diffusion || !spec.terminal) throw DomainError("diffusion and terminal are required");
    if (!(spec.center[0] > 0.0 && spec.center[1] > 0.0)) throw DomainError("grid centre must be positive");
    const TimeGrid tg = make_times(spec.maturity, spec.breakpoints, grid.time_steps);
    const auto& times = tg.times;
    const std::size_t nt = times.size();

    // Check every node and every step midpoint before doing any work.
    for (std::size_t k = 0; k < nt; ++k) require_psd(spec.diffusion(times[k]), times[k]);
    double vx = 0.0, vy = 0.0, gx = 0.0, gy = 0.0;
    const double cx = spec.center[0], cy = spec.center[1];
    for (std::size_t k = 1; k < nt; ++k) {
        const double dt = times[k] - times[k - 1];
        const double tm = 0.5 * (times[k] + times[k - 1]);
        const Diffusion2 a = spec.diffusion(tm);
        require_psd(a, tm);
        vx += a.a11 * dt;
        vy += a.a22 * dt;
        gx += (spec.drift_x(tm, cx, cy) - 0.5 * a.a11) * dt;
        gy += (spec.drift_y(tm, cx, cy) - 0.5 * a.a22) * dt;
    }
    const std::size_t n = grid.nodes_per_axis;
    Adi adi(spec, make_axis(cx, half_width(vx, gx, grid.span_sigmas), n),
            make_axis(cy, half_width(vy, gy, grid.span_sigmas), n));
    const auto& xn = adi.x().nodes;
    const auto& yn = adi.y().nodes;

    std::vector<double> u(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) u[i * n + j] = spec.terminal(xn[i], yn[j]);
    std::vector<double> smoothed = u;
    const double hx = 0.5 * adi.x().log_step, hy = 0.5 * adi.y().log_step;
    for (std::size_t i = 1; i + 1 < n; ++i)
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const std::size_t k = i * n + j;
            const bool kink = kinked(u[k - n], u[k], u[k + n], adi.sx().lo_gap, adi.sx().hi_gap) ||
                              kinked(u[k - 1], u[k], u[k + 1], adi.sy().lo_gap, adi.sy().hi_gap);
            if (!kink) continue;
            const double x0 = xn[i] * std::exp(-hx), x1 = xn[i] * std::exp(hx);
            const double y0 = yn[j] * std::exp(-hy), y1 = yn[j] * std::exp(hy);
            auto inner = [&](double xv) {
                return cell_average_1d([&](double yv) { return spec.terminal(xv, yv); }, y0, y1);
            };
            smoothed[k] = cell_average_1d(inner, x0, x1);
        }
    for (double v : smoothed)
        if (!std::isfinite(v)) throw EvaluationError("terminal payoff is not finite on the grid");
    u = std::move(smoothed);

    for (std::size_t k = nt - 1; k > 0; --k) {
        const double t1 = times[k];
        const double dt = t1 - times[k - 1];
        if (tg.restart[k]) {
            for (int h = 0; h < 2; ++h) {
                adi.set_coefficients(t1 - dt * (0.25 + 0.5 * h));
                adi.step(u, 0.5 * dt, 1.0, false);
            }
        } else {
            adi.set_coefficients(t1 - 0.5 * dt);
            adi.step(u, dt, 0.5, true);
        }
    }
    return Solution2d(adi.x(), adi.y(), std::move(u));
}

// ---------------------------------------------------------------------------

Pde1Spec reduce_pde(const Pde2Spec& spec, std::size_t numeraire_axis) {
    if (numeraire_axis > 1) throw DomainError("numeraire axis must be 0 or 1");
    const std::size_t k = numeraire_axis;
    const std::size_t o = 1 - k;

    // Samples are drawn around 1; rescale them to the problem's own state scale.
    const auto c = spec.center;
    HomogeneousPayoff payoff{[&spec, c](std::span<const double> s) {
        return spec.terminal(c[0] * s[0], c[1] * s[1]);
    }};
    if (!check_homogeneity(payoff, 2, 64, 1e-9))
        throw ReductionError("terminal condition is not homogeneous of degree one");

    // Reduced drift and discount must not depend on the state.
    auto coef = [&spec, k, o](double t, double xo, double xk) {
        std::array<double, 2> s{};
        s[o] = xo;
        s[k] = xk;
        const double mu_x = spec.drift_x(t, s[0], s[1]);
        const double mu_y = spec.drift_y(t, s[0], s[1]);
        const double mk = k == 0 ? mu_x : mu_y;
        const double mo = k == 0 ? mu_y : mu_x;
        return std::array<double, 2>{mo - mk, spec.discount(t, s[0], s[1]) - mk};
    };
    const double co = spec.center[o], ck = spec.center[k];
    for (double t : {0.0, 0.37 * spec.maturity, 0.81 * spec.maturity}) {
        const auto ref = coef(t, co, ck);
        for (auto [fo, fk] : {std::pair{1.1, 1.0}, {1.0, 1.1}, {0.9, 0.95}}) {
            const auto c = coef(t, co * fo, ck * fk);
            for (int q = 0; q < 2; ++q)
                if (std::abs(c[q] - ref[q]) > 1e-12 * (1.0 + std::abs(ref[q])))
                    throw ReductionError("reduced coefficients depend on the state");
        }
    }

    Pde1Spec r;
    r.diffusion = [d = spec.diffusion](double t) {
        const Diffusion2 a = d(t);
        return std::max(a.a11 - 2.0 * a.a12 + a.a22, 0.0);
    };
    r.drift = [coef, co, ck](double t) { return coef(t, co, ck)[0]; };
    r.discount = [coef, co, ck](double t) { return coef(t, co, ck)[1]; };
    r.terminal = [term = spec.terminal, o](double z) {
        return o == 0 ? term(z, 1.0) : term(1.0, z);
    };
    r.maturity = spec.maturity;
    r.center = co / ck;
    r.breakpoints = spec.breakpoints;
    return r;
}

double reduction_gap(const Pde2Spec& spec, std::size_t numeraire_axis, const GridSpec& grid,
                     std::span<const std::array<double, 2>> probes) {
    const Pde1Spec reduced = reduce_pde(spec, numeraire_axis);
    const Solution2d full = solve_2d(spec, grid);
    const Solution1d small = solve_1d(reduced, grid);
    const std::size_t k = numeraire_axis;
    double gap = 0.0;
    for (const auto& p : probes) {
        const double v2 = full(p[0], p[1], 0.0);
        const double v1 = p[k] * small(p[1 - k] / p[k], 0.0);
        gap = std::max(gap, std::abs(v2 - v1) / std::max(std::abs(v2), 1e-300));
    }
    return gap;
}

}  // namespace numeraire
