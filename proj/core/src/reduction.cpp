#include "numeraire/reduction.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <vector>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "linalg.hpp"
#include "numeraire/errors.hpp"
#include "numeraire/integrate.hpp"

namespace numeraire {

namespace {

constexpr std::uint64_t kHomogeneitySeed = 0x6e756d6572616972ULL;

double log_uniform(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    return std::exp(u(gen));
}

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Distance of g(m) from the chord through (a, g(a)) and (b, g(b)), relative to
// the size of the values. Zero on any linear piece.
double chord_defect(double a, double m, double b, double ga, double gm, double gb) {
    const double line = ga + (gb - ga) * (m - a) / (b - a);
    const double scale = std::max({std::abs(ga), std::abs(gm), std::abs(gb), 1e-300});
    return std::abs(gm - line) / scale;
}

// Slope breaks of g on [lo, hi]. The reduced payoffs are piecewise linear in
// the state, so a chord test on a scan flags every cell holding a kink and
// bisection pins it down to rounding. Returns nothing when g looks curved
// everywhere (too many flags), where plain adaptive quadrature is fine.
std::vector<double> find_kinks(const std::function<double(double)>& g, double lo, double hi,
                               std::size_t scan) {
    constexpr double kFlag = 1e-10;
    constexpr std::size_t kMaxKinks = 16;
    std::vector<double> x(scan + 1), v(scan + 1);
    const double step = std::log(hi / lo) / static_cast<double>(scan);
    for (std::size_t i = 0; i <= scan; ++i) {
        x[i] = lo * std::exp(step * static_cast<double>(i));
        v[i] = g(x[i]);
    }
    std::vector<double> kinks;
    for (std::size_t i = 1; i < scan; ++i) {
        if (chord_defect(x[i - 1], x[i], x[i + 1], v[i - 1], v[i], v[i + 1]) <= kFlag) continue;
        double a = x[i - 1], b = x[i + 1];
        double ga = v[i - 1], gb = v[i + 1];
        for (int iter = 0; iter < 200 && b - a > 4e-16 * b; ++iter) {
            const double m = 0.5 * (a + b), gm = g(m);
            const double ql = 0.5 * (a + m), qr = 0.5 * (m + b);
            const double dl = chord_defect(a, ql, m, ga, g(ql), gm);
            const double dr = chord_defect(m, qr, b, gm, g(qr), gb);
            if (dl <= kFlag && dr <= kFlag) {
                a = b = m;
                break;
            }
            if (dl >= dr) {
                b = m;
                gb = gm;
            } else {
                a = m;
                ga = gm;
            }
        }
        const double k = 0.5 * (a + b);
        if (kinks.empty() || k > kinks.back() * (1.0 + 1e-12)) kinks.push_back(k);
        if (kinks.size() > kMaxKinks) return {};
    }
    return kinks;
}

// Integral of w(u) over [lo, hi] split at the given interior points, with
// initial panels spread in proportion to length.
double integrate_pieces(const std::function<double(double)>& w, double lo, double hi,
                        const std::vector<double>& cuts, IntegrationOptions opt) {
    std::vector<double> edges{lo};
    for (double c : cuts)
        if (c > edges.back() && c < hi) edges.push_back(c);
    edges.push_back(hi);
    const std::size_t panels = opt.initial_panels;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double share = (edges[k + 1] - edges[k]) / (hi - lo);
        opt.initial_panels = std::max<std::size_t>(1, static_cast<std::size_t>(share * panels + 0.5));
        total += integrate_adaptive(w, edges[k], edges[k + 1], opt).value;
    }
    return total;
}

}  // namespace

bool check_homogeneity(const HomogeneousPayoff& payoff, std::size_t dim, std::size_t samples,
                       double tol) {
    if (samples == 0) throw DomainError("homogeneity check needs at least one sample");
    if (!(tol > 0.0)) throw DomainError("homogeneity tolerance must be positive");
    if (dim == 0) throw DimensionError("payoff dimension must be positive");
    std::mt19937_64 gen(kHomogeneitySeed);
    std::vector<double> s(dim);
    std::vector<double> scaled(dim);
    bool ok = true;
    for (std::size_t k = 0; k < samples; ++k) {
        for (auto& v : s) v = log_uniform(gen);
        const double a = log_uniform(gen);
        for (std::size_t i = 0; i < dim; ++i) scaled[i] = a * s[i];
        const double base = payoff(s);
        const double moved = payoff(scaled);
        if (!std::isfinite(base) || !std::isfinite(moved)) {
            std::ostringstream os;
            os << "payoff returned a non-finite value at homogeneity sample " << k;
            throw EvaluationError(os.str());
        }
        if (std::abs(moved - a * base) > tol * (1.0 + std::abs(a * base))) ok = false;
    }
    return ok;
}

Matrix reduced_matrix(const CovarianceMatrix& covariance) {
    const std::size_t n = covariance.dimension();
    if (n < 2) throw DimensionError("reduction needs at least two assets");
    Matrix b(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 1; j < n; ++j)
            b(i - 1, j - 1) = covariance(0, 0) - covariance(i, 0) - covariance(0, j) + covariance(i, j);
    return b;
}

ReducedProblem reduce(const MultiAssetProblem& problem) {
    const std::size_t n1 = problem.assets.size();
    if (problem.covariance.dimension() != n1)
        throw DimensionError("covariance dimension differs from asset count");
    if (!check_homogeneity(problem.payoff, n1, 64, 1e-9))
        throw ReductionError("payoff is not positively homogeneous of degree one");
    auto payoff = problem.payoff;
    auto f = [payoff, n1](std::span<const double> z) {
        std::vector<double> s(n1);
        s[0] = 1.0;
        for (std::size_t i = 1; i < n1; ++i) s[i] = z[i - 1];
        return payoff(s);
    };
    return ReducedProblem{reduced_matrix(problem.covariance), std::move(f), problem.maturity};
}

bool certify_psd(const Matrix& b) {
    if (!b.square()) throw ShapeError("matrix must be square");
    if (!detail::symmetric(b)) throw ShapeError("matrix must be symmetric");
    if (b.rows() == 0) return true;
    return detail::min_eigenvalue(b) >= -1e-10 * b.trace();
}

double quadrature_price(const ReducedProblem& reduced, std::span<const double> z, double t,
                        double /*r_const*/) {
    const std::size_t n = reduced.dimension();
    if (n == 0 || n > 2)
        throw UnsupportedDimensionError("quadrature evaluator supports dimension 1 or 2");
    if (z.size() != n) throw DimensionError("state vector size differs from problem dimension");
    for (double v : z)
        if (!(v > 0.0)) throw DomainError("reduced state must be positive");
    if (!(t >= 0.0 && t < reduced.maturity)) throw DomainError("need 0 <= t < maturity");
    const Matrix& b = reduced.b_matrix;
    const double det = n == 1 ? b(0, 0) : b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
    if (!(det > 1e-14)) throw DegeneracyError("reduced coefficient matrix is singular");

    const double tau = reduced.maturity - t;
    const double sqrt_tau = std::sqrt(tau);

    if (n == 1) {
        const double sd = std::sqrt(b(0, 0)) * sqrt_tau;
        const double mean = std::log(z[0]) - 0.5 * b(0, 0) * tau;
        auto payoff = [&](double y) { return reduced.payoff_f(std::span<const double>(&y, 1)); };
        auto integrand = [&](double u) {
            const double w = std_normal_pdf(u);
            if (w == 0.0) return 0.0;
            return payoff(std::exp(mean + sd * u)) * w;
        };
        constexpr double kReach = 38.0;
        std::vector<double> cuts;
        for (double y : find_kinks(payoff, std::exp(mean - sd * kReach), std::exp(mean + sd * kReach), 4096))
            cuts.push_back((std::log(y) - mean) / sd);
        IntegrationOptions opt;
        opt.rel_tol = 1e-12;
        opt.initial_panels = 152;
        opt.max_intervals = 20000;
        return integrate_pieces(integrand, -kReach, kReach, cuts, opt);
    }

    // Whitening: ln y = m + sqrt(tau) L u with L L' = B.
    const double l11 = std::sqrt(b(0, 0));
    const double l21 = b(1, 0) / l11;
    const double l22 = std::sqrt(std::max(b(1, 1) - l21 * l21, 0.0));
    const double m1 = std::log(z[0]) - 0.5 * b(0, 0) * tau;
    const double m2 = std::log(z[1]) - 0.5 * b(1, 1) * tau;

    IntegrationOptions inner;
    inner.rel_tol = 1e-11;
    inner.abs_tol = 1e-300;
    inner.initial_panels = 40;
    inner.max_intervals = 4000;
    IntegrationOptions outer = inner;
    outer.rel_tol = 1e-10;

    auto outer_integrand = [&](double u1) {
        const double w1 = std_normal_pdf(u1);
        if (w1 == 0.0) return 0.0;
        const double y1 = std::exp(m1 + sqrt_tau * l11 * u1);
        const double base2 = m2 + sqrt_tau * l21 * u1;
        const double sd2 = sqrt_tau * l22;
        auto payoff = [&](double y2) { return reduced.payoff_f(std::array<double, 2>{y1, y2}); };
        auto inner_integrand = [&](double u2) {
            const double w2 = std_normal_pdf(u2);
            if (w2 == 0.0) return 0.0;
            return payoff(std::exp(base2 + sd2 * u2)) * w2;
        };
        std::vector<double> cuts;
        if (sd2 > 0.0)
            for (double y : find_kinks(payoff, std::exp(base2 - sd2 * 20.0), std::exp(base2 + sd2 * 20.0), 256))
                cuts.push_back((std::log(y) - base2) / sd2);
        return w1 * integrate_pieces(inner_integrand, -20.0, 20.0, cuts, inner);
    };
    return integrate_adaptive(outer_integrand, -20.0, 20.0, outer).value;
}

}  // namespace numeraire
