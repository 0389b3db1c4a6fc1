#include "numeraire/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace numeraire {

namespace {

// Kronrod 15-point abscissae (positive half) and weights; Gauss 7-point weights
// for the odd-indexed abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

// Error estimate as in QUADPACK's qk15: the raw Kronrod-Gauss difference is
// scaled against the integrand's spread over the interval, since on its own it
// can vanish by accident next to a kink.
Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 15> fv{};
    fv[7] = f(centre);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[j] = f(centre - dx);
        fv[14 - j] = f(centre + dx);
    }
    double kronrod = fv[7] * kWgk[7];
    double gauss = fv[7] * kWg[3];
    double abs_sum = std::abs(fv[7]) * kWgk[7];
    for (std::size_t j = 0; j < 7; ++j) {
        const double sum = fv[j] + fv[14 - j];
        kronrod += kWgk[j] * sum;
        abs_sum += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * kronrod;
    double spread = kWgk[7] * std::abs(fv[7] - mean);
    for (std::size_t j = 0; j < 7; ++j)
        spread += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));

    const double h = std::abs(half);
    double error = std::abs((kronrod - gauss) * half);
    spread *= h;
    if (spread != 0.0 && error != 0.0) error = spread * std::min(1.0, std::pow(200.0 * error / spread, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (abs_sum * h > std::numeric_limits<double>::min() / (50.0 * eps))
        error = std::max(50.0 * eps * abs_sum * h, error);
    return {a, b, kronrod * half, error};
}

}  // namespace

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     const IntegrationOptions& options) {
    if (a == b) return {};
    const std::size_t panels = std::max<std::size_t>(options.initial_panels, 1);
    std::priority_queue<Segment> queue;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double lo = a + (b - a) * static_cast<double>(k) / static_cast<double>(panels);
        const double hi = k + 1 == panels
                              ? b
                              : a + (b - a) * static_cast<double>(k + 1) / static_cast<double>(panels);
        auto seg = gauss_kronrod(f, lo, hi);
        value += seg.value;
        error += seg.error;
        queue.push(seg);
    }
    std::size_t intervals = panels;
    while (error > std::max(options.abs_tol, options.rel_tol * std::abs(value)) &&
           intervals < options.max_intervals) {
        const Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            // Interval can no longer be split in floating point; keep its estimate.
            queue.push({worst.a, worst.b, worst.value, 0.0});
            error -= worst.error;
            continue;
        }
        const Segment left = gauss_kronrod(f, worst.a, mid);
        const Segment right = gauss_kronrod(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++intervals;
    }
    // Re-sum to shed the drift of the running updates.
    double total = 0.0;
    double total_err = 0.0;
    while (!queue.empty()) {
        total += queue.top().value;
        total_err += queue.top().error;
        queue.pop();
    }
    return {total, total_err, intervals};
}

}  // namespace numeraire
