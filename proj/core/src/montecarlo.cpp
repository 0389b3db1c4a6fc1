#include "numeraire/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "numeraire/errors.hpp"
#include "numeraire/philox.hpp"

namespace numeraire {

namespace {

constexpr std::size_t kBatch = 4096;

struct Moments {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.n) / total;
        m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }
};

// Fills buf with `count` normals of one path, negated for the antithetic twin.
void fill_normals(const NormalStream& stream, std::vector<double>& buf, std::size_t count) {
    buf.resize(count + 1);
    for (std::size_t d = 0; d < count; d += 2) {
        const auto z = stream.pair(static_cast<std::uint32_t>(d / 2));
        buf[d] = z[0];
        buf[d + 1] = z[1];
    }
}

// payoff(normals, sign) -> discounted payoff for one path. Samples are fixed-size
// batches whose moments are merged in batch order, so the result does not depend
// on the thread count.
template <class Payoff>
McResult simulate(const McSpec& mc, std::size_t normals_per_path, const Payoff& payoff) {
    if (mc.paths == 0) throw SpecError("paths must be at least 1");
    if (mc.steps == 0) throw SpecError("steps must be at least 1");
    const std::size_t samples = mc.antithetic ? (mc.paths + 1) / 2 : mc.paths;
    const std::size_t batches = (samples + kBatch - 1) / kBatch;
    std::vector<Moments> stats(batches);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        std::vector<double> buf;
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= batches) return;
            Moments m;
            const std::size_t end = std::min(samples, (b + 1) * kBatch);
            for (std::size_t i = b * kBatch; i < end; ++i) {
                fill_normals(NormalStream(mc.seed, i), buf, normals_per_path);
                double x = payoff(buf, 1.0);
                if (mc.antithetic) x = 0.5 * (x + payoff(buf, -1.0));
                m.add(x);
            }
            stats[b] = m;
        }
    };

    std::size_t threads = mc.threads ? mc.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, batches);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    Moments total;
    for (const auto& m : stats) total.merge(m);
    McResult r;
    r.estimate = total.mean;
    r.std_error = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1) /
                                          static_cast<double>(total.n))
                              : 0.0;
    r.paths_used = mc.antithetic ? 2 * total.n : total.n;
    return r;
}

// Exact OU step jointly with the driving Brownian increment over dt.
struct OuStep {
    double decay = 1.0;     // e^{-theta dt}
    double level = 0.0;     // pricing-measure long-run level
    double noise_sd = 0.0;  // sd of the OU noise
    double w_on_noise = 0.0;  // dW = w_on_noise xi1 + w_resid xi2
    double w_resid = 0.0;

    OuStep(const VasicekModel& m, double dt) {
        decay = std::exp(-m.theta * dt);
        level = m.risk_neutral_level();
        noise_sd = std::sqrt(vasicek_transition_variance(m, dt));
        // Cov(noise, dW) = sigma_r (1 - e^{-theta dt}) / theta
        const double cov = m.sigma_r * -std::expm1(-m.theta * dt) / m.theta;
        if (noise_sd > 0.0) {
            w_on_noise = cov / noise_sd;
            w_resid = std::sqrt(std::max(dt - w_on_noise * w_on_noise, 0.0));
        } else {
            w_resid = std::sqrt(dt);
        }
    }

    double next(double r, double xi) const { return level + (r - level) * decay + noise_sd * xi; }
};

std::size_t step_count(const McSpec& mc, double horizon) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(static_cast<double>(mc.steps) * horizon - 1e-9)));
}

// Asset with volatility sigma correlated rho with the rate driver, growing at the
// short rate. Returns (discount factor, asset, terminal rate) at the horizon.
struct RateAssetPath {
    VasicekModel model;
    double sigma;
    double rho;
    double horizon;
    std::size_t steps;
    OuStep ou;

    RateAssetPath(const VasicekModel& m, double sigma_a, double rho_a, double t, std::size_t n)
        : model(m), sigma(sigma_a), rho(rho_a), horizon(t), steps(n), ou(m, t / static_cast<double>(n)) {}

    struct End {
        double discount;
        double asset;
        double rate;
    };

    End run(const std::vector<double>& xi, double sign, double spot) const {
        const double dt = horizon / static_cast<double>(steps);
        const double side = std::sqrt(1.0 - rho * rho);
        double r = model.r0;
        double int_r = 0.0;
        double log_s = std::log(spot);
        for (std::size_t k = 0; k < steps; ++k) {
            const double x1 = sign * xi[3 * k];
            const double x2 = sign * xi[3 * k + 1];
            const double x3 = sign * xi[3 * k + 2];
            const double r_next = ou.next(r, x1);
            const double dw_r = ou.w_on_noise * x1 + ou.w_resid * x2;
            const double dw_a = rho * dw_r + side * std::sqrt(dt) * x3;
            const double step_int = 0.5 * (r + r_next) * dt;
            int_r += step_int;
            log_s += step_int - 0.5 * sigma * sigma * dt + sigma * dw_a;
            r = r_next;
        }
        return {std::exp(-int_r), std::exp(log_s), r};
    }
};

McResult esop_mc(const Esop& p, const McSpec& mc) {
    const double dt0 = p.t_reset, dt1 = p.maturity - p.t_reset;
    const double drift0 = (p.rate - 0.5 * p.sigma * p.sigma) * dt0;
    const double drift1 = (p.rate - 0.5 * p.sigma * p.sigma) * dt1;
    const double sd0 = p.sigma * std::sqrt(dt0), sd1 = p.sigma * std::sqrt(dt1);
    const double disc = std::exp(-p.rate * p.maturity);
    return simulate(mc, 2, [&](const std::vector<double>& xi, double sign) {
        const double s0 = p.spot * std::exp(drift0 + sd0 * sign * xi[0]);
        const double s1 = s0 * std::exp(drift1 + sd1 * sign * xi[1]);
        return disc * (s1 - p.beta * std::min(s0, s1));
    });
}

McResult fx_usd_mc(const FxStrike& p, const McSpec& mc) {
    const double t = p.maturity, rt = std::sqrt(t);
    const double cs = p.rho * p.sigma_s * p.sigma_x;
    const double ds = (p.r_p - cs - 0.5 * p.sigma_s * p.sigma_s) * t;
    const double dx = (p.r_d - p.r_p - 0.5 * p.sigma_x * p.sigma_x) * t;
    const double side = std::sqrt(1.0 - p.rho * p.rho);
    const double kd = p.strike_usd(), disc = std::exp(-p.r_d * t);
    return simulate(mc, 2, [&](const std::vector<double>& xi, double sign) {
        const double z1 = sign * xi[0], z2 = sign * xi[1];
        const double s = p.spot * std::exp(ds + p.sigma_s * rt * z1);
        const double x = p.fx * std::exp(dx + p.sigma_x * rt * (p.rho * z1 + side * z2));
        return disc * std::max(s * x - kd, 0.0);
    });
}

McResult savings_mc(const Savings& p, const McSpec& mc) {
    const double t = p.maturity, rt = std::sqrt(t);
    const double x0 = 1.0 / p.fx;
    const double dx = (p.r_d - p.r_f - 0.5 * p.sigma_x * p.sigma_x) * t;
    const double di = -0.5 * p.sigma_i * p.sigma_i * t;
    const double side = std::sqrt(1.0 - p.rho * p.rho);
    const double grow_d = std::exp(p.r_d * t), grow_f = p.fx * std::exp(p.r_f * t);
    const double disc = std::exp(-p.r_d * t);
    return simulate(mc, 2, [&](const std::vector<double>& xi, double sign) {
        const double z1 = sign * xi[0], z2 = sign * xi[1];
        const double x = x0 * std::exp(dx + p.sigma_x * rt * z1);
        const double i = p.price_level * std::exp(di + p.sigma_i * rt * (-p.rho * z1 + side * z2));
        return disc * std::max(grow_d * i, grow_f * x);
    });
}

McResult convertible_mc(const Convertible& p, const McSpec& mc) {
    const std::size_t n = step_count(mc, p.conv_date);
    const RateAssetPath path(p.vasicek, p.sigma_s, p.rho, p.conv_date, n);
    return simulate(mc, 3 * n, [&](const std::vector<double>& xi, double sign) {
        const auto end = path.run(xi, sign, p.spot);
        const double bond = bond_price(p.vasicek, end.rate, p.conv_date, p.bond_maturity);
        return end.discount * std::max(end.asset, bond);
    });
}

McResult corporate_mc(const Corporate& p, const McSpec& mc) {
    const std::size_t n = step_count(mc, p.maturity);
    const RateAssetPath path(p.vasicek, p.sigma_v, p.rho, p.maturity, n);
    const double c = p.dilution();
    return simulate(mc, 3 * n, [&](const std::vector<double>& xi, double sign) {
        const auto end = path.run(xi, sign, p.firm_value);
        return end.discount * std::max(p.face, c * end.asset);
    });
}

void require_simulable(const ProductSpec& spec) {
    const auto v = validate_allowing_zero_vol(spec);
    if (v.empty()) return;
    std::string msg;
    for (const auto& line : v) msg += (msg.empty() ? "" : "\n") + line;
    throw ValidationError(msg);
}

}  // namespace

double vasicek_transition_variance(const VasicekModel& model, double dt) {
    const double x = 2.0 * model.theta * dt;
    if (x == 0.0) return model.sigma_r * model.sigma_r * dt;
    return model.sigma_r * model.sigma_r * dt * (-std::expm1(-x) / x);
}

McResult price_mc(const ProductSpec& spec, const McSpec& mc) {
    require_simulable(spec);
    struct Visitor {
        const McSpec& mc;
        McResult operator()(const Esop& p) const { return esop_mc(p, mc); }
        McResult operator()(const FxStrike& p) const { return fx_usd_mc(p, mc); }
        McResult operator()(const Savings& p) const { return savings_mc(p, mc); }
        McResult operator()(const Convertible& p) const { return convertible_mc(p, mc); }
        McResult operator()(const Corporate& p) const { return corporate_mc(p, mc); }
    };
    return std::visit(Visitor{mc}, spec);
}

McResult price_mc_fx_gbp(const FxStrike& p, const McSpec& mc) {
    require_simulable(ProductSpec{p});
    const double t = p.maturity, rt = std::sqrt(t);
    const double ds = (p.r_p - 0.5 * p.sigma_s * p.sigma_s) * t;
    const double dy = (p.r_p - p.r_d - 0.5 * p.sigma_x * p.sigma_x) * t;
    const double side = std::sqrt(1.0 - p.rho * p.rho);
    const double kd = p.strike_usd(), disc = std::exp(-p.r_p * t), y0 = 1.0 / p.fx;
    return simulate(mc, 2, [&](const std::vector<double>& xi, double sign) {
        const double z1 = sign * xi[0], z2 = sign * xi[1];
        const double s = p.spot * std::exp(ds + p.sigma_s * rt * z1);
        const double y = y0 * std::exp(dy + p.sigma_x * rt * (-p.rho * z1 + side * z2));
        return disc * std::max(s - kd * y, 0.0);
    });
}

McResult bond_mc(const VasicekModel& model, double maturity, const McSpec& mc) {
    if (!(maturity > 0.0)) throw DomainError("maturity must be positive");
    const std::size_t n = step_count(mc, maturity);
    const RateAssetPath path(model, 0.0, 0.0, maturity, n);
    return simulate(mc, 3 * n, [&](const std::vector<double>& xi, double sign) {
        return path.run(xi, sign, 1.0).discount;
    });
}

std::vector<double> sample_vasicek(const VasicekModel& model, std::span<const double> times,
                                   std::uint64_t seed, std::uint64_t path) {
    const NormalStream stream(seed, path);
    const double level = model.risk_neutral_level();
    std::vector<double> out;
    out.reserve(times.size());
    double r = model.r0;
    double t = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= t)) throw DomainError("sample times must be nonnegative and increasing");
        const double dt = times[k] - t;
        if (dt > 0.0) {
            const double decay = std::exp(-model.theta * dt);
            r = level + (r - level) * decay +
                std::sqrt(vasicek_transition_variance(model, dt)) * stream(static_cast<std::uint32_t>(k));
        }
        out.push_back(r);
        t = times[k];
    }
    return out;
}

}  // namespace numeraire
