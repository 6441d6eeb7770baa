#include "coevo/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace coevo {

namespace {

constexpr double kTailHorizon = 25.0; // e^{-25} < 1.4e-11, below every tolerance here

// age-only pi_SI evaluated against a dummy distribution view
double pi_si_age(const KernelSet& k, double age) {
    DistributionView v;
    return k.pi_si(age, v);
}

// single-edge S-I activity profile and R0 integral at a fixed step count
double r0_pass(const ScenarioConfig& cfg, const KernelSet& k, int n) {
    const double h = kTailHorizon / n;
    const double g = cfg.gamma;
    std::vector<double> p(n + 1);
    p[0] = cfg.p0;
    if (g > 0.0) {
        // exact exponential-weighted update for a per-step linear pi_SI
        const double decay = std::exp(-g * h);
        const double c0 = -std::expm1(-g * h) / g;
        const double c1 = (h - c0) / g;
        const double w0 = g * (c0 - c1 / h);
        const double w1 = g * (c1 / h);
        for (int i = 0; i < n; ++i)
            p[i + 1] = decay * p[i] + w0 * pi_si_age(k, i * h) + w1 * pi_si_age(k, (i + 1) * h);
    } else {
        for (int i = 1; i <= n; ++i) p[i] = cfg.p0;
    }
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        double u = i * h;
        double f = p[i] * cfg.lambda * k.infectivity(u) * std::exp(-u);
        sum += (i == 0 || i == n) ? 0.5 * f : f;
    }
    return sum * h;
}

} // namespace

double r0_quadrature(const ScenarioConfig& config, const KernelSet& kernels) {
    if (!kernels.age_only(config.p0))
        throw std::logic_error(
            "r0_quadrature: requires a kernel without global feedback "
            "(pi_SS == p0 and age-only pi_SI)");
    double prev = r0_pass(config, kernels, 512);
    for (int n = 1024; n <= (1 << 22); n *= 2) {
        double cur = r0_pass(config, kernels, n);
        if (std::fabs(cur - prev) <= 1e-8 * std::max(1.0, std::fabs(cur))) return cur;
        prev = cur;
    }
    throw NumericalError("r0_quadrature: step halving did not converge");
}

double r0_closed_form(double lambda, double p0, double gamma, double c) {
    return lambda * (p0 + gamma * c) / (gamma + 1.0);
}

double final_size(double r0, double q0) {
    auto resid = [&](double p) { return p - (1.0 - q0) * std::exp(-r0 * (1.0 - p)); };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (resid(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (std::fabs(resid(mid)) < 1e-13) return mid;
    }
    return 0.5 * (lo + hi);
}

double classical_peak(double r0) {
    if (r0 <= 0.0) throw std::domain_error("classical_peak: r0 must be positive");
    if (r0 <= 1.0) return 0.0;
    return 1.0 - 1.0 / r0 - std::log(r0) / r0;
}

double monotonicity_constant(const KernelSet& kernels) {
    if (kernels.kind == KernelKind::Constant && !kernels.use_custom) return kernels.spec.const_si;
    // int_a^b e^{-v}(alpha + beta v) dv = [-(alpha + beta + beta v) e^{-v}]_a^b
    // exact over each linear segment of pi_SI, constant tail beyond the last knot
    std::vector<double> knots{0.0};
    if (kernels.kind == KernelKind::Table)
        for (double a : kernels.spec.si_ages)
            if (a > 0.0 && a < kTailHorizon) knots.push_back(a);
    knots.push_back(kTailHorizon);
    std::sort(knots.begin(), knots.end());

    double c = 0.0;
    for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
        double a = knots[s], b = knots[s + 1];
        double fa = pi_si_age(kernels, a), fb = pi_si_age(kernels, b);
        double beta = (fb - fa) / (b - a);
        double alpha = fa - beta * a;
        auto anti = [&](double v) { return -(alpha + beta + beta * v) * std::exp(-v); };
        c += anti(b) - anti(a);
    }
    c += pi_si_age(kernels, kTailHorizon) * std::exp(-kTailHorizon);
    return c;
}

PeakReport detect_peaks(const LimitSolution& sol, double prominence) {
    PeakReport rep;
    const auto& v = sol.pI;
    const auto& t = sol.time;
    const int m = static_cast<int>(v.size());
    if (m == 0) return rep;

    // compress equal-value runs; extremum times are plateau midpoints
    struct Run {
        double value, mid_time;
    };
    std::vector<Run> runs;
    for (int k = 0; k < m;) {
        int e = k;
        while (e + 1 < m && v[e + 1] == v[k]) ++e;
        runs.push_back({v[k], 0.5 * (t[k] + t[e])});
        k = e + 1;
    }

    struct Ext {
        double time, height;
        bool is_max;
    };
    std::vector<Ext> ext;
    for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
        bool mx = runs[r].value > runs[r - 1].value && runs[r].value > runs[r + 1].value;
        bool mn = runs[r].value < runs[r - 1].value && runs[r].value < runs[r + 1].value;
        if (mx || mn) ext.push_back({runs[r].mid_time, runs[r].value, mx});
    }

    // remove ripple: repeatedly drop the adjacent max/min pair of least depth
    while (ext.size() >= 2) {
        double best = prominence;
        int at = -1;
        for (std::size_t j = 0; j + 1 < ext.size(); ++j) {
            double d = std::fabs(ext[j].height - ext[j + 1].height);
            if (d < best) {
                best = d;
                at = static_cast<int>(j);
            }
        }
        if (at < 0) break;
        ext.erase(ext.begin() + at, ext.begin() + at + 2);
    }
    // a lone shallow maximum next to a boundary
    auto boundary_ok = [&](const Ext& e) {
        if (!e.is_max) return true;
        double lo = std::min(runs.front().value, runs.back().value);
        return e.height - lo >= prominence ||
               std::any_of(ext.begin(), ext.end(), [&](const Ext& o) {
                   return !o.is_max && e.height - o.height >= prominence;
               });
    };
    for (const Ext& e : ext) {
        if (!boundary_ok(e)) continue;
        if (e.is_max)
            rep.peaks.push_back({e.time, e.height});
        else
            rep.dips.push_back({e.time, e.height});
    }

    int arg = 0;
    for (int k = 1; k < m; ++k)
        if (v[k] > v[arg]) arg = k;
    rep.i_max = v[arg];
    int e = arg;
    while (e + 1 < m && v[e + 1] == v[arg]) ++e;
    rep.i_max_time = 0.5 * (t[arg] + t[e]);
    return rep;
}

EpidemicSummary summarize_epidemic(const ScenarioConfig& config, const KernelSet& kernels,
                                   const LimitSolution& solution) {
    EpidemicSummary s;
    PeakReport rep = detect_peaks(solution);
    s.peaks = rep.peaks;
    s.dips = rep.dips;
    s.i_max = rep.i_max;
    if (kernels.age_only(config.p0)) {
        s.r0 = r0_quadrature(config, kernels);
        s.final_size_ps_inf = final_size(s.r0, config.q0);
        s.classical_i_max = s.r0 > 0.0 ? classical_peak(std::max(s.r0, 1e-12)) : 0.0;
        s.monotonicity_c = monotonicity_constant(kernels);
        double d = s.monotonicity_c - config.p0;
        s.direction = (d > 0.0) - (d < 0.0);
    } else {
        double nan = std::numeric_limits<double>::quiet_NaN();
        s.r0 = s.final_size_ps_inf = s.classical_i_max = s.monotonicity_c = nan;
        s.direction = 0;
    }
    return s;
}

std::vector<GammaSweepRow> gamma_sweep(const ScenarioConfig& config, const KernelSet& kernels,
                                       const std::vector<double>& gammas) {
    std::vector<GammaSweepRow> rows(gammas.size());
    auto work = [&](std::size_t k) {
        ScenarioConfig cfg = config;
        cfg.gamma = gammas[k];
        GammaSweepRow row;
        row.gamma = gammas[k];
        row.r0 = r0_quadrature(cfg, kernels);
        row.final_size = final_size(row.r0, cfg.q0);
        LimitSolution sol = solve(cfg, kernels);
        row.i_max = detect_peaks(sol).i_max;
        rows[k] = row;
    };

    int threads = 1;
    if (const char* env = std::getenv("COEVO_THREADS")) threads = std::max(1, std::atoi(env));
    if (threads <= 1 || gammas.size() <= 1) {
        for (std::size_t k = 0; k < gammas.size(); ++k) work(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < threads && static_cast<std::size_t>(w) < gammas.size(); ++w)
            pool.emplace_back([&] {
                std::size_t k;
                while ((k = next.fetch_add(1)) < gammas.size()) work(k);
            });
        for (auto& th : pool) th.join();
    }
    return rows;
}

} // namespace coevo
