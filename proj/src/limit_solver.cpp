#include "coevo/limit_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace coevo {

namespace {

double lerp(double a, double b, double w) { return a + w * (b - a); }

// linear interpolation on the uniform grid
double interp_grid(const std::vector<double>& v, double t, double dt, int n_steps) {
    if (t <= 0.0) return v.front();
    double s = t / dt;
    int k = static_cast<int>(s);
    if (k >= n_steps) return v.back();
    return lerp(v[k], v[k + 1], s - k);
}

} // namespace

int LimitSolution::step_floor(double t) const {
    int k = static_cast<int>(t / dt);
    return std::clamp(k, 0, n_steps);
}

double LimitSolution::p_s_at(double t) const { return interp_grid(pS, t, dt, n_steps); }
double LimitSolution::p_i_at(double t) const { return interp_grid(pI, t, dt, n_steps); }
double LimitSolution::j_at(double t) const { return interp_grid(J, t, dt, n_steps); }
double LimitSolution::phi_at(double t) const { return interp_grid(phi, t, dt, n_steps); }

double LimitSolution::cdf_at_step(int k, double y) const {
    if (y < -1.0) return 0.0;
    if (y <= 0.0) return pS[k];
    double tk = time[k];
    double acc = pS[k];
    if (k >= 0) {
        // cohorts with age t_k - t_b <= y, the newest (age 0) included for y > 0
        int b0 = 0;
        if (y < tk) b0 = static_cast<int>(std::ceil((tk - y) / dt - 1e-9));
        b0 = std::clamp(b0, 0, k + 1);
        double lower = (b0 > 0) ? prefix_scaled[b0 - 1] : 0.0;
        acc += std::exp(-tk) * (prefix_scaled[k] - lower);
    }
    if (y >= T + 1.0) acc += pR[k];
    return std::min(acc, 1.0);
}

double LimitSolution::eval_F(double t, double y) const {
    double s = t / dt;
    int k = std::clamp(static_cast<int>(s), 0, n_steps);
    if (k >= n_steps) return cdf_at_step(n_steps, y);
    double w = s - k;
    if (w == 0.0) return cdf_at_step(k, y);
    return lerp(cdf_at_step(k, y), cdf_at_step(k + 1, y), w);
}

double LimitSolution::generalized_inverse(double t, double x) const {
    if (x < 0.0 || x >= 1.0) throw std::domain_error("generalized_inverse: x must lie in [0,1)");
    double ps = p_s_at(t);
    if (x < ps) return -1.0;
    double pi_t = p_i_at(t);
    if (x >= ps + pi_t - 1e-15) return T + 1.0;
    // bisect on the infected segment: F(t;lo) <= x < F(t;hi)
    double lo = 0.0, hi = t;
    for (int iter = 0; iter < 80 && hi - lo > 1e-14; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (eval_F(t, mid) > x)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

DistributionView LimitSolution::view_at_step(int k) const {
    DistributionView v;
    v.t = time[k];
    v.p_s = pS[k];
    v.p_i = pI[k];
    v.p_r = pR[k];
    v.phi_hint_a = config.kernel.window_a;
    v.phi_hint = phi[k];
    v.ctx = this;
    v.aux = k;
    v.cdf_fn = [](const DistributionView& self, double y) {
        return static_cast<const LimitSolution*>(self.ctx)->cdf_at_step(self.aux, y);
    };
    return v;
}

TypeDistribution LimitSolution::type_distribution(double t) const {
    int k = std::clamp(static_cast<int>(std::lround(t / dt)), 0, n_steps);
    double tk = time[k];
    TypeDistribution d(tk, T);
    d.set_susceptible_mass(pS[k]);
    d.set_recovered_mass(pR[k]);
    for (int b = 0; b <= k; ++b)
        if (birth_mass[b] > 0.0) d.add_infected_atom(tk - time[b], birth_mass[b] * std::exp(-(tk - time[b])));
    d.finalize();
    return d;
}

double LimitSolution::pi_ss_at(double s) const {
    double u = s / dt;
    int k = std::clamp(static_cast<int>(u), 0, n_steps);
    if (k >= n_steps) return pi_ss_hist[n_steps];
    return lerp(pi_ss_hist[k], pi_ss_hist[k + 1], u - k);
}

double LimitSolution::pi_si_at(double s, double age) const {
    double u = s / dt;
    int k = std::clamp(static_cast<int>(u), 0, n_steps);
    if (k >= n_steps) return kernels.pi_si(age, view_at_step(n_steps));
    double w = u - k;
    double a = kernels.pi_si(age, view_at_step(k));
    if (w == 0.0) return a;
    return lerp(a, kernels.pi_si(age, view_at_step(k + 1)), w);
}

double LimitSolution::pi_ii_at(double s, double age_hi, double age_lo) const {
    double u = s / dt;
    int k = std::clamp(static_cast<int>(u), 0, n_steps);
    if (k >= n_steps) return kernels.pi_ii(age_hi, age_lo, view_at_step(n_steps));
    double w = u - k;
    double a = kernels.pi_ii(age_hi, age_lo, view_at_step(k));
    if (w == 0.0) return a;
    return lerp(a, kernels.pi_ii(age_hi, age_lo, view_at_step(k + 1)), w);
}

double LimitSolution::b_at(double s) const { return interp_grid(B, s, dt, n_steps); }

template <typename F>
double LimitSolution::integrate_exp(double s0, double s1, double t, F&& f) const {
    double g = config.gamma;
    if (g <= 0.0 || s1 <= s0) return 0.0;
    double acc = 0.0;
    double a = s0;
    double fa = f(a);
    int k = static_cast<int>(a / dt) + 1;
    const double step_growth = std::exp(g * dt);
    double decay = 0.0; // e^{-g(t-b)} for the current segment end, kept incrementally
    bool decay_valid = false;
    while (a < s1 - 1e-15) {
        double b = std::min(s1, k * dt);
        if (b <= a) {
            ++k;
            continue;
        }
        double h = b - a;
        double fb = f(b);
        double c0 = -std::expm1(-g * h) / g;
        double c1 = (h - c0) / g;
        double w0 = g * (c0 - c1 / h);
        double w1 = g * (c1 / h);
        if (!decay_valid || h != dt) {
            decay = std::exp(-g * (t - b));
            decay_valid = (h == dt);
        } else {
            decay *= step_growth;
        }
        acc += decay * (w0 * fa + w1 * fb);
        a = b;
        fa = fb;
        ++k;
    }
    return acc;
}

double LimitSolution::eval_H(double t, double u, double v) const {
    const double p0 = config.p0;
    const double recovered = T + 1.0;
    auto check = [&](double y) {
        bool ok = (y == -1.0) || (y >= 0.0 && y <= t + 1e-9) || (y >= recovered - 1e-9);
        if (!ok) throw std::domain_error("eval_H: type outside {-1} u [0,t] u {T+1}");
    };
    check(u);
    check(v);
    double up = std::max(u, v);
    double um = std::min(u, v);
    if (up >= recovered - 1e-9) return p0;
    double g = config.gamma;
    if (um < -0.5) {
        if (up < -0.5) {
            // SS
            return std::exp(-g * t) * p0 + integrate_exp(0.0, t, t, [&](double s) { return pi_ss_at(s); });
        }
        // SI: infected since tau = t - age
        double w = std::min(up, t);
        double tau = t - w;
        double res = std::exp(-g * (t - tau)) * b_at(tau) +
                     integrate_exp(tau, t, t, [&](double s) { return pi_si_at(s, s - tau); });
        return std::clamp(res, 0.0, 1.0);
    }
    // II: older infection at tau1, newer at tau2
    double w_hi = std::min(up, t);
    double w_lo = std::min(um, t);
    double tau1 = t - w_hi;
    double tau2 = t - w_lo;
    double res = std::exp(-g * (t - tau1)) * b_at(tau1) +
                 integrate_exp(tau1, tau2, t, [&](double s) { return pi_si_at(s, s - tau1); }) +
                 integrate_exp(tau2, t, t, [&](double s) { return pi_ii_at(s, s - tau1, s - tau2); });
    return std::clamp(res, 0.0, 1.0);
}

LimitSolution solve(const ScenarioConfig& config) {
    return solve(config, KernelSet::from_spec(config.kernel));
}

LimitSolution solve(const ScenarioConfig& config, const KernelSet& kernels) {
    config.validate();
    LimitSolution sol;
    sol.config = config;
    sol.kernels = kernels;
    const int n = config.n_steps;
    sol.n_steps = n;
    sol.T = config.horizon_T;
    sol.dt = sol.T / n;
    const double dt = sol.dt;
    const double g = config.gamma;
    const double lambda = config.lambda;
    if (g * dt > 50.0)
        throw NumericalError("limit solver: gamma*dt = " + std::to_string(g * dt) +
                             " too coarse to resolve edge dynamics; increase n_steps");

    sol.time.resize(n + 1);
    for (int k = 0; k <= n; ++k) sol.time[k] = k * dt;
    sol.pS.assign(n + 1, 0.0);
    sol.pI.assign(n + 1, 0.0);
    sol.pR.assign(n + 1, 0.0);
    sol.J.assign(n + 1, 0.0);
    sol.phi.assign(n + 1, 0.0);
    sol.birth_mass.assign(n + 1, 0.0);
    sol.prefix_scaled.assign(n + 1, 0.0);
    sol.pi_ss_hist.assign(n + 1, 0.0);
    sol.B.assign(n + 1, 0.0);

    // per-cohort incremental state for the SI part of H along the diagonal
    std::vector<double> A(n + 1, 0.0);          // gamma int_{t_b}^{t} e^{-g(t-s)} pi_SI ds
    std::vector<double> pi_si_prev(n + 1, 0.0); // pi_SI at the previous step
    std::vector<double> decay_rec(n + 1, 0.0);  // e^{-(t_k - t_b)}
    std::vector<double> decay_g(n + 1, 0.0);    // e^{-g(t_k - t_b)}

    const double er = std::exp(-dt);
    const double eg = std::exp(-g * dt);
    // exponential trapezoid weights for one full step
    double w0 = 0.0, w1 = 0.0;
    if (g > 0.0) {
        double c0 = -std::expm1(-g * dt) / g;
        double c1 = (dt - c0) / g;
        w0 = g * (c0 - c1 / dt);
        w1 = g * (c1 / dt);
    }

    auto compute_phi = [&](int k) {
        double a = config.kernel.window_a;
        return sol.cdf_at_step(k, a) - sol.cdf_at_step(k, 0.0);
    };

    // step 0
    sol.pS[0] = 1.0 - config.q0;
    sol.birth_mass[0] = config.q0;
    sol.prefix_scaled[0] = config.q0;
    sol.pI[0] = config.q0;
    sol.pR[0] = 0.0;
    sol.phi[0] = compute_phi(0);
    {
        DistributionView v0 = sol.view_at_step(0);
        sol.pi_ss_hist[0] = kernels.pi_ss(v0);
        pi_si_prev[0] = kernels.pi_si(0.0, v0);
    }
    sol.B[0] = config.p0;
    decay_rec[0] = decay_g[0] = 1.0;
    sol.J[0] = config.q0 * config.p0 * kernels.infectivity(0.0);

    for (int k = 0; k < n; ++k) {
        // advance susceptibles and spawn the next cohort
        sol.pS[k + 1] = sol.pS[k] * std::exp(-lambda * sol.J[k] * dt);
        sol.birth_mass[k + 1] = sol.pS[k] - sol.pS[k + 1];
        sol.prefix_scaled[k + 1] =
            sol.prefix_scaled[k] + sol.birth_mass[k + 1] * std::exp(sol.time[k + 1]);
        sol.pI[k + 1] = std::exp(-sol.time[k + 1]) * sol.prefix_scaled[k + 1];
        sol.pR[k + 1] = 1.0 - sol.pS[k + 1] - sol.pI[k + 1];
        sol.phi[k + 1] = compute_phi(k + 1);

        DistributionView vk = sol.view_at_step(k + 1);
        sol.pi_ss_hist[k + 1] = kernels.pi_ss(vk);
        sol.B[k + 1] = eg * sol.B[k] + w0 * sol.pi_ss_hist[k] + w1 * sol.pi_ss_hist[k + 1];

        double tkp = sol.time[k + 1];
        double j = 0.0;
        for (int b = 0; b <= k; ++b) {
            decay_rec[b] *= er;
            decay_g[b] *= eg;
            double pi_new = kernels.pi_si(tkp - sol.time[b], vk);
            A[b] = eg * A[b] + w0 * pi_si_prev[b] + w1 * pi_new;
            pi_si_prev[b] = pi_new;
            double m = sol.birth_mass[b] * decay_rec[b];
            double h_si = decay_g[b] * sol.B[b] + A[b];
            double infectivity =
                kernels.identity_infectivity ? 1.0 : kernels.infectivity(tkp - sol.time[b]);
            j += m * h_si * infectivity;
        }
        // the cohort born this step, age 0
        decay_rec[k + 1] = decay_g[k + 1] = 1.0;
        A[k + 1] = 0.0;
        pi_si_prev[k + 1] = kernels.pi_si(0.0, vk);
        j += sol.birth_mass[k + 1] * sol.B[k + 1] * kernels.infectivity(0.0);
        sol.J[k + 1] = j;

        if (!std::isfinite(sol.pS[k + 1]) || !std::isfinite(j))
            throw NumericalError("limit solver: non-finite value at step " + std::to_string(k + 1));
    }
    return sol;
}

CharacteristicsReport check_characteristics(const LimitSolution& sol) {
    CharacteristicsReport rep;
    const int n = sol.n_steps;
    const double dt = sol.dt;
    const double lambda = sol.config.lambda;

    // cohort density against the characteristics formula, at a few time slices
    for (int k : {n / 4, n / 2, (3 * n) / 4, n}) {
        if (k < 1) continue;
        double tk = sol.time[k];
        for (int b = 1; b <= k; ++b) {
            double mid = sol.time[b] - 0.5 * dt; // cohort b collects births over (t_{b-1}, t_b]
            double u = tk - mid;
            double density = sol.birth_mass[b] * std::exp(-(tk - sol.time[b])) / dt;
            double oracle = std::exp(-u) * lambda * sol.j_at(mid) * sol.p_s_at(mid);
            rep.max_density_residual = std::max(rep.max_density_residual, std::abs(density - oracle));
        }
    }

    // compartment balance dpI/dt = lambda J pS - pI by central differences
    for (int k = 1; k < n; ++k) {
        double dpi = (sol.pI[k + 1] - sol.pI[k - 1]) / (2.0 * dt);
        double rhs = lambda * sol.J[k] * sol.pS[k] - sol.pI[k];
        rep.max_balance_residual = std::max(rep.max_balance_residual, std::abs(dpi - rhs));
    }
    return rep;
}

} // namespace coevo
