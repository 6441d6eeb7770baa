#ifndef COEVO_LIMIT_SOLVER_HPP
#define COEVO_LIMIT_SOLVER_HPP

#include <vector>

#include "coevo/config.hpp"
#include "coevo/distribution.hpp"
#include "coevo/kernels.hpp"

namespace coevo {

// Deterministic large-population limit on a uniform time grid t_k = k*dt.
// Infected mass is tracked as cohorts by birth step; recovery at rate 1 is
// integrated analytically, so m_b(k) = birth_mass[b] * exp(-(t_k - t_b)).
class LimitSolution {
public:
    ScenarioConfig config;
    KernelSet kernels;

    int n_steps = 0;
    double dt = 0.0;
    double T = 0.0;

    std::vector<double> time;       // size n_steps + 1
    std::vector<double> pS, pI, pR; // proportions on the grid
    std::vector<double> J;          // force-of-infection integral
    std::vector<double> phi;        // F(t;a) - F(t;0) for the configured window
    std::vector<double> birth_mass; // cohort birth masses; b = 0 is the q0 atom
    std::vector<double> prefix_scaled; // prefix sums of birth_mass[b] * exp(t_b)
    std::vector<double> pi_ss_hist; // pi_SS(F(t_k;.))
    std::vector<double> B;          // SS background: e^{-g t}p0 + g int e^{-g(t-s)} pi_SS ds

    double p_s_at(double t) const;
    double p_i_at(double t) const;
    double j_at(double t) const;
    double phi_at(double t) const;

    // CDF of the limiting type distribution (five-branch form)
    double eval_F(double t, double y) const;
    double cdf_at_step(int k, double y) const;

    // inf{u : F(t;u) > x}
    double generalized_inverse(double t, double x) const;

    // edge-connection probability between types u and v at time t; symmetric,
    // p0 exactly when either type is recovered
    double eval_H(double t, double u, double v) const;

    DistributionView view_at_step(int k) const;
    TypeDistribution type_distribution(double t) const;

    int step_floor(double t) const;

    // kernel values against F(s;.), linearly interpolated between grid views
    double pi_ss_at(double s) const;
    double pi_si_at(double s, double age) const;
    double pi_ii_at(double s, double age_hi, double age_lo) const;

private:
    double b_at(double s) const;

    // g * int_{s0}^{s1} e^{-g(t-s)} f(s) ds with grid-aligned segments and
    // exact exponential weighting of a per-segment linear f
    template <typename F>
    double integrate_exp(double s0, double s1, double t, F&& f) const;
};

LimitSolution solve(const ScenarioConfig& config);
LimitSolution solve(const ScenarioConfig& config, const KernelSet& kernels);

struct CharacteristicsReport {
    double max_density_residual = 0.0; // cohort density vs e^{-u} lambda J(t-u) pS(t-u)
    double max_balance_residual = 0.0; // dpI/dt vs lambda J pS - pI
};

CharacteristicsReport check_characteristics(const LimitSolution& sol);

} // namespace coevo

#endif
