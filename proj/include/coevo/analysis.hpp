#ifndef COEVO_ANALYSIS_HPP
#define COEVO_ANALYSIS_HPP

#include <vector>

#include "coevo/config.hpp"
#include "coevo/kernels.hpp"
#include "coevo/limit_solver.hpp"

namespace coevo {

struct Extremum {
    double time = 0.0;
    double height = 0.0;
};

struct EpidemicSummary {
    double r0 = 0.0;
    double final_size_ps_inf = 0.0;
    std::vector<Extremum> peaks; // local maxima of p_I, sorted by time
    std::vector<Extremum> dips;  // local minima between peaks
    double i_max = 0.0;
    double classical_i_max = 0.0;
    double monotonicity_c = 0.0; // C = int_0^inf e^{-v} pi_SI(v) dv
    int direction = 0;           // sign(C - p0)
};

// Basic reproduction number from the single-edge activity profile:
//   p_SI(u) = p0 e^{-gamma u} + int_0^u gamma e^{-gamma s} pi_SI(u - s) ds
//   R0 = int_0^inf p_SI(u) lambda I(u) e^{-u} du
// Requires a kernel without global feedback (pi_SS == p0, pi_SI age-only).
double r0_quadrature(const ScenarioConfig& config, const KernelSet& kernels);

// R0(gamma) = lambda (p0 + gamma C) / (gamma + 1), valid for identity infectivity.
double r0_closed_form(double lambda, double p0, double gamma, double c);

// Unique root in [0,1] of p = (1 - q0) e^{-r0 (1 - p)}; residual < 1e-12.
double final_size(double r0, double q0);

// Classical SIR peak 1 - 1/r0 + log(1/r0)/r0, clamped at 0 for r0 <= 1.
double classical_peak(double r0);

struct PeakReport {
    std::vector<Extremum> peaks;
    std::vector<Extremum> dips;
    double i_max = 0.0;
    double i_max_time = 0.0;
};

// Local extrema of the p_I grid with a flat-plateau midpoint rule and a
// prominence threshold suppressing discretization ripple.
PeakReport detect_peaks(const LimitSolution& solution, double prominence = 1e-4);

// C = int_0^inf e^{-v} pi_SI(v) dv for an age-only kernel.
double monotonicity_constant(const KernelSet& kernels);

EpidemicSummary summarize_epidemic(const ScenarioConfig& config, const KernelSet& kernels,
                                   const LimitSolution& solution);

struct GammaSweepRow {
    double gamma = 0.0;
    double r0 = 0.0;
    double final_size = 0.0;
    double i_max = 0.0;
};

std::vector<GammaSweepRow> gamma_sweep(const ScenarioConfig& config, const KernelSet& kernels,
                                       const std::vector<double>& gammas);

} // namespace coevo

#endif
