#ifndef COEVO_KERNELS_HPP
#define COEVO_KERNELS_HPP

#include <functional>

#include "coevo/config.hpp"
#include "coevo/distribution.hpp"

namespace coevo {

enum class PairState { SS, SI, II };

// Piecewise-linear behavioral response: 0.1 in normal mode (phi <= phi1),
// 0.9 in distancing mode (phi >= phi2), linear in between.
double behavioral_control(double phi, double phi1, double phi2);

// Edge-resampling acceptance probabilities pi_SS, pi_SI, pi_II together with
// the infectivity profile. Built-in kinds dispatch without indirection; fully
// custom kernels go through std::function.
struct KernelSet {
    KernelKind kind = KernelKind::Constant;
    KernelSpec spec;

    bool use_custom = false;
    std::function<double(const DistributionView&)> custom_ss;
    std::function<double(double, const DistributionView&)> custom_si;
    std::function<double(double, double, const DistributionView&)> custom_ii;

    bool identity_infectivity = true;
    std::function<double(double)> infectivity_fn;

    // Declared (not symbolically verified) Lipschitz constant; see
    // sampled_lipschitz_violation in tests.
    double lipschitz_L = 1.0;

    double pi_ss(const DistributionView& v) const;
    double pi_si(double u, const DistributionView& v) const;
    double pi_ii(double u, double w, const DistributionView& v) const;
    double infectivity(double age) const {
        return identity_infectivity ? 1.0 : infectivity_fn(age);
    }

    // True when pi_SS == p0 identically and pi_SI depends on age only, the
    // regime in which the R0 / final-size formulas apply.
    bool age_only(double p0) const;

    static KernelSet from_spec(const KernelSpec& spec);
    static KernelSet constant(double ss, double si, double ii);
};

double eval_kernel(PairState s, double u, double v, const DistributionView& view,
                   const KernelSet& k);

} // namespace coevo

#endif
