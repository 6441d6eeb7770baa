#include "coevo/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace coevo {

double behavioral_control(double phi, double phi1, double phi2) {
    if (!(phi1 < phi2)) throw ConfigError("behavioral_control: requires phi1 < phi2");
    if (phi <= phi1) return 0.1;
    if (phi >= phi2) return 0.9;
    return 0.1 + 0.8 * (phi - phi1) / (phi2 - phi1);
}

namespace {

double table_interp(const std::vector<double>& xs, const std::vector<double>& ys, double u) {
    if (u <= xs.front()) return ys.front();
    if (u >= xs.back()) return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), u);
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    double w = (u - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

} // namespace

double KernelSet::pi_ss(const DistributionView& v) const {
    if (use_custom) return custom_ss(v);
    switch (kind) {
        case KernelKind::Constant:
            return spec.const_ss;
        case KernelKind::Behavioral: {
            double d = behavioral_control(v.phi(spec.window_a), spec.phi1, spec.phi2);
            return (1.0 - d) * spec.p_ss_norm + d * spec.p_ss_dist;
        }
        case KernelKind::Table:
            return spec.const_ss;
    }
    return 0.0;
}

double KernelSet::pi_si(double u, const DistributionView& v) const {
    if (use_custom) return custom_si(u, v);
    switch (kind) {
        case KernelKind::Constant:
            return spec.const_si;
        case KernelKind::Behavioral: {
            double d = behavioral_control(v.phi(spec.window_a), spec.phi1, spec.phi2);
            return (1.0 - d) * spec.p_si_norm + d * spec.p_si_dist;
        }
        case KernelKind::Table:
            return table_interp(spec.si_ages, spec.si_values, u);
    }
    return 0.0;
}

double KernelSet::pi_ii(double u, double w, const DistributionView& v) const {
    if (use_custom) return custom_ii(u, w, v);
    switch (kind) {
        case KernelKind::Constant:
            return spec.const_ii;
        case KernelKind::Behavioral:
            return spec.pi_ii;
        case KernelKind::Table:
            (void)u;
            (void)w;
            return spec.const_ii;
    }
    return 0.0;
}

bool KernelSet::age_only(double p0) const {
    if (use_custom) return false;
    switch (kind) {
        case KernelKind::Constant:
            return spec.const_ss == p0;
        case KernelKind::Behavioral:
            return false;
        case KernelKind::Table:
            return spec.const_ss == p0;
    }
    return false;
}

KernelSet KernelSet::from_spec(const KernelSpec& s) {
    KernelSet k;
    k.kind = s.kind;
    k.spec = s;
    switch (s.kind) {
        case KernelKind::Constant:
            k.lipschitz_L = 0.0;
            break;
        case KernelKind::Behavioral: {
            double gap = std::max(s.p_ss_norm - s.p_ss_dist, s.p_si_norm - s.p_si_dist);
            // slope of d times the level gap, with slack for window-boundary mass
            k.lipschitz_L = 3.0 * 0.8 * std::abs(gap) / (s.phi2 - s.phi1);
            break;
        }
        case KernelKind::Table: {
            double slope = 0.0;
            for (std::size_t i = 1; i < s.si_ages.size(); ++i)
                slope = std::max(slope, std::abs(s.si_values[i] - s.si_values[i - 1]) /
                                            (s.si_ages[i] - s.si_ages[i - 1]));
            k.lipschitz_L = slope;
            break;
        }
    }
    return k;
}

KernelSet KernelSet::constant(double ss, double si, double ii) {
    KernelSpec s;
    s.kind = KernelKind::Constant;
    s.const_ss = ss;
    s.const_si = si;
    s.const_ii = ii;
    return from_spec(s);
}

double eval_kernel(PairState s, double u, double v, const DistributionView& view,
                   const KernelSet& k) {
    switch (s) {
        case PairState::SS:
            return k.pi_ss(view);
        case PairState::SI:
            return k.pi_si(u, view);
        case PairState::II:
            return k.pi_ii(u, v, view);
    }
    return 0.0;
}

} // namespace coevo
