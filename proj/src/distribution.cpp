#include "coevo/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coevo {

double DistributionView::cdf(double y) const {
    if (cdf_fn) return cdf_fn(*this, y);
    // masses-only fallback: all infected mass treated as lying in (0, t]
    if (y < -1.0) return 0.0;
    if (y < 0.0) return p_s;
    if (y < t) return p_s; // unknown interior profile
    return (y >= t) ? p_s + p_i : p_s;
}

double DistributionView::phi(double a) const {
    if (a == phi_hint_a) return phi_hint;
    return cdf(a) - cdf(0.0);
}

TypeDistribution::TypeDistribution(double t, double horizon_T) : t_(t), horizon_(horizon_T) {}

void TypeDistribution::add_infected_atom(double age, double mass) {
    if (mass < 0.0) throw std::invalid_argument("negative atom mass");
    if (age < 0.0) throw std::invalid_argument("negative infection age");
    if (mass == 0.0) return;
    atoms_.emplace_back(age, mass);
    finalized_ = false;
}

void TypeDistribution::finalize() {
    std::sort(atoms_.begin(), atoms_.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& a : atoms_) {
        if (!merged.empty() && merged.back().first == a.first)
            merged.back().second += a.second;
        else
            merged.push_back(a);
    }
    atoms_ = std::move(merged);
    if (mass_s_ < 0.0 || mass_r_ < 0.0) throw std::invalid_argument("negative mass");
    finalized_ = true;
}

double TypeDistribution::p_i() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.second;
    return m;
}

double TypeDistribution::total_mass() const { return mass_s_ + p_i() + mass_r_; }

double TypeDistribution::cdf(double y) const {
    if (y < -1.0) return 0.0;
    double acc = mass_s_;
    if (y < 0.0) return acc;
    for (const auto& [age, mass] : atoms_) {
        if (age == 0.0) {
            if (y > 0.0) acc += mass; // age-0 mass sits at 0+
        } else if (age <= y) {
            acc += mass;
        } else {
            break;
        }
    }
    if (y >= horizon_ + 1.0) acc += mass_r_;
    return acc;
}

double TypeDistribution::generalized_inverse(double x) const {
    if (x < 0.0 || x >= 1.0) throw std::domain_error("generalized_inverse: x must lie in [0,1)");
    double acc = mass_s_;
    if (x < acc) return -1.0;
    for (const auto& [age, mass] : atoms_) {
        acc += mass;
        if (x < acc) return age;
    }
    return horizon_ + 1.0;
}

DistributionView TypeDistribution::view() const {
    DistributionView v;
    v.t = t_;
    v.p_s = mass_s_;
    v.p_i = p_i();
    v.p_r = mass_r_;
    v.ctx = this;
    v.cdf_fn = [](const DistributionView& self, double y) {
        return static_cast<const TypeDistribution*>(self.ctx)->cdf(y);
    };
    return v;
}

StepCdf to_step_cdf(const TypeDistribution& d) {
    StepCdf s;
    double acc = 0.0;
    auto push = [&](double x, double mass) {
        acc += mass;
        if (!s.x.empty() && s.x.back() == x)
            s.value.back() = acc;
        else {
            s.x.push_back(x);
            s.value.push_back(acc);
        }
    };
    if (d.p_s() > 0.0) push(-1.0, d.p_s());
    for (const auto& [age, mass] : d.infected_atoms()) push(age, mass);
    if (d.p_r() > 0.0) push(d.horizon() + 1.0, d.p_r());
    for (std::size_t i = 1; i < s.value.size(); ++i)
        if (s.value[i] < s.value[i - 1]) throw std::invalid_argument("non-monotone CDF");
    return s;
}

double StepCdf::at(double q) const {
    auto it = std::upper_bound(x.begin(), x.end(), q);
    if (it == x.begin()) return 0.0;
    return value[static_cast<std::size_t>(it - x.begin()) - 1];
}

double StepCdf::left_limit(double q) const {
    auto it = std::lower_bound(x.begin(), x.end(), q);
    if (it == x.begin()) return 0.0;
    return value[static_cast<std::size_t>(it - x.begin()) - 1];
}

namespace {

// F(x-eps)-eps <= G(x) <= F(x+eps)+eps for all x. For step CDFs it is enough
// to test at the jump points of G (right values) and just left of the shifted
// jump points of F (left limits), in both directions.
bool sandwich_holds(const StepCdf& f, const StepCdf& g, double eps) {
    auto upper_ok = [&](const StepCdf& a, const StepCdf& b) {
        // b(x) <= a(x+eps)+eps for all x
        for (std::size_t i = 0; i < b.x.size(); ++i)
            if (b.value[i] > a.at(b.x[i] + eps) + eps + 1e-15) return false;
        for (double jx : a.x)
            if (b.left_limit(jx - eps) > a.left_limit(jx) + eps + 1e-15) return false;
        return true;
    };
    return upper_ok(f, g) && upper_ok(g, f);
}

} // namespace

double levy_distance(const StepCdf& f, const StepCdf& g) {
    // eps = 1 always satisfies the sandwich for sub-probability CDFs
    if (sandwich_holds(f, g, 0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (sandwich_holds(f, g, mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double levy_distance(const TypeDistribution& f, const TypeDistribution& g) {
    return levy_distance(to_step_cdf(f), to_step_cdf(g));
}

} // namespace coevo
