#ifndef COEVO_DISTRIBUTION_HPP
#define COEVO_DISTRIBUTION_HPP

#include <utility>
#include <vector>

namespace coevo {

// Read-only query surface over a type distribution at a fixed time.
// Kernels see only this, never the cohort internals.
struct DistributionView {
    double t = 0.0;
    double p_s = 1.0;
    double p_i = 0.0;
    double p_r = 0.0;

    // Precomputed phi for one window length (the hot path in the simulator
    // and solver); other windows go through cdf_fn.
    double phi_hint_a = -1.0;
    double phi_hint = 0.0;

    const void* ctx = nullptr;
    int aux = 0; // context-defined (e.g. solver step index)
    double (*cdf_fn)(const DistributionView& self, double y) = nullptr;

    double cdf(double y) const;
    // mass of infected with infection age in (0, a]; age-0 mass counts
    double phi(double a) const;
};

// Distribution of vertex types at a fixed time t: atom at -1 (susceptible),
// point masses at infection ages in [0, t], atom at T+1 (recovered).
// Mass "at age 0" sits at 0+, so cdf(0) equals the susceptible mass.
class TypeDistribution {
public:
    TypeDistribution() = default;
    TypeDistribution(double t, double horizon_T);

    void set_susceptible_mass(double m) { mass_s_ = m; }
    void set_recovered_mass(double m) { mass_r_ = m; }
    void add_infected_atom(double age, double mass);
    void finalize(); // sorts atoms, merges duplicates, checks invariants

    double t() const { return t_; }
    double horizon() const { return horizon_; }
    double p_s() const { return mass_s_; }
    double p_i() const;
    double p_r() const { return mass_r_; }
    double total_mass() const;

    double cdf(double y) const;
    double phi(double a) const { return cdf(a) - cdf(0.0); }

    // inf{u : F(u) > x}, for x in [0,1); throws std::domain_error for x >= 1
    double generalized_inverse(double x) const;

    const std::vector<std::pair<double, double>>& infected_atoms() const { return atoms_; }

    DistributionView view() const;

private:
    double t_ = 0.0;
    double horizon_ = 0.0;
    double mass_s_ = 0.0;
    double mass_r_ = 0.0;
    std::vector<std::pair<double, double>> atoms_; // (age, mass), sorted
    bool finalized_ = false;
};

// Levy metric between two step CDFs:
//   inf{eps > 0 : F(x-eps)-eps <= G(x) <= F(x+eps)+eps for all x}.
// Computed by bisection on eps with an exact sandwich check at the jump
// points; tolerance 1e-12. Throws std::invalid_argument on non-monotone input.
double levy_distance(const TypeDistribution& f, const TypeDistribution& g);

// Step-CDF form used internally and by tests: sorted jump locations with the
// CDF value attained at (and right of) each jump.
struct StepCdf {
    std::vector<double> x;
    std::vector<double> value; // value[i] = F(x[i]), non-decreasing, last == total mass

    double at(double q) const;       // right-continuous evaluation
    double left_limit(double q) const;
};

StepCdf to_step_cdf(const TypeDistribution& d);
double levy_distance(const StepCdf& f, const StepCdf& g);

} // namespace coevo

#endif
