#ifndef COEVO_CONFIG_HPP
#define COEVO_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace coevo {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class KernelKind { Constant, Behavioral, Table };

// Resampling-probability kernel choice plus its level parameters.
struct KernelSpec {
    KernelKind kind = KernelKind::Constant;

    // constant kernel
    double const_ss = 0.1;
    double const_si = 0.1;
    double const_ii = 0.1;

    // behavioral kernel
    double phi1 = 0.24;
    double phi2 = 0.28;
    double window_a = 1.0;
    double p_ss_norm = 0.9;
    double p_ss_dist = 0.3;
    double p_si_norm = 0.6;
    double p_si_dist = 0.01;
    double pi_ii = 0.3;

    // table kernel: pi_si(u) piecewise linear over (age, value) knots,
    // constant pi_ss and pi_ii
    std::vector<double> si_ages;
    std::vector<double> si_values;
};

struct ScenarioConfig {
    // [model]
    double p0 = 0.1;
    double q0 = 0.05;
    double lambda = 10.0;
    double gamma = 20.0;
    double horizon_T = 5.0;

    // [kernel]
    KernelSpec kernel;

    // [solver]
    int n_steps = 1000;
    int graphon_resolution = 50;

    // [sim]
    int n_vertices = 200;
    std::uint64_t base_seed = 1;
    int replicates = 1;

    void validate() const;
};

// Flat key-value config with [model], [kernel], [solver], [sim] sections.
// Unknown keys and missing required fields are hard errors.
ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

// The parameter set used for the behavioral double-peak illustration.
ScenarioConfig behavioral_reference_config();

} // namespace coevo

#endif
