#ifndef COEVO_SIMULATOR_HPP
#define COEVO_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "coevo/config.hpp"
#include "coevo/graph_state.hpp"
#include "coevo/kernels.hpp"
#include "coevo/limit_solver.hpp"

namespace coevo {

struct Trajectory {
    std::vector<double> time;
    std::vector<int> count_s, count_i, count_r; // exact vertex counts
    std::vector<double> p_s, p_i, p_r, phi;
    std::vector<double> rho_ss, rho_si, rho_ii, rho_other; // active edges / all pairs
    std::uint64_t infections = 0;
    std::uint64_t recoveries = 0;
    std::uint64_t edge_flips = 0;
    std::uint64_t events = 0;
};

struct SnapshotRequest {
    std::vector<double> times; // sorted, within [0, T]
};

// Adjacency relabeled type-lexicographically: position a holds the vertex
// with the a-th smallest (type, original index) pair.
struct LabeledSnapshot {
    double time = 0.0;
    int n = 0;
    std::vector<int> order;            // original vertex id per position
    std::vector<double> types;         // type per position, non-decreasing
    std::vector<VertexState> states;   // state per position
    BitMatrix adjacency;
};

struct SimOptions {
    int sample_points = 500;
    std::uint64_t event_budget = 1ull << 31;
    bool keep_final_state = false;
};

struct SimResult {
    Trajectory trajectory;
    std::vector<LabeledSnapshot> snapshots;
    GraphState final_state; // populated when keep_final_state is set
};

// Exact event-driven simulation of the co-evolutionary process.
SimResult simulate(const ScenarioConfig& config, const KernelSet& kernels, std::uint64_t seed,
                   const SnapshotRequest& snapshots = {}, const SimOptions& options = {});

// Mimicking process: identical edge dynamics driven by the limiting type
// distribution, susceptibles infected at the deterministic rate lambda J*(t).
SimResult simulate_mimicking(const ScenarioConfig& config, const KernelSet& kernels,
                             const LimitSolution& limit, std::uint64_t seed,
                             const SnapshotRequest& snapshots = {},
                             const SimOptions& options = {});

// Runs `config.replicates` independent replicates (seed stream r derived from
// base_seed) and hands results to `sink` in replicate order.
void run_ensemble(const ScenarioConfig& config, const KernelSet& kernels,
                  const SnapshotRequest& snapshots, const SimOptions& options,
                  const std::function<void(int, const SimResult&)>& sink,
                  const LimitSolution* mimic = nullptr);

// Per-column ensemble mean and standard deviation over replicate trajectories.
struct EnsembleSummary {
    std::vector<double> time;
    std::vector<double> mean_p_i, std_p_i;
    std::vector<double> mean_p_s, mean_p_r, mean_phi;
};
EnsembleSummary summarize(const std::vector<Trajectory>& trajectories);

// Single-edge Monte Carlo: probability that an edge between two endpoints
// with prescribed state trajectories is active at time t. The independent
// oracle for the solver's eval_H.
struct EndpointPath {
    double infect_time = 1e300;  // never infected when beyond t
    double recover_time = 1e300; // never recovered when beyond t
};

struct OracleResult {
    double estimate = 0.0;
    double ci_halfwidth = 0.0; // 95% normal interval
};

using PiProvider = std::function<double(PairState s, double age_a, double age_b, double time)>;

OracleResult edge_event_probability_oracle(const EndpointPath& a, const EndpointPath& b, double t,
                                           double p0, double gamma, const PiProvider& pi_at,
                                           std::uint64_t seed, int samples);

// pi provider reading interpolated kernel values from a solved limit
PiProvider pi_provider_from_limit(const LimitSolution& limit);

} // namespace coevo

#endif
