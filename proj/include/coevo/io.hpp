#ifndef COEVO_IO_HPP
#define COEVO_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "coevo/analysis.hpp"
#include "coevo/limit_solver.hpp"
#include "coevo/simulator.hpp"

namespace coevo {

void write_solution_csv(const LimitSolution& sol, const std::string& path);
void write_cohorts_csv(const LimitSolution& sol, const std::string& path);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
void write_ensemble_csv(const EnsembleSummary& summary, const std::string& path);
void write_snapshot_edges(const LabeledSnapshot& snap, const std::string& path);
void write_snapshot_vertices(const LabeledSnapshot& snap, const std::string& path);
void write_summary_json(const EpidemicSummary& s, const std::string& path);
void write_sweep_csv(const std::vector<GammaSweepRow>& rows, const std::string& path);

// Accumulates the output inventory of one CLI run and writes manifest.json.
class RunManifest {
public:
    RunManifest(std::string subcommand, std::string config_text, std::uint64_t seed);

    void record(const std::string& path); // digest the file as written
    void set_metric(const std::string& key, double value);
    void write(const std::string& path) const;

private:
    std::string subcommand_;
    std::uint64_t config_digest_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::pair<std::string, std::uint64_t>> files_;
    std::vector<std::pair<std::string, double>> metrics_;
};

std::uint64_t fnv1a_digest(const std::string& bytes);
std::string read_text_file(const std::string& path);

} // namespace coevo

#endif
