#include "coevo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace coevo {

namespace {

std::FILE* open_out(const std::string& path, const char* mode = "w") {
    std::FILE* f = std::fopen(path.c_str(), mode);
    if (!f) throw ResourceError("cannot open " + path + " for writing");
    return f;
}

} // namespace

void write_solution_csv(const LimitSolution& sol, const std::string& path) {
    std::FILE* f = open_out(path);
    std::fprintf(f, "t,p_S,p_I,p_R,phi,J\n");
    for (int k = 0; k <= sol.n_steps; ++k)
        std::fprintf(f, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", sol.time[k], sol.pS[k], sol.pI[k],
                     sol.pR[k], sol.phi[k], sol.J[k]);
    std::fclose(f);
}

void write_cohorts_csv(const LimitSolution& sol, const std::string& path) {
    std::FILE* f = open_out(path);
    std::fprintf(f, "t_birth,birth_mass,mass_at_T\n");
    for (std::size_t b = 0; b < sol.birth_mass.size(); ++b) {
        double tb = sol.time[b];
        std::fprintf(f, "%.9g,%.9g,%.9g\n", tb, sol.birth_mass[b],
                     sol.birth_mass[b] * std::exp(-(sol.T - tb)));
    }
    std::fclose(f);
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::FILE* f = open_out(path);
    std::fprintf(f, "t,p_S,p_I,p_R,phi,rho_SS,rho_SI,rho_II,rho_other\n");
    for (std::size_t k = 0; k < traj.time.size(); ++k)
        std::fprintf(f, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", traj.time[k],
                     traj.p_s[k], traj.p_i[k], traj.p_r[k], traj.phi[k], traj.rho_ss[k],
                     traj.rho_si[k], traj.rho_ii[k], traj.rho_other[k]);
    std::fclose(f);
}

void write_ensemble_csv(const EnsembleSummary& s, const std::string& path) {
    std::FILE* f = open_out(path);
    std::fprintf(f, "t,mean_p_S,mean_p_I,std_p_I,mean_p_R,mean_phi\n");
    for (std::size_t k = 0; k < s.time.size(); ++k)
        std::fprintf(f, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", s.time[k], s.mean_p_s[k],
                     s.mean_p_i[k], s.std_p_i[k], s.mean_p_r[k], s.mean_phi[k]);
    std::fclose(f);
}

void write_snapshot_edges(const LabeledSnapshot& snap, const std::string& path) {
    std::FILE* f = open_out(path);
    for (int i = 0; i < snap.n; ++i)
        for (int j = i + 1; j < snap.n; ++j)
            if (snap.adjacency.get(i, j)) std::fprintf(f, "%d %d\n", i, j);
    std::fclose(f);
}

void write_snapshot_vertices(const LabeledSnapshot& snap, const std::string& path) {
    std::FILE* f = open_out(path);
    std::fprintf(f, "index state type\n");
    for (int i = 0; i < snap.n; ++i) {
        const char* st = snap.states[i] == VertexState::S   ? "S"
                         : snap.states[i] == VertexState::I ? "I"
                                                            : "R";
        std::fprintf(f, "%d %s %.9g\n", i, st, snap.types[i]);
    }
    std::fclose(f);
}

void write_summary_json(const EpidemicSummary& s, const std::string& path) {
    nlohmann::json j;
    auto num = [](double x) -> nlohmann::json {
        if (std::isnan(x)) return nullptr;
        return x;
    };
    j["r0"] = num(s.r0);
    j["final_size_pS_inf"] = num(s.final_size_ps_inf);
    j["i_max"] = s.i_max;
    j["classical_i_max"] = num(s.classical_i_max);
    j["monotonicity_C"] = num(s.monotonicity_c);
    j["direction"] = s.direction;
    j["peaks"] = nlohmann::json::array();
    for (const auto& p : s.peaks) j["peaks"].push_back({{"t", p.time}, {"height", p.height}});
    j["dips"] = nlohmann::json::array();
    for (const auto& d : s.dips) j["dips"].push_back({{"t", d.time}, {"height", d.height}});
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

void write_sweep_csv(const std::vector<GammaSweepRow>& rows, const std::string& path) {
    std::FILE* f = open_out(path);
    std::fprintf(f, "gamma,r0,final_size,i_max\n");
    for (const auto& r : rows)
        std::fprintf(f, "%.9g,%.9g,%.9g,%.9g\n", r.gamma, r.r0, r.final_size, r.i_max);
    std::fclose(f);
}

std::uint64_t fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunManifest::RunManifest(std::string subcommand, std::string config_text, std::uint64_t seed)
    : subcommand_(std::move(subcommand)), config_digest_(fnv1a_digest(config_text)), seed_(seed) {}

void RunManifest::record(const std::string& path) {
    files_.emplace_back(path, fnv1a_digest(read_text_file(path)));
}

void RunManifest::set_metric(const std::string& key, double value) {
    metrics_.emplace_back(key, value);
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    j["subcommand"] = subcommand_;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_digest_));
    j["config_digest"] = buf;
    j["base_seed"] = seed_;
    j["files"] = nlohmann::json::array();
    for (const auto& [name, digest] : files_) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
        j["files"].push_back({{"path", name}, {"digest", buf}});
    }
    j["metrics"] = nlohmann::json::object();
    for (const auto& [key, value] : metrics_) j["metrics"][key] = value;
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

} // namespace coevo
