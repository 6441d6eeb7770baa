#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coevo/analysis.hpp"
#include "coevo/config.hpp"
#include "coevo/distribution.hpp"
#include "coevo/graphon.hpp"
#include "coevo/io.hpp"
#include "coevo/kernels.hpp"
#include "coevo/limit_solver.hpp"
#include "coevo/simulator.hpp"

namespace fs = std::filesystem;
using namespace coevo;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> steps;
    std::optional<int> resolution;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "scenario config file")->required();
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_option("--seed", a.seed, "override base seed");
    cmd->add_option("--steps", a.steps, "override solver step count");
    cmd->add_option("--resolution", a.resolution, "override graphon resolution");
}

ScenarioConfig load(const CommonArgs& a) {
    ScenarioConfig cfg = parse_config_file(a.config_path);
    if (a.seed) cfg.base_seed = *a.seed;
    if (a.steps) cfg.n_steps = *a.steps;
    if (a.resolution) cfg.graphon_resolution = *a.resolution;
    cfg.validate();
    return cfg;
}

std::string join(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

int cmd_solve(const CommonArgs& args) {
    ScenarioConfig cfg = load(args);
    RunManifest manifest("solve", read_text_file(args.config_path), cfg.base_seed);
    LimitSolution sol = solve(cfg);

    std::string traj = join(args.out_dir, "solution.csv");
    write_solution_csv(sol, traj);
    manifest.record(traj);
    std::string cohorts = join(args.out_dir, "cohorts.csv");
    write_cohorts_csv(sol, cohorts);
    manifest.record(cohorts);
    std::string summary = join(args.out_dir, "summary.json");
    write_summary_json(summarize_epidemic(cfg, sol.kernels, sol), summary);
    manifest.record(summary);
    manifest.set_metric("n_steps", cfg.n_steps);
    manifest.write(join(args.out_dir, "manifest.json"));
    return 0;
}

int cmd_simulate(const CommonArgs& args, int replicates_flag, const std::vector<double>& snaps,
                 std::uint64_t event_budget) {
    ScenarioConfig cfg = load(args);
    if (replicates_flag > 0) cfg.replicates = replicates_flag;
    RunManifest manifest("simulate", read_text_file(args.config_path), cfg.base_seed);
    KernelSet kernels = KernelSet::from_spec(cfg.kernel);

    SnapshotRequest req;
    req.times = snaps;
    std::sort(req.times.begin(), req.times.end());

    SimOptions options;
    if (event_budget > 0) options.event_budget = event_budget;

    std::vector<Trajectory> trajectories(cfg.replicates);
    std::vector<std::string> outputs;
    run_ensemble(cfg, kernels, req, options, [&](int r, const SimResult& res) {
        trajectories[r] = res.trajectory;
        char name[64];
        std::snprintf(name, sizeof name, "trajectory_%03d.csv", r);
        std::string path = join(args.out_dir, name);
        write_trajectory_csv(res.trajectory, path);
        outputs.push_back(path);
        for (std::size_t s = 0; s < res.snapshots.size(); ++s) {
            std::snprintf(name, sizeof name, "snapshot_r%03d_t%zu", r, s);
            std::string base = join(args.out_dir, name);
            write_snapshot_edges(res.snapshots[s], base + ".edges");
            write_snapshot_vertices(res.snapshots[s], base + ".vertices");
            write_graphon_pgm(empirical_graphon(res.snapshots[s]), base + "_empirical.pgm");
            outputs.push_back(base + ".edges");
            outputs.push_back(base + ".vertices");
            outputs.push_back(base + "_empirical.pgm");
        }
    });
    std::string ens = join(args.out_dir, "ensemble.csv");
    write_ensemble_csv(summarize(trajectories), ens);
    outputs.push_back(ens);

    std::uint64_t events = 0;
    for (const auto& tr : trajectories) events += tr.events;
    for (const auto& p : outputs) manifest.record(p);
    manifest.set_metric("replicates", cfg.replicates);
    manifest.set_metric("events", static_cast<double>(events));
    manifest.write(join(args.out_dir, "manifest.json"));
    return 0;
}

int cmd_compare(const CommonArgs& args, std::vector<int> n_list, int replicates_flag,
                std::vector<double> times) {
    ScenarioConfig cfg = load(args);
    if (replicates_flag > 0) cfg.replicates = replicates_flag;
    if (times.empty()) times = {cfg.horizon_T};
    std::sort(times.begin(), times.end());
    if (n_list.empty()) n_list = {cfg.n_vertices};
    RunManifest manifest("compare", read_text_file(args.config_path), cfg.base_seed);
    KernelSet kernels = KernelSet::from_spec(cfg.kernel);
    LimitSolution sol = solve(cfg, kernels);

    const int coarse = 20;
    std::vector<Graphon> limit_coarse;
    std::vector<StepCdf> limit_cdf;
    for (double t : times) {
        limit_coarse.push_back(coarsen(limiting_graphon(sol, t, 100), coarse));
        limit_cdf.push_back(to_step_cdf(sol.type_distribution(t)));
    }

    std::string table = join(args.out_dir, "compare.csv");
    std::FILE* f = std::fopen(table.c_str(), "w");
    if (!f) throw ResourceError("cannot open " + table + " for writing");
    std::fprintf(f, "n,t,levy,graphon_l1,cut_lower,cut_upper\n");

    for (int n : n_list) {
        ScenarioConfig c = cfg;
        c.n_vertices = n;
        SnapshotRequest req;
        req.times = times;
        std::vector<double> levy(times.size(), 0.0), l1(times.size(), 0.0);
        std::vector<double> cl(times.size(), 0.0), cu(times.size(), 0.0);
        run_ensemble(c, kernels, req, SimOptions{}, [&](int, const SimResult& res) {
            for (std::size_t s = 0; s < times.size(); ++s) {
                const LabeledSnapshot& snap = res.snapshots[s];
                TypeDistribution emp(snap.time, c.horizon_T);
                double w = 1.0 / snap.n;
                double ns = 0, nr = 0;
                for (int i = 0; i < snap.n; ++i) {
                    if (snap.states[i] == VertexState::S)
                        ns += w;
                    else if (snap.states[i] == VertexState::R)
                        nr += w;
                    else
                        emp.add_infected_atom(snap.types[i], w);
                }
                emp.set_susceptible_mass(ns);
                emp.set_recovered_mass(nr);
                emp.finalize();
                levy[s] += levy_distance(to_step_cdf(emp), limit_cdf[s]);
                Graphon ge = coarsen_to_common(empirical_graphon(snap), coarse);
                l1[s] += l1_distance(ge, limit_coarse[s]);
                CutNormBounds cb = cut_norm_estimate(ge, limit_coarse[s]);
                cl[s] += cb.lower;
                cu[s] += cb.upper;
            }
        });
        for (std::size_t s = 0; s < times.size(); ++s)
            std::fprintf(f, "%d,%.9g,%.9g,%.9g,%.9g,%.9g\n", n, times[s],
                         levy[s] / c.replicates, l1[s] / c.replicates, cl[s] / c.replicates,
                         cu[s] / c.replicates);
    }
    std::fclose(f);
    if (n_list.size() < 2) std::fprintf(stderr, "warning: single n, no trend to check\n");
    manifest.record(table);
    manifest.write(join(args.out_dir, "manifest.json"));
    return 0;
}

int cmd_analyze(const CommonArgs& args, const std::vector<double>& gammas) {
    ScenarioConfig cfg = load(args);
    RunManifest manifest("analyze", read_text_file(args.config_path), cfg.base_seed);
    KernelSet kernels = KernelSet::from_spec(cfg.kernel);
    if (!gammas.empty() && !kernels.age_only(cfg.p0))
        throw ConfigError(
            "analyze --gammas: the reproduction-number sweep requires a kernel "
            "without global feedback (pi_SS == p0 and age-only pi_SI)");

    LimitSolution sol = solve(cfg, kernels);
    std::string summary = join(args.out_dir, "summary.json");
    write_summary_json(summarize_epidemic(cfg, kernels, sol), summary);
    manifest.record(summary);
    if (!gammas.empty()) {
        std::string sweep = join(args.out_dir, "sweep.csv");
        write_sweep_csv(gamma_sweep(cfg, kernels, gammas), sweep);
        manifest.record(sweep);
    }
    manifest.write(join(args.out_dir, "manifest.json"));
    return 0;
}

int cmd_graphon(const CommonArgs& args, const std::vector<double>& times) {
    ScenarioConfig cfg = load(args);
    RunManifest manifest("graphon", read_text_file(args.config_path), cfg.base_seed);
    LimitSolution sol = solve(cfg);
    std::vector<double> ts = times.empty() ? std::vector<double>{cfg.horizon_T} : times;
    for (std::size_t s = 0; s < ts.size(); ++s) {
        Graphon g = limiting_graphon(sol, ts[s], cfg.graphon_resolution);
        char name[64];
        std::snprintf(name, sizeof name, "graphon_t%zu_limiting", s);
        std::string base = join(args.out_dir, name);
        write_graphon_csv(g, base + ".csv");
        write_graphon_pgm(g, base + ".pgm");
        manifest.record(base + ".csv");
        manifest.record(base + ".pgm");
    }
    manifest.write(join(args.out_dir, "manifest.json"));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"co-evolutionary SIR engine: exact simulation, deterministic limit, convergence"};
    app.require_subcommand(1);

    CommonArgs a_solve, a_sim, a_cmp, a_ana, a_gr;
    int replicates = 0;
    std::vector<double> snaps, times, gammas;
    std::vector<int> n_list;

    CLI::App* solve_cmd = app.add_subcommand("solve", "solve the deterministic limit");
    add_common(solve_cmd, a_solve);

    CLI::App* sim_cmd = app.add_subcommand("simulate", "run stochastic replicates");
    add_common(sim_cmd, a_sim);
    sim_cmd->add_option("--replicates", replicates, "override replicate count");
    sim_cmd->add_option("--snapshots", snaps, "snapshot times")->delimiter(',');
    std::uint64_t event_budget = 0;
    sim_cmd->add_option("--event-budget", event_budget, "abort after this many events per replicate");

    CLI::App* cmp_cmd = app.add_subcommand("compare", "simulation-vs-limit distances");
    add_common(cmp_cmd, a_cmp);
    cmp_cmd->add_option("--n-list", n_list, "population sizes")->delimiter(',');
    cmp_cmd->add_option("--replicates", replicates, "override replicate count");
    cmp_cmd->add_option("--times", times, "comparison times")->delimiter(',');

    CLI::App* ana_cmd = app.add_subcommand("analyze", "epidemic summaries and gamma sweep");
    add_common(ana_cmd, a_ana);
    ana_cmd->add_option("--gammas", gammas, "gamma sweep values")->delimiter(',');

    CLI::App* gr_cmd = app.add_subcommand("graphon", "export limiting graphons");
    add_common(gr_cmd, a_gr);
    gr_cmd->add_option("--times", times, "graphon times")->delimiter(',');

    try {
        app.parse(argc, argv);
        if (solve_cmd->parsed()) return cmd_solve(a_solve);
        if (sim_cmd->parsed()) return cmd_simulate(a_sim, replicates, snaps, event_budget);
        if (cmp_cmd->parsed()) return cmd_compare(a_cmp, n_list, replicates, times);
        if (ana_cmd->parsed()) return cmd_analyze(a_ana, gammas);
        if (gr_cmd->parsed()) return cmd_graphon(a_gr, times);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const ResourceError& e) {
        std::fprintf(stderr, "resource error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
