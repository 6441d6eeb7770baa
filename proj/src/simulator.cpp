#include "coevo/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "coevo/rng.hpp"

namespace coevo {

namespace {

struct PairRef {
    std::uint32_t a, b;
};

// Simulation engine shared by the co-evolutionary and mimicking processes.
class Engine {
public:
    Engine(const ScenarioConfig& config, const KernelSet& kernels, std::uint64_t seed,
           const LimitSolution* mimic)
        : cfg_(config),
          kernels_(kernels),
          mimic_(mimic),
          rng_(derive_stream_seed(seed, 1)),
          st_(init_state(config, seed)),
          s_mask_(config.n_vertices),
          i_mask_(config.n_vertices),
          inf_entry_(config.n_vertices, -1) {
        if (mimic_ && mimic_->T < cfg_.horizon_T - 1e-12)
            throw ConfigError("mimicking simulation: limit horizon shorter than T");
        const int n = st_.n;
        n_pairs_total_ = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        pairs_.reserve(n_pairs_total_);
        pair_pos_.assign(n_pairs_total_, -1);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                pair_pos_[tri(i, j)] = static_cast<std::int64_t>(pairs_.size());
                pairs_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
            }
        for (int i = 0; i < n; ++i) {
            if (st_.states[i] == VertexState::S) {
                spos_.push_back(i);
                s_mask_.set(i, true);
            } else {
                ipos_.push_back(i);
                i_mask_.set(i, true);
            }
        }
        sidx_.assign(n, -1);
        iidx_.assign(n, -1);
        for (std::size_t k = 0; k < spos_.size(); ++k) sidx_[spos_[k]] = static_cast<int>(k);
        for (std::size_t k = 0; k < ipos_.size(); ++k) iidx_[ipos_[k]] = static_cast<int>(k);
        for (std::size_t e = 0; e < st_.inf_vertex.size(); ++e) inf_entry_[st_.inf_vertex[e]] = static_cast<int>(e);
        window_count_ = static_cast<long long>(st_.inf_times.size());
        count_edges();
    }

    SimResult run(const SnapshotRequest& snapshots, const SimOptions& options) {
        const double T = cfg_.horizon_T;
        const double gamma = cfg_.gamma;
        const double lambda = cfg_.lambda;

        std::vector<double> sample_times(options.sample_points);
        for (int k = 0; k < options.sample_points; ++k)
            sample_times[k] = T * (k + 1.0) / options.sample_points;
        std::size_t next_sample = 0;
        std::vector<double> snap_times = snapshots.times;
        std::size_t next_snap = 0;

        SimResult res;
        record_sample(res.trajectory, 0.0);
        while (next_snap < snap_times.size() && snap_times[next_snap] <= 0.0) {
            res.snapshots.push_back(take_snapshot(0.0));
            ++next_snap;
        }

        double t = 0.0;
        while (true) {
            double rate_edge = gamma * static_cast<double>(pairs_.size());
            double rate_inf = lambda * st_.n_s;
            double rate_rec = st_.n_i;
            double total = rate_edge + rate_inf + rate_rec;
            double t_next = (total > 0.0) ? t + rng_.exponential(total) : T;

            // flush samples and snapshots that fall before the next event
            double flush_to = std::min(t_next, T);
            while (next_sample < sample_times.size() && sample_times[next_sample] <= flush_to) {
                advance_window(sample_times[next_sample]);
                record_sample(res.trajectory, sample_times[next_sample]);
                ++next_sample;
            }
            while (next_snap < snap_times.size() && snap_times[next_snap] <= flush_to) {
                advance_window(snap_times[next_snap]);
                res.snapshots.push_back(take_snapshot(snap_times[next_snap]));
                ++next_snap;
            }
            if (t_next >= T || total <= 0.0) break;
            t = t_next;
            advance_window(t);

            if (++res.trajectory.events > options.event_budget)
                throw ResourceError("event budget exhausted (cap " +
                                    std::to_string(options.event_budget) + " events)");

            double pick = rng_.uniform() * total;
            if (pick < rate_edge)
                edge_event(t, res.trajectory);
            else if (pick < rate_edge + rate_inf)
                infection_candidate(t, res.trajectory);
            else
                recovery_event(t, res.trajectory);
        }
        st_.clock = T;
        if (options.keep_final_state) res.final_state = st_;
        return res;
    }

private:
    std::uint64_t tri(int i, int j) const {
        // i < j
        std::uint64_t ii = static_cast<std::uint64_t>(i);
        return ii * (2 * static_cast<std::uint64_t>(st_.n) - ii - 1) / 2 +
               (static_cast<std::uint64_t>(j) - ii - 1);
    }

    void count_edges() {
        e_ss_ = e_si_ = e_ii_ = e_other_ = 0;
        for (int i = 0; i < st_.n; ++i) {
            const std::uint64_t* row = st_.adjacency.row(i);
            int ns = and_popcount(row, s_mask_.data(), s_mask_.word_count());
            int ni = and_popcount(row, i_mask_.data(), i_mask_.word_count());
            if (st_.states[i] == VertexState::S) {
                e_ss_ += ns;
                e_si_ += ni;
            } else {
                e_si_ += ns;
                e_ii_ += ni;
            }
        }
        e_ss_ /= 2;
        e_ii_ /= 2;
        e_si_ /= 2;
    }

    void advance_window(double t) {
        st_.clock = t;
        double cut = t - cfg_.kernel.window_a;
        while (window_idx_ < st_.inf_times.size() && st_.inf_times[window_idx_] < cut) {
            if (st_.inf_alive[window_idx_]) --window_count_;
            ++window_idx_;
        }
    }

    double phi_now() const { return static_cast<double>(window_count_) / st_.n; }

    DistributionView make_view() {
        DistributionView v;
        if (mimic_) {
            double t = st_.clock;
            v.t = t;
            v.p_s = mimic_->p_s_at(t);
            v.p_i = mimic_->p_i_at(t);
            v.p_r = 1.0 - v.p_s - v.p_i;
            v.phi_hint_a = cfg_.kernel.window_a;
            v.phi_hint = mimic_->phi_at(t);
            v.ctx = mimic_;
            v.cdf_fn = [](const DistributionView& self, double y) {
                return static_cast<const LimitSolution*>(self.ctx)->eval_F(self.t, y);
            };
            return v;
        }
        v.t = st_.clock;
        v.p_s = static_cast<double>(st_.n_s) / st_.n;
        v.p_i = static_cast<double>(st_.n_i) / st_.n;
        v.p_r = static_cast<double>(st_.n_r) / st_.n;
        v.phi_hint_a = cfg_.kernel.window_a;
        v.phi_hint = phi_now();
        v.ctx = &st_;
        v.cdf_fn = [](const DistributionView& self, double y) {
            return empirical_type_distribution(*static_cast<const GraphState*>(self.ctx)).cdf(y);
        };
        return v;
    }

    void edge_event(double t, Trajectory& traj) {
        std::size_t k = static_cast<std::size_t>(rng_.uniform_index(pairs_.size()));
        int i = static_cast<int>(pairs_[k].a);
        int j = static_cast<int>(pairs_[k].b);
        VertexState si = st_.states[i];
        VertexState sj = st_.states[j];

        DistributionView view = make_view();
        double pi;
        int cls; // 0=SS 1=SI 2=II
        if (si == VertexState::S && sj == VertexState::S) {
            pi = kernels_.pi_ss(view);
            cls = 0;
        } else if (si == VertexState::I && sj == VertexState::I) {
            pi = kernels_.pi_ii(t - st_.infection_times[i], t - st_.infection_times[j], view);
            cls = 2;
        } else {
            int inf = (si == VertexState::I) ? i : j;
            pi = kernels_.pi_si(t - st_.infection_times[inf], view);
            cls = 1;
        }
        bool now = rng_.bernoulli(pi);
        bool was = st_.adjacency.get(i, j);
        if (now != was) {
            st_.adjacency.set_sym(i, j, now);
            ++traj.edge_flips;
            int d = now ? 1 : -1;
            if (cls == 0)
                e_ss_ += d;
            else if (cls == 1)
                e_si_ += d;
            else
                e_ii_ += d;
        }
    }

    void infection_candidate(double t, Trajectory& traj) {
        int idx = static_cast<int>(rng_.uniform_index(spos_.size()));
        int vi = spos_[idx];
        double accept;
        if (mimic_) {
            accept = std::min(mimic_->j_at(t), 1.0);
        } else {
            if (kernels_.identity_infectivity) {
                int cnt = and_popcount(st_.adjacency.row(vi), i_mask_.data(), i_mask_.word_count());
                accept = static_cast<double>(cnt) / st_.n;
            } else {
                double sum = 0.0;
                for (int e = 0; e < static_cast<int>(st_.inf_vertex.size()); ++e)
                    if (st_.inf_alive[e] && st_.adjacency.get(vi, st_.inf_vertex[e]))
                        sum += kernels_.infectivity(t - st_.inf_times[e]);
                accept = sum / st_.n;
            }
            if (accept > static_cast<double>(st_.n_i) / st_.n + 1e-12)
                throw NumericalError("infection acceptance probability exceeds n_I/n");
        }
        if (!rng_.bernoulli(accept)) return;

        // S -> I
        ++traj.infections;
        st_.states[vi] = VertexState::I;
        st_.infection_times[vi] = t;
        --st_.n_s;
        ++st_.n_i;
        int last = spos_.back();
        spos_[idx] = last;
        sidx_[last] = idx;
        spos_.pop_back();
        sidx_[vi] = -1;
        iidx_[vi] = static_cast<int>(ipos_.size());
        ipos_.push_back(vi);
        inf_entry_[vi] = static_cast<int>(st_.inf_times.size());
        st_.inf_times.push_back(t);
        st_.inf_vertex.push_back(vi);
        st_.inf_alive.push_back(1);
        ++window_count_;
        s_mask_.set(vi, false);
        i_mask_.set(vi, true);

        // reclassify vi's active edges: S-S -> S-I, S-I -> I-I
        const std::uint64_t* row = st_.adjacency.row(vi);
        int ns = and_popcount(row, s_mask_.data(), s_mask_.word_count());
        int ni = and_popcount(row, i_mask_.data(), i_mask_.word_count()); // vi not adjacent to itself
        e_ss_ -= ns;
        e_si_ += ns;
        e_si_ -= ni;
        e_ii_ += ni;
    }

    void recovery_event(double /*t*/, Trajectory& traj) {
        int idx = static_cast<int>(rng_.uniform_index(ipos_.size()));
        int vi = ipos_[idx];
        ++traj.recoveries;

        // remove vi's current active edges from the class counters
        const std::uint64_t* row = st_.adjacency.row(vi);
        int ns = and_popcount(row, s_mask_.data(), s_mask_.word_count());
        int ni = and_popcount(row, i_mask_.data(), i_mask_.word_count()) -
                 (st_.adjacency.get(vi, vi) ? 1 : 0);
        int total = 0;
        for (std::size_t w = 0; w < st_.adjacency.words_per_row(); ++w)
            total += __builtin_popcountll(row[w]);
        e_si_ -= ns;
        e_ii_ -= ni;
        e_other_ -= total - ns - ni;

        st_.states[vi] = VertexState::R;
        --st_.n_i;
        ++st_.n_r;
        int last = ipos_.back();
        ipos_[idx] = last;
        iidx_[last] = idx;
        ipos_.pop_back();
        iidx_[vi] = -1;
        i_mask_.set(vi, false);
        int entry = inf_entry_[vi];
        st_.inf_alive[entry] = 0;
        if (static_cast<std::size_t>(entry) >= window_idx_) --window_count_;

        // resample all incident edges at p0 and freeze the pairs
        int active_new = 0;
        for (int j = 0; j < st_.n; ++j) {
            if (j == vi) continue;
            bool e = rng_.bernoulli(cfg_.p0);
            bool was = st_.adjacency.get(vi, j);
            if (e != was) {
                st_.adjacency.set_sym(vi, j, e);
                ++traj.edge_flips;
            }
            if (e) ++active_new;
            int a = std::min(vi, j), b = std::max(vi, j);
            std::uint64_t tr = tri(a, b);
            std::int64_t pos = pair_pos_[tr];
            if (pos >= 0) {
                PairRef moved = pairs_.back();
                pairs_[static_cast<std::size_t>(pos)] = moved;
                pair_pos_[tri(static_cast<int>(moved.a), static_cast<int>(moved.b))] = pos;
                pairs_.pop_back();
                pair_pos_[tr] = -1;
                st_.static_flags.set_sym(a, b, true);
            }
        }
        e_other_ += active_new;
    }

    void record_sample(Trajectory& traj, double t) {
        traj.time.push_back(t);
        traj.count_s.push_back(st_.n_s);
        traj.count_i.push_back(st_.n_i);
        traj.count_r.push_back(st_.n_r);
        const double n = st_.n;
        traj.p_s.push_back(st_.n_s / n);
        traj.p_i.push_back(st_.n_i / n);
        traj.p_r.push_back(st_.n_r / n);
        traj.phi.push_back(phi_now());
        const double pairs = static_cast<double>(n_pairs_total_);
        traj.rho_ss.push_back(e_ss_ / pairs);
        traj.rho_si.push_back(e_si_ / pairs);
        traj.rho_ii.push_back(e_ii_ / pairs);
        traj.rho_other.push_back(e_other_ / pairs);
    }

    LabeledSnapshot take_snapshot(double t) {
        LabeledSnapshot snap;
        snap.time = t;
        snap.n = st_.n;
        snap.order.resize(st_.n);
        for (int i = 0; i < st_.n; ++i) snap.order[i] = i;
        std::vector<double> type(st_.n);
        for (int i = 0; i < st_.n; ++i) type[i] = st_.vertex_type(i);
        std::sort(snap.order.begin(), snap.order.end(), [&](int a, int b) {
            if (type[a] != type[b]) return type[a] < type[b];
            return a < b; // ties broken by original index, for determinism
        });
        snap.types.resize(st_.n);
        snap.states.resize(st_.n);
        snap.adjacency = BitMatrix(st_.n);
        for (int a = 0; a < st_.n; ++a) {
            snap.types[a] = type[snap.order[a]];
            snap.states[a] = st_.states[snap.order[a]];
        }
        for (int a = 0; a < st_.n; ++a) {
            int i = snap.order[a];
            for (int b = a + 1; b < st_.n; ++b)
                if (st_.adjacency.get(i, snap.order[b])) snap.adjacency.set_sym(a, b, true);
        }
        return snap;
    }

    const ScenarioConfig& cfg_;
    const KernelSet& kernels_;
    const LimitSolution* mimic_;
    Rng rng_;
    GraphState st_;

    std::uint64_t n_pairs_total_ = 0;
    std::vector<PairRef> pairs_;          // non-static pairs, compacted
    std::vector<std::int64_t> pair_pos_;  // triangular index -> position or -1
    std::vector<int> spos_, ipos_;        // susceptible / infected vertex lists
    std::vector<int> sidx_, iidx_;        // vertex -> list position
    BitSetN s_mask_, i_mask_;
    std::vector<int> inf_entry_;          // vertex -> infected-index entry

    long long e_ss_ = 0, e_si_ = 0, e_ii_ = 0, e_other_ = 0;
    std::size_t window_idx_ = 0; // first infected-index entry inside the phi window
    long long window_count_ = 0; // alive entries at or past window_idx_
};

} // namespace

SimResult simulate(const ScenarioConfig& config, const KernelSet& kernels, std::uint64_t seed,
                   const SnapshotRequest& snapshots, const SimOptions& options) {
    config.validate();
    Engine engine(config, kernels, seed, nullptr);
    return engine.run(snapshots, options);
}

SimResult simulate_mimicking(const ScenarioConfig& config, const KernelSet& kernels,
                             const LimitSolution& limit, std::uint64_t seed,
                             const SnapshotRequest& snapshots, const SimOptions& options) {
    config.validate();
    Engine engine(config, kernels, seed, &limit);
    return engine.run(snapshots, options);
}

void run_ensemble(const ScenarioConfig& config, const KernelSet& kernels,
                  const SnapshotRequest& snapshots, const SimOptions& options,
                  const std::function<void(int, const SimResult&)>& sink,
                  const LimitSolution* mimic) {
    int threads = 1;
    if (const char* env = std::getenv("COEVO_THREADS")) threads = std::max(1, std::atoi(env));
    const int reps = config.replicates;

    auto run_one = [&](int r) {
        std::uint64_t seed = derive_stream_seed(config.base_seed, 1000 + static_cast<std::uint64_t>(r));
        return mimic ? simulate_mimicking(config, kernels, *mimic, seed, snapshots, options)
                     : simulate(config, kernels, seed, snapshots, options);
    };

    if (threads <= 1 || reps == 1) {
        for (int r = 0; r < reps; ++r) {
            SimResult res = run_one(r);
            if (sink) sink(r, res);
        }
        return;
    }

    std::vector<SimResult> results(reps);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min(threads, reps); ++w)
        pool.emplace_back([&] {
            int r;
            while ((r = next.fetch_add(1)) < reps) results[r] = run_one(r);
        });
    for (auto& th : pool) th.join();
    // deterministic merge order regardless of thread schedule
    if (sink)
        for (int r = 0; r < reps; ++r) sink(r, results[r]);
}

EnsembleSummary summarize(const std::vector<Trajectory>& trajectories) {
    EnsembleSummary s;
    if (trajectories.empty()) return s;
    const std::size_t m = trajectories[0].time.size();
    const double reps = static_cast<double>(trajectories.size());
    s.time = trajectories[0].time;
    s.mean_p_i.assign(m, 0.0);
    s.std_p_i.assign(m, 0.0);
    s.mean_p_s.assign(m, 0.0);
    s.mean_p_r.assign(m, 0.0);
    s.mean_phi.assign(m, 0.0);
    for (const auto& tr : trajectories)
        for (std::size_t k = 0; k < m; ++k) {
            s.mean_p_i[k] += tr.p_i[k];
            s.mean_p_s[k] += tr.p_s[k];
            s.mean_p_r[k] += tr.p_r[k];
            s.mean_phi[k] += tr.phi[k];
        }
    for (std::size_t k = 0; k < m; ++k) {
        s.mean_p_i[k] /= reps;
        s.mean_p_s[k] /= reps;
        s.mean_p_r[k] /= reps;
        s.mean_phi[k] /= reps;
    }
    for (const auto& tr : trajectories)
        for (std::size_t k = 0; k < m; ++k) {
            double d = tr.p_i[k] - s.mean_p_i[k];
            s.std_p_i[k] += d * d;
        }
    for (std::size_t k = 0; k < m; ++k)
        s.std_p_i[k] = std::sqrt(s.std_p_i[k] / std::max(1.0, reps - 1.0));
    return s;
}

OracleResult edge_event_probability_oracle(const EndpointPath& a, const EndpointPath& b, double t,
                                           double p0, double gamma, const PiProvider& pi_at,
                                           std::uint64_t seed, int samples) {
    Rng rng(derive_stream_seed(seed, 7));
    auto state_at = [](const EndpointPath& e, double s) -> VertexState {
        if (s < e.infect_time) return VertexState::S;
        if (s < e.recover_time) return VertexState::I;
        return VertexState::R;
    };
    double first_rec = std::min(a.recover_time, b.recover_time);
    double second_rec = std::max(a.recover_time, b.recover_time);

    long long hits = 0;
    for (int it = 0; it < samples; ++it) {
        bool active = rng.bernoulli(p0);
        double clock_end = std::min(t, first_rec);
        if (gamma > 0.0) {
            double s = rng.exponential(gamma);
            while (s < clock_end) {
                VertexState sa = state_at(a, s);
                VertexState sb = state_at(b, s);
                double pi;
                if (sa == VertexState::S && sb == VertexState::S) {
                    pi = pi_at(PairState::SS, 0.0, 0.0, s);
                } else if (sa == VertexState::I && sb == VertexState::I) {
                    double age_a = s - a.infect_time;
                    double age_b = s - b.infect_time;
                    pi = pi_at(PairState::II, std::max(age_a, age_b), std::min(age_a, age_b), s);
                } else {
                    double age = (sa == VertexState::I) ? s - a.infect_time : s - b.infect_time;
                    pi = pi_at(PairState::SI, age, 0.0, s);
                }
                active = rng.bernoulli(pi);
                s += rng.exponential(gamma);
            }
        }
        if (first_rec <= t) active = rng.bernoulli(p0);
        if (second_rec <= t) active = rng.bernoulli(p0);
        if (active) ++hits;
    }
    OracleResult res;
    res.estimate = static_cast<double>(hits) / samples;
    res.ci_halfwidth = 1.96 * std::sqrt(std::max(res.estimate * (1.0 - res.estimate), 1e-12) / samples);
    return res;
}

PiProvider pi_provider_from_limit(const LimitSolution& limit) {
    return [&limit](PairState s, double age_a, double age_b, double time) {
        switch (s) {
            case PairState::SS:
                return limit.pi_ss_at(time);
            case PairState::SI:
                return limit.pi_si_at(time, age_a);
            case PairState::II:
                return limit.pi_ii_at(time, age_a, age_b);
        }
        return 0.0;
    };
}

} // namespace coevo
