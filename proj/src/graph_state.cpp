#include "coevo/graph_state.hpp"

#include <cmath>
#include <limits>

#include "coevo/rng.hpp"

namespace coevo {

double GraphState::vertex_type(int i) const {
    switch (states[i]) {
        case VertexState::S:
            return -1.0;
        case VertexState::I:
            return clock - infection_times[i];
        case VertexState::R:
            return horizon_T + 1.0;
    }
    return -1.0;
}

GraphState init_state(const ScenarioConfig& config, std::uint64_t seed) {
    if (config.n_vertices < 2) throw ConfigError("init_state: n_vertices must be >= 2");
    const int n = config.n_vertices;
    GraphState st;
    st.n = n;
    st.horizon_T = config.horizon_T;
    st.states.assign(n, VertexState::S);
    st.infection_times.assign(n, std::numeric_limits<double>::quiet_NaN());
    st.adjacency = BitMatrix(n);
    st.static_flags = BitMatrix(n);

    Rng rng(derive_stream_seed(seed, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(config.p0)) st.adjacency.set_sym(i, j, true);

    for (int i = 0; i < n; ++i) {
        if (rng.bernoulli(config.q0)) {
            st.states[i] = VertexState::I;
            st.infection_times[i] = 0.0;
            st.inf_times.push_back(0.0);
            st.inf_vertex.push_back(i);
            st.inf_alive.push_back(1);
            ++st.n_i;
        } else {
            ++st.n_s;
        }
    }
    return st;
}

TypeDistribution empirical_type_distribution(const GraphState& state) {
    TypeDistribution d(state.clock, state.horizon_T);
    d.set_susceptible_mass(static_cast<double>(state.n_s) / state.n);
    d.set_recovered_mass(static_cast<double>(state.n_r) / state.n);
    const double w = 1.0 / state.n;
    for (int i = 0; i < state.n; ++i)
        if (state.states[i] == VertexState::I)
            d.add_infected_atom(state.clock - state.infection_times[i], w);
    d.finalize();
    return d;
}

std::string check_state_invariants(const GraphState& st) {
    const int n = st.n;
    int ns = 0, ni = 0, nr = 0;
    for (int i = 0; i < n; ++i) {
        switch (st.states[i]) {
            case VertexState::S: ++ns; break;
            case VertexState::I: ++ni; break;
            case VertexState::R: ++nr; break;
        }
    }
    if (ns != st.n_s || ni != st.n_i || nr != st.n_r) return "counts do not match states";
    for (int i = 0; i < n; ++i) {
        if (st.adjacency.get(i, i) || st.static_flags.get(i, i)) return "nonzero diagonal";
        for (int j = i + 1; j < n; ++j) {
            if (st.adjacency.get(i, j) != st.adjacency.get(j, i)) return "adjacency not symmetric";
            if (st.static_flags.get(i, j) != st.static_flags.get(j, i))
                return "static flags not symmetric";
            bool any_r = st.states[i] == VertexState::R || st.states[j] == VertexState::R;
            if (st.static_flags.get(i, j) != any_r)
                return "static flag disagrees with recovered endpoints";
        }
    }
    for (int i = 0; i < n; ++i) {
        if (st.states[i] == VertexState::I) {
            double age = st.clock - st.infection_times[i];
            if (!(age >= 0.0 && age <= st.clock + 1e-12)) return "infection age out of range";
        }
    }
    int alive = 0;
    for (std::size_t e = 0; e < st.inf_times.size(); ++e) {
        if (e > 0 && st.inf_times[e] < st.inf_times[e - 1]) return "infected index out of order";
        if (st.inf_alive[e]) {
            ++alive;
            if (st.states[st.inf_vertex[e]] != VertexState::I) return "stale infected index entry";
        }
    }
    if (alive != st.n_i) return "infected index does not cover the infected set";
    return "";
}

} // namespace coevo
