#ifndef COEVO_GRAPH_STATE_HPP
#define COEVO_GRAPH_STATE_HPP

#include <cstdint>
#include <vector>

#include "coevo/config.hpp"
#include "coevo/distribution.hpp"

namespace coevo {

// Dense symmetric bit matrix with zero diagonal.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(int n)
        : n_(n), words_(static_cast<std::size_t>((n + 63) / 64)), bits_(words_ * n, 0) {}

    int size() const { return n_; }
    std::size_t words_per_row() const { return words_; }

    bool get(int i, int j) const {
        return (bits_[static_cast<std::size_t>(i) * words_ + static_cast<std::size_t>(j) / 64] >>
                (j % 64)) & 1u;
    }
    void set_sym(int i, int j, bool v) {
        set_one(i, j, v);
        set_one(j, i, v);
    }
    const std::uint64_t* row(int i) const { return bits_.data() + static_cast<std::size_t>(i) * words_; }

    bool operator==(const BitMatrix&) const = default;

private:
    void set_one(int i, int j, bool v) {
        auto& w = bits_[static_cast<std::size_t>(i) * words_ + static_cast<std::size_t>(j) / 64];
        std::uint64_t mask = 1ull << (j % 64);
        w = v ? (w | mask) : (w & ~mask);
    }
    int n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

// One bit per vertex, word-aligned for row AND + popcount.
class BitSetN {
public:
    BitSetN() = default;
    explicit BitSetN(int n) : words_(static_cast<std::size_t>((n + 63) / 64), 0) {}
    void set(int i, bool v) {
        std::uint64_t mask = 1ull << (i % 64);
        auto& w = words_[static_cast<std::size_t>(i) / 64];
        w = v ? (w | mask) : (w & ~mask);
    }
    bool get(int i) const { return (words_[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1u; }
    const std::uint64_t* data() const { return words_.data(); }
    std::size_t word_count() const { return words_.size(); }

private:
    std::vector<std::uint64_t> words_;
};

inline int and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    int c = 0;
    for (std::size_t w = 0; w < words; ++w) c += __builtin_popcountll(a[w] & b[w]);
    return c;
}

enum class VertexState : std::uint8_t { S = 0, I = 1, R = 2 };

struct GraphState {
    int n = 0;
    double clock = 0.0;
    double horizon_T = 0.0;
    std::vector<VertexState> states;
    std::vector<double> infection_times; // quiet NaN until first infected
    BitMatrix adjacency;
    BitMatrix static_flags;
    int n_s = 0, n_i = 0, n_r = 0;

    // infected-age index: infection times in insertion (= chronological) order
    std::vector<double> inf_times;
    std::vector<int> inf_vertex;
    std::vector<std::uint8_t> inf_alive;

    // type y_i: -1 for S, infection age for I, T+1 for R
    double vertex_type(int i) const;
};

// iid Bernoulli(p0) edges, iid Bernoulli(q0) initial infections, no recovered.
GraphState init_state(const ScenarioConfig& config, std::uint64_t seed);

TypeDistribution empirical_type_distribution(const GraphState& state);

// Structural invariants: symmetry, zero diagonal, static flags matching
// recovered endpoints, count consistency. Returns an empty string when clean.
std::string check_state_invariants(const GraphState& state);

} // namespace coevo

#endif
