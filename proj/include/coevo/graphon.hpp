#ifndef COEVO_GRAPHON_HPP
#define COEVO_GRAPHON_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coevo/limit_solver.hpp"
#include "coevo/simulator.hpp"

namespace coevo {

// Symmetric step function on [0,1]^2, constant on an r x r grid of cells.
struct Graphon {
    int resolution = 0;
    std::vector<double> values; // row-major, resolution^2 entries in [0,1]

    Graphon() = default;
    explicit Graphon(int r, double fill = 0.0)
        : resolution(r), values(static_cast<std::size_t>(r) * r, fill) {}

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * resolution + j];
    }
    void set(int i, int j, double v) {
        values[static_cast<std::size_t>(i) * resolution + j] = v;
        values[static_cast<std::size_t>(j) * resolution + i] = v;
    }
};

// Step-function graphon of a relabeled adjacency snapshot; {0,1} cells, zero
// diagonal. The snapshot must carry the type-sorted labeling.
Graphon empirical_graphon(const LabeledSnapshot& snapshot);

// Candidate limit h(x,y) = H(t; F^{-1}(x), F^{-1}(y)) sampled at cell centers.
Graphon limiting_graphon(const LimitSolution& solution, double t, int resolution);

// Cell averages onto a divisor resolution.
Graphon coarsen(const Graphon& g, int coarse_resolution);

// Cell averages onto an arbitrary coarse grid (nearest containing cell); used
// when the source resolution (a population size) is not a multiple of the
// target. Agrees with coarsen when it is.
Graphon coarsen_to_common(const Graphon& g, int coarse_resolution);

// Mean absolute cell difference; unequal resolutions are refined to a common
// grid by cell replication when the common refinement is small enough.
double l1_distance(const Graphon& g1, const Graphon& g2);

struct CutNormBounds {
    double lower = 0.0;
    double upper = 0.0;
};

// Bounds on the cut distance between two equal-resolution graphons: lower by
// alternating greedy block-subset search with multistart, upper by L1.
CutNormBounds cut_norm_estimate(const Graphon& g1, const Graphon& g2,
                                int random_starts = 32, std::uint64_t seed = 1234);

void write_graphon_csv(const Graphon& g, const std::string& path);
void write_graphon_pgm(const Graphon& g, const std::string& path);

} // namespace coevo

#endif
