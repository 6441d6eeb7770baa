#include "coevo/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "coevo/rng.hpp"

namespace coevo {

Graphon empirical_graphon(const LabeledSnapshot& snapshot) {
    const int n = snapshot.n;
    if (n <= 0 || static_cast<int>(snapshot.order.size()) != n)
        throw ConfigError("empirical_graphon: snapshot is not labeled");
    for (int a = 1; a < n; ++a)
        if (snapshot.types[a] < snapshot.types[a - 1] - 1e-12)
            throw ConfigError("empirical_graphon: snapshot labeling is not type-sorted");
    Graphon g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (snapshot.adjacency.get(i, j)) g.set(i, j, 1.0);
    return g;
}

Graphon limiting_graphon(const LimitSolution& solution, double t, int resolution) {
    Graphon g(resolution);
    std::vector<double> inv(resolution);
    for (int i = 0; i < resolution; ++i)
        inv[i] = solution.generalized_inverse(t, (i + 0.5) / resolution);
    for (int i = 0; i < resolution; ++i)
        for (int j = i; j < resolution; ++j)
            g.set(i, j, solution.eval_H(t, inv[i], inv[j]));
    return g;
}

Graphon coarsen(const Graphon& g, int coarse_resolution) {
    const int r = g.resolution;
    const int c = coarse_resolution;
    if (c <= 0 || r % c != 0)
        throw std::domain_error("coarsen: target resolution must divide the source resolution");
    const int block = r / c;
    Graphon out(c);
    const double inv = 1.0 / (static_cast<double>(block) * block);
    for (int i = 0; i < c; ++i)
        for (int j = i; j < c; ++j) {
            double sum = 0.0;
            for (int a = i * block; a < (i + 1) * block; ++a)
                for (int b = j * block; b < (j + 1) * block; ++b) sum += g.at(a, b);
            out.set(i, j, sum * inv);
        }
    return out;
}

Graphon coarsen_to_common(const Graphon& g, int coarse_resolution) {
    const int n = g.resolution;
    const int c = coarse_resolution;
    if (c <= 0 || c > n) throw std::domain_error("coarsen_to_common: bad target resolution");
    Graphon out(c);
    std::vector<double> sums(static_cast<std::size_t>(c) * c, 0.0);
    std::vector<double> counts(static_cast<std::size_t>(c) * c, 0.0);
    std::vector<int> cell(n);
    for (int i = 0; i < n; ++i)
        cell[i] = std::min(static_cast<int>(static_cast<long long>(i) * c / n), c - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::size_t k = static_cast<std::size_t>(cell[i]) * c + cell[j];
            sums[k] += g.at(i, j);
            counts[k] += 1.0;
        }
    for (std::size_t k = 0; k < sums.size(); ++k)
        out.values[k] = counts[k] > 0.0 ? sums[k] / counts[k] : 0.0;
    return out;
}

namespace {

Graphon refine(const Graphon& g, int fine_resolution) {
    const int k = fine_resolution / g.resolution;
    Graphon out(fine_resolution);
    for (int i = 0; i < fine_resolution; ++i)
        for (int j = 0; j < fine_resolution; ++j)
            out.values[static_cast<std::size_t>(i) * fine_resolution + j] = g.at(i / k, j / k);
    return out;
}

} // namespace

double l1_distance(const Graphon& g1, const Graphon& g2) {
    if (g1.resolution != g2.resolution) {
        long long l = std::lcm<long long>(g1.resolution, g2.resolution);
        if (l > 20000)
            throw std::domain_error("l1_distance: no common refinement within budget");
        return l1_distance(refine(g1, static_cast<int>(l)), refine(g2, static_cast<int>(l)));
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < g1.values.size(); ++k) sum += std::fabs(g1.values[k] - g2.values[k]);
    return sum / static_cast<double>(g1.values.size());
}

namespace {

// One alternating-maximization pass over block-subset indicators for the
// signed cut value sum_{i in S, j in T} sgn * D_ij; returns the best |value|.
double alternate(const std::vector<double>& diff, int r, std::vector<char>& s,
                 std::vector<char>& t, double sign) {
    std::vector<double> col_sum(r), row_sum(r);
    double best = -1.0;
    for (int iter = 0; iter < 64; ++iter) {
        // optimal S given T
        for (int i = 0; i < r; ++i) {
            double acc = 0.0;
            const double* row = diff.data() + static_cast<std::size_t>(i) * r;
            for (int j = 0; j < r; ++j)
                if (t[j]) acc += row[j];
            row_sum[i] = sign * acc;
            s[i] = row_sum[i] > 0.0;
        }
        // optimal T given S
        for (int j = 0; j < r; ++j) col_sum[j] = 0.0;
        for (int i = 0; i < r; ++i)
            if (s[i]) {
                const double* row = diff.data() + static_cast<std::size_t>(i) * r;
                for (int j = 0; j < r; ++j) col_sum[j] += row[j];
            }
        double value = 0.0;
        for (int j = 0; j < r; ++j) {
            t[j] = sign * col_sum[j] > 0.0;
            if (t[j]) value += sign * col_sum[j];
        }
        if (value <= best + 1e-15) return std::max(value, best);
        best = value;
    }
    return best;
}

} // namespace

CutNormBounds cut_norm_estimate(const Graphon& g1, const Graphon& g2, int random_starts,
                                std::uint64_t seed) {
    if (g1.resolution != g2.resolution)
        throw std::domain_error("cut_norm_estimate: resolutions must match");
    const int r = g1.resolution;
    std::vector<double> diff(g1.values.size());
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = g1.values[k] - g2.values[k];

    double best = 0.0;
    std::vector<char> s(r), t(r);
    auto try_start = [&](const std::vector<char>& t0) {
        for (double sign : {1.0, -1.0}) {
            t = t0;
            best = std::max(best, alternate(diff, r, s, t, sign));
        }
    };

    std::vector<char> all(r, 1), half(r, 0);
    for (int j = 0; j < r / 2; ++j) half[j] = 1;
    try_start(all);
    try_start(half);
    Rng rng(derive_stream_seed(seed, 3));
    std::vector<char> rand_t(r);
    for (int k = 0; k < random_starts; ++k) {
        for (int j = 0; j < r; ++j) rand_t[j] = rng.bernoulli(0.5);
        try_start(rand_t);
    }

    CutNormBounds out;
    out.lower = best / (static_cast<double>(r) * r);
    out.upper = l1_distance(g1, g2);
    out.lower = std::min(out.lower, out.upper); // guard against rounding inversions
    return out;
}

void write_graphon_csv(const Graphon& g, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw ResourceError("cannot open " + path + " for writing");
    for (int i = 0; i < g.resolution; ++i) {
        for (int j = 0; j < g.resolution; ++j)
            std::fprintf(f, j ? ",%.9g" : "%.9g", g.at(i, j));
        std::fputc('\n', f);
    }
    std::fclose(f);
}

void write_graphon_pgm(const Graphon& g, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw ResourceError("cannot open " + path + " for writing");
    std::fprintf(f, "P5\n%d %d\n255\n", g.resolution, g.resolution);
    std::vector<unsigned char> row(g.resolution);
    for (int i = 0; i < g.resolution; ++i) {
        for (int j = 0; j < g.resolution; ++j)
            row[j] = static_cast<unsigned char>(std::lround(255.0 * (1.0 - g.at(i, j))));
        std::fwrite(row.data(), 1, row.size(), f);
    }
    std::fclose(f);
}

} // namespace coevo
