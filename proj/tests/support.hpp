#pragma once

#include <vector>

#include "wormcov/graph.hpp"
#include "wormcov/rng.hpp"

namespace wormcov::testing {

inline IsingInstance single_edge(long p = 2, long q = 1) {
    return IsingInstance::ferromagnetic_uniform(2, {{0, 1}}, p, q);
}

inline IsingInstance triangle(long p = 2, long q = 1) {
    return IsingInstance::ferromagnetic_uniform(3, {{0, 1}, {1, 2}, {0, 2}}, p, q);
}

inline IsingInstance path_graph(int edges, long p = 2, long q = 1) {
    std::vector<Edge> es;
    for (int i = 0; i < edges; ++i) es.push_back(Edge{i, i + 1});
    return IsingInstance::ferromagnetic_uniform(edges + 1, es, p, q);
}

inline IsingInstance cycle_graph(int n, long p = 2, long q = 1) {
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i) es.push_back(Edge{i, (i + 1) % n});
    return IsingInstance::ferromagnetic_uniform(n, es, p, q);
}

inline IsingInstance complete_graph(int n, long p = 2, long q = 1) {
    std::vector<Edge> es;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) es.push_back(Edge{u, v});
    return IsingInstance::ferromagnetic_uniform(n, es, p, q);
}

/// Random connected graph: a random spanning tree plus extra random edges.
inline IsingInstance random_connected(Xoshiro256pp& rng, int n, int extra_edges, long p = 2,
                                      long q = 1) {
    std::vector<Edge> es;
    std::vector<char> present(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
    auto add = [&](int a, int b) {
        const Edge e = make_edge(a, b);
        const size_t key = static_cast<size_t>(e.u) * static_cast<size_t>(n) +
                           static_cast<size_t>(e.v);
        if (present[key]) return false;
        present[key] = 1;
        es.push_back(e);
        return true;
    };
    for (int v = 1; v < n; ++v)
        add(v, static_cast<int>(rng.uniform_below(static_cast<uint32_t>(v))));
    for (int k = 0; k < extra_edges; ++k) {
        const int a = static_cast<int>(rng.uniform_below(static_cast<uint32_t>(n)));
        const int b = static_cast<int>(rng.uniform_below(static_cast<uint32_t>(n)));
        if (a != b) add(a, b);
    }
    return IsingInstance::ferromagnetic_uniform(n, es, p, q);
}

}  // namespace wormcov::testing
