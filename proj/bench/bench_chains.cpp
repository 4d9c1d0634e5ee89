// Throughput comparison of the OpenMP chain ensembles and oracle sweeps
// against their serial reference implementations.

#include <chrono>
#include <cstdio>
#include <vector>

#include "wormcov/oracle.hpp"
#include "wormcov/rng.hpp"
#include "wormcov/worm.hpp"

using namespace wormcov;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

IsingInstance cycle(int n) {
    std::vector<Edge> es;
    for (int i = 0; i < n; ++i) es.push_back(Edge{i, (i + 1) % n});
    return IsingInstance::ferromagnetic_uniform(n, es, 2, 1);
}

IsingInstance complete(int n) {
    std::vector<Edge> es;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) es.push_back(Edge{u, v});
    return IsingInstance::ferromagnetic_uniform(n, es, 2, 1);
}

void bench_ensemble(const char* name, const IsingInstance& g, uint64_t chains,
                    uint64_t steps) {
    const ChainContext ctx =
        make_context(g, lambda_of_beta(g), SubsetWeighting::all_ones(g.vertex_count()));
    const ClassTarget target = ClassTarget::empty();
    const double work = static_cast<double>(chains) * static_cast<double>(steps);

    auto t0 = std::chrono::steady_clock::now();
    const uint64_t serial_hits = run_ensemble_serial(ctx, steps, chains, 7, 0, target);
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const uint64_t parallel_hits = run_ensemble(ctx, steps, chains, 7, 0, target, 0);
    const double parallel_s = seconds_since(t0);

    std::printf("%-10s chains=%-8llu steps=%-6llu serial %7.1f Msteps/s   omp %7.1f Msteps/s"
                "   speedup %.2fx   hits %s\n",
                name, static_cast<unsigned long long>(chains),
                static_cast<unsigned long long>(steps), work / serial_s / 1e6,
                work / parallel_s / 1e6, serial_s / parallel_s,
                serial_hits == parallel_hits ? "equal" : "MISMATCH");
}

void bench_partition(const char* name, const IsingInstance& g) {
    auto t0 = std::chrono::steady_clock::now();
    const Rational serial = ising_partition_serial(g, OracleLimits{24, 24});
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const Rational parallel = ising_partition(g, OracleLimits{24, 24});
    const double parallel_s = seconds_since(t0);

    const double configs = static_cast<double>(1ull << g.vertex_count());
    std::printf("%-10s n=%-2d 2^n sweeps: serial %7.2f Mcfg/s   omp %7.2f Mcfg/s"
                "   speedup %.2fx   values %s\n",
                name, g.vertex_count(), configs / serial_s / 1e6, configs / parallel_s / 1e6,
                serial_s / parallel_s, serial == parallel ? "equal" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("== worm chain ensembles ==\n");
    bench_ensemble("edge", IsingInstance::ferromagnetic_uniform(2, {{0, 1}}, 2, 1), 200000,
                   100);
    bench_ensemble("cycle4", cycle(4), 50000, 500);
    bench_ensemble("cycle8", cycle(8), 20000, 1000);
    bench_ensemble("K5", complete(5), 20000, 1000);

    std::printf("\n== exact partition sweeps ==\n");
    bench_partition("cycle16", cycle(16));
    bench_partition("cycle20", cycle(20));
    Xoshiro256pp rng(5);
    std::vector<Edge> es;
    for (int v = 1; v < 18; ++v)
        es.push_back(make_edge(v, static_cast<Vertex>(rng.uniform_below(static_cast<uint32_t>(v)))));
    for (int k = 0; k < 14; ++k) {
        const Vertex a = static_cast<Vertex>(rng.uniform_below(18));
        const Vertex b = static_cast<Vertex>(rng.uniform_below(18));
        if (a == b) continue;
        bool dup = false;
        for (const Edge& e : es)
            if (e.u == std::min(a, b) && e.v == std::max(a, b)) dup = true;
        if (!dup) es.push_back(make_edge(a, b));
    }
    bench_partition("rand18", IsingInstance::ferromagnetic_uniform(18, es, 2, 1));
    return 0;
}
