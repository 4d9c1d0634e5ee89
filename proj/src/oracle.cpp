#include "wormcov/oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>

namespace wormcov {

namespace {

void check_spin_cap(const IsingInstance& g, const OracleLimits& limits) {
    if (g.vertex_count() > limits.max_spin_vertices || g.vertex_count() > 30)
        throw CapExceeded("oracle: spin enumeration cap exceeded (n = " +
                          std::to_string(g.vertex_count()) + ")");
}

void check_edge_cap(const IsingInstance& g, const OracleLimits& limits) {
    if (g.edge_count() > limits.max_edge_subsets || g.edge_count() > 30)
        throw CapExceeded("oracle: edge-subset enumeration cap exceeded (m = " +
                          std::to_string(g.edge_count()) + ")");
    if (g.vertex_count() > 32)
        throw CapExceeded("oracle: vertex mask cap exceeded");
}

struct FractionParts {
    std::vector<Integer> num;
    std::vector<Integer> den;
    Integer den_product;
};

FractionParts beta_parts(const IsingInstance& g) {
    FractionParts parts;
    parts.den_product = 1;
    for (int i = 0; i < g.edge_count(); ++i) {
        parts.num.push_back(g.beta(i).num());
        parts.den.push_back(g.beta(i).den());
        parts.den_product *= parts.den.back();
    }
    return parts;
}

Integer spin_weight_numerator(const IsingInstance& g, const FractionParts& parts,
                              uint32_t sigma) {
    Integer w = 1;
    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edge(i);
        const bool agree = (((sigma >> e.u) ^ (sigma >> e.v)) & 1u) == 0;
        w *= agree ? parts.num[static_cast<size_t>(i)] : parts.den[static_cast<size_t>(i)];
    }
    return w;
}

void check_vertex(const IsingInstance& g, Vertex v, const char* who) {
    if (v < 0 || v >= g.vertex_count())
        throw std::invalid_argument(std::string(who) + ": vertex out of range");
}

// Union-find over at most 32 vertices.
struct SmallDsu {
    int parent[32];
    void reset(int n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[a] = b;
    }
};

}  // namespace

Rational ising_partition_serial(const IsingInstance& g, const OracleLimits& limits) {
    check_spin_cap(g, limits);
    const FractionParts parts = beta_parts(g);
    const uint64_t total = 1ull << g.vertex_count();
    Integer acc = 0;
    for (uint64_t sigma = 0; sigma < total; ++sigma)
        acc += spin_weight_numerator(g, parts, static_cast<uint32_t>(sigma));
    return Rational(acc, parts.den_product);
}

Rational ising_partition(const IsingInstance& g, const OracleLimits& limits, int threads) {
    check_spin_cap(g, limits);
    const FractionParts parts = beta_parts(g);
    const int64_t total = 1ll << g.vertex_count();
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
    std::vector<Integer> partial(static_cast<size_t>(nthreads), Integer(0));
#pragma omp parallel num_threads(nthreads)
    {
        Integer local = 0;
#pragma omp for schedule(static)
        for (int64_t sigma = 0; sigma < total; ++sigma)
            local += spin_weight_numerator(g, parts, static_cast<uint32_t>(sigma));
        partial[static_cast<size_t>(omp_get_thread_num())] = local;
    }
    Integer acc = 0;
    for (const Integer& p : partial) acc += p;
    return Rational(acc, parts.den_product);
}

FourCorner four_corner(const IsingInstance& g, Vertex s, Vertex t,
                       const OracleLimits& limits) {
    check_spin_cap(g, limits);
    check_vertex(g, s, "four_corner");
    check_vertex(g, t, "four_corner");
    if (s == t) throw std::invalid_argument("four_corner: s and t must differ");
    const FractionParts parts = beta_parts(g);
    const uint64_t total = 1ull << g.vertex_count();
    Integer corners[2][2] = {{0, 0}, {0, 0}};
    for (uint64_t sigma = 0; sigma < total; ++sigma) {
        const unsigned bs = (static_cast<uint32_t>(sigma) >> s) & 1u;
        const unsigned bt = (static_cast<uint32_t>(sigma) >> t) & 1u;
        corners[bs][bt] += spin_weight_numerator(g, parts, static_cast<uint32_t>(sigma));
    }
    return FourCorner{Rational(corners[1][1], parts.den_product),
                      Rational(corners[1][0], parts.den_product),
                      Rational(corners[0][1], parts.den_product),
                      Rational(corners[0][0], parts.den_product)};
}

Rational ising_covariance_exact(const IsingInstance& g, Vertex s, Vertex t,
                                const OracleLimits& limits) {
    const FourCorner c = four_corner(g, s, t, limits);
    return (c.z_pp - c.z_pm - c.z_mp + c.z_mm) / c.total();
}

Rational spin_product_expectation(const IsingInstance& g, const std::vector<Vertex>& S,
                                  const OracleLimits& limits) {
    check_spin_cap(g, limits);
    for (Vertex v : S) check_vertex(g, v, "spin_product_expectation");
    const uint32_t smask = vertex_mask(S);
    const FractionParts parts = beta_parts(g);
    const uint64_t total = 1ull << g.vertex_count();
    Integer signed_sum = 0;
    Integer z = 0;
    for (uint64_t sigma = 0; sigma < total; ++sigma) {
        Integer w = spin_weight_numerator(g, parts, static_cast<uint32_t>(sigma));
        z += w;
        // sigma(v) = -1 exactly on the clear bits of sigma
        const int minus_count = std::popcount(~static_cast<uint32_t>(sigma) & smask);
        if (minus_count & 1)
            signed_sum -= w;
        else
            signed_sum += w;
    }
    return Rational(signed_sum, z);
}

uint32_t vertex_mask(const std::vector<Vertex>& S) {
    uint32_t mask = 0;
    for (Vertex v : S) {
        if (v < 0 || v >= 32) throw std::invalid_argument("vertex_mask: vertex out of range");
        const uint32_t bit = 1u << v;
        if (mask & bit) throw std::invalid_argument("vertex_mask: duplicate vertex");
        mask |= bit;
    }
    return mask;
}

std::vector<Vertex> mask_vertices(uint32_t mask, int n) {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < n; ++v)
        if (mask & (1u << v)) out.push_back(v);
    return out;
}

namespace {

FractionParts lambda_parts(const IsingInstance& g, const std::vector<Rational>& lambda) {
    if (lambda.size() != static_cast<size_t>(g.edge_count()))
        throw std::invalid_argument("even_partition: lambda size mismatch");
    FractionParts parts;
    parts.den_product = 1;
    for (const Rational& lam : lambda) {
        if (lam <= Rational(0) || lam > Rational(1))
            throw std::invalid_argument("even_partition: lambda must lie in (0,1]");
        parts.num.push_back(lam.num());
        parts.den.push_back(lam.den());
        parts.den_product *= parts.den.back();
    }
    return parts;
}

// Walks all edge subsets with a shared partial product; visit(parity, weight)
// is called once per leaf.
void edge_subset_sweep(const IsingInstance& g, const FractionParts& parts,
                       const std::function<void(uint32_t, const Integer&)>& visit) {
    std::vector<uint32_t> parity_flip;
    for (const Edge& e : g.edges())
        parity_flip.push_back((1u << e.u) | (1u << e.v));
    const int m = g.edge_count();
    std::function<void(int, uint32_t, const Integer&)> rec =
        [&](int i, uint32_t parity, const Integer& prod) {
            if (i == m) {
                visit(parity, prod);
                return;
            }
            rec(i + 1, parity, Integer(prod * parts.den[static_cast<size_t>(i)]));
            rec(i + 1, parity ^ parity_flip[static_cast<size_t>(i)],
                Integer(prod * parts.num[static_cast<size_t>(i)]));
        };
    rec(0, 0, Integer(1));
}

}  // namespace

Rational even_partition(const IsingInstance& g, const std::vector<Rational>& lambda,
                        const std::vector<Vertex>& S, const OracleLimits& limits) {
    check_edge_cap(g, limits);
    for (Vertex v : S) check_vertex(g, v, "even_partition");
    if (S.size() != 0 && S.size() != 2 && S.size() != 4)
        throw std::invalid_argument("even_partition: |S| must be 0, 2, or 4");
    const uint32_t target = vertex_mask(S);
    const FractionParts parts = lambda_parts(g, lambda);
    Integer acc = 0;
    edge_subset_sweep(g, parts, [&](uint32_t parity, const Integer& w) {
        if (parity == target) acc += w;
    });
    return Rational(acc, parts.den_product);
}

std::map<uint32_t, Rational> even_partition_all(const IsingInstance& g,
                                                const std::vector<Rational>& lambda,
                                                int max_odd, const OracleLimits& limits) {
    check_edge_cap(g, limits);
    const FractionParts parts = lambda_parts(g, lambda);
    std::map<uint32_t, Integer> acc;
    edge_subset_sweep(g, parts, [&](uint32_t parity, const Integer& w) {
        if (std::popcount(parity) <= max_odd) acc[parity] += w;
    });
    std::map<uint32_t, Rational> out;
    for (const auto& [mask, sum] : acc) out.emplace(mask, Rational(sum, parts.den_product));
    return out;
}

bool check_worm_identity(const IsingInstance& g, const std::vector<Vertex>& S,
                         const OracleLimits& limits) {
    const EdgeLambda lam = lambda_of_beta(g);
    const Rational lhs = spin_product_expectation(g, S, limits);
    const Rational z_s = even_partition(g, lam.lambda, S, limits);
    const Rational z_empty = even_partition(g, lam.lambda, {}, limits);
    return lhs == z_s / z_empty;
}

namespace {

// Numerator parts of the random-cluster weights: p = (a-b)/a and
// 1-p = b/a for beta = a/b > 1; the common denominator cancels in every
// probability this module reports.
FractionParts rc_parts(const IsingInstance& g) {
    FractionParts parts;
    parts.den_product = 1;
    for (int i = 0; i < g.edge_count(); ++i) {
        const Rational& beta = g.beta(i);
        if (beta <= Rational(1))
            throw std::invalid_argument("random cluster: beta > 1 required");
        parts.num.push_back(Integer(beta.num() - beta.den()));  // p numerator
        parts.den.push_back(beta.den());                        // (1-p) numerator
        parts.den_product *= beta.num();
    }
    return parts;
}

// Sweep over edge subsets tracking the subset mask itself.
void edge_mask_sweep(const IsingInstance& g, const FractionParts& parts,
                     const std::function<void(uint32_t, const Integer&)>& visit) {
    const int m = g.edge_count();
    std::function<void(int, uint32_t, const Integer&)> rec =
        [&](int i, uint32_t mask, const Integer& prod) {
            if (i == m) {
                visit(mask, prod);
                return;
            }
            rec(i + 1, mask, Integer(prod * parts.den[static_cast<size_t>(i)]));
            rec(i + 1, mask | (1u << i), Integer(prod * parts.num[static_cast<size_t>(i)]));
        };
    rec(0, 0, Integer(1));
}

int component_count(const IsingInstance& g, uint32_t edge_set, SmallDsu& dsu) {
    dsu.reset(g.vertex_count());
    for (int i = 0; i < g.edge_count(); ++i)
        if (edge_set & (1u << i)) dsu.unite(g.edge(i).u, g.edge(i).v);
    int kappa = 0;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (dsu.find(v) == v) ++kappa;
    return kappa;
}

}  // namespace

Rational rc_connected_probability(const IsingInstance& g, const std::vector<Vertex>& T,
                                  const OracleLimits& limits) {
    check_edge_cap(g, limits);
    for (Vertex v : T) check_vertex(g, v, "rc_connected_probability");
    vertex_mask(T);  // rejects duplicates
    const FractionParts parts = rc_parts(g);
    Integer hit = 0;
    Integer total = 0;
    SmallDsu dsu;
    edge_mask_sweep(g, parts, [&](uint32_t edge_set, const Integer& prod) {
        const int kappa = component_count(g, edge_set, dsu);
        Integer w = prod * pow2(static_cast<unsigned long>(kappa));
        total += w;
        bool connected = true;
        for (size_t i = 1; i < T.size(); ++i)
            if (dsu.find(T[i]) != dsu.find(T[0])) {
                connected = false;
                break;
            }
        if (connected) hit += w;
    });
    return Rational(hit, total);
}

std::vector<Rational> edwards_sokal_spin_distribution(const IsingInstance& g,
                                                      const OracleLimits& limits) {
    check_edge_cap(g, limits);
    check_spin_cap(g, limits);
    const FractionParts parts = rc_parts(g);
    const size_t nsigma = 1ull << g.vertex_count();
    std::vector<Integer> acc(nsigma, Integer(0));
    SmallDsu dsu;
    std::vector<int> comp_id(static_cast<size_t>(g.vertex_count()));
    edge_mask_sweep(g, parts, [&](uint32_t edge_set, const Integer& prod) {
        const int kappa = component_count(g, edge_set, dsu);
        int next_id = 0;
        std::vector<int> root_id(static_cast<size_t>(g.vertex_count()), -1);
        for (int v = 0; v < g.vertex_count(); ++v) {
            const int r = dsu.find(v);
            if (root_id[static_cast<size_t>(r)] < 0) root_id[static_cast<size_t>(r)] = next_id++;
            comp_id[static_cast<size_t>(v)] = root_id[static_cast<size_t>(r)];
        }
        // Each of the 2^kappa component-spin choices has probability 2^-kappa,
        // cancelling the 2^kappa in the random-cluster weight.
        for (uint32_t choice = 0; choice < (1u << kappa); ++choice) {
            uint32_t sigma = 0;
            for (int v = 0; v < g.vertex_count(); ++v)
                if ((choice >> comp_id[static_cast<size_t>(v)]) & 1u) sigma |= 1u << v;
            acc[sigma] += prod;
        }
    });
    Integer total = 0;
    for (const Integer& a : acc) total += a;
    std::vector<Rational> out;
    out.reserve(nsigma);
    for (const Integer& a : acc) out.emplace_back(a, total);
    return out;
}

std::vector<Rational> gibbs_distribution(const IsingInstance& g, const OracleLimits& limits) {
    check_spin_cap(g, limits);
    const FractionParts parts = beta_parts(g);
    const size_t nsigma = 1ull << g.vertex_count();
    std::vector<Integer> acc(nsigma);
    Integer total = 0;
    for (size_t sigma = 0; sigma < nsigma; ++sigma) {
        acc[sigma] = spin_weight_numerator(g, parts, static_cast<uint32_t>(sigma));
        total += acc[sigma];
    }
    std::vector<Rational> out;
    out.reserve(nsigma);
    for (const Integer& a : acc) out.emplace_back(a, total);
    return out;
}

bool check_fkg(const IsingInstance& g, const MonotoneEvent& e1, const MonotoneEvent& e2,
               const OracleLimits& limits) {
    check_edge_cap(g, limits);
    const FractionParts parts = rc_parts(g);
    Integer n1 = 0, n2 = 0, n12 = 0, total = 0;
    SmallDsu dsu;
    edge_mask_sweep(g, parts, [&](uint32_t edge_set, const Integer& prod) {
        Integer w = prod * pow2(static_cast<unsigned long>(component_count(g, edge_set, dsu)));
        total += w;
        const bool in1 = e1.contains(edge_set);
        const bool in2 = e2.contains(edge_set);
        if (in1) n1 += w;
        if (in2) n2 += w;
        if (in1 && in2) n12 += w;
    });
    return n12 * total >= n1 * n2;
}

bool check_weight_compare(const IsingInstance& g, const std::vector<Vertex>& S,
                          const std::vector<Vertex>& Sp, const OracleLimits& limits) {
    if (S.size() % 2 != 0 || Sp.size() % 2 != 0)
        throw std::invalid_argument("check_weight_compare: even subsets required");
    const uint32_t ms = vertex_mask(S);
    const uint32_t msp = vertex_mask(Sp);
    if (msp != 0 && msp != ms && (msp & ms) == msp)
        throw std::invalid_argument("check_weight_compare: S' properly between empty and S");
    const uint32_t mx = ms ^ msp;
    if (std::popcount(mx) > 4 || S.size() > 4 || Sp.size() > 4)
        throw std::invalid_argument("check_weight_compare: subsets too large for the oracle");
    const EdgeLambda lam = lambda_of_beta(g);
    const Rational z_empty = even_partition(g, lam.lambda, {}, limits);
    const Rational z_s = even_partition(g, lam.lambda, S, limits);
    const Rational z_sp = even_partition(g, lam.lambda, Sp, limits);
    const Rational z_x =
        even_partition(g, lam.lambda, mask_vertices(mx, g.vertex_count()), limits);
    return z_s * z_empty >= z_sp * z_x;
}

}  // namespace wormcov
