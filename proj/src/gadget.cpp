#include "wormcov/gadget.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

#include "wormcov/errors.hpp"

namespace wormcov {

namespace {

void check_b(const Rational& b) {
    if (b <= Rational(0) || b >= Rational(1))
        throw std::invalid_argument("gadget: b must lie in (0,1)");
}

struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace

std::pair<Rational, Rational> path_corner_sums(int ell, const Rational& b) {
    check_b(b);
    if (ell < 1) throw std::invalid_argument("path_corner_sums: ell >= 1 required");
    const Rational plus = (b + Rational(1)).pow(ell);
    const Rational minus = (b - Rational(1)).pow(ell);
    const Rational half(1, 2);
    return {(plus + minus) * half, (plus - minus) * half};
}

Rational zeta(int ell, const Rational& b) {
    const auto [f, a] = path_corner_sums(ell, b);
    return f / a;
}

long gadget_degree_bound(const Rational& b) {
    check_b(b);
    const Rational c2 = ((b + Rational(1)) / (b - Rational(1))).pow(2);
    const Rational r = c2.pow(2) / (c2 - Rational(1));
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
    return static_cast<long>(q.get_si());
}

long GadgetSpec::total_edges() const {
    long total = 0;
    for (size_t j = 0; j < d.size(); ++j) total += d[j] * static_cast<long>(j);
    return total;
}

long GadgetSpec::internal_vertices() const {
    long total = 0;
    for (size_t j = 0; j < d.size(); ++j) total += d[j] * (static_cast<long>(j) - 1);
    return total;
}

GadgetSpec build_gadget(int n, const Rational& beta_prime, const Rational& acc,
                        const Rational& b) {
    check_b(b);
    if (n < 1) throw std::invalid_argument("build_gadget: n >= 1 required");
    if (acc <= Rational(0) || acc >= Rational(1))
        throw std::invalid_argument("build_gadget: accuracy must lie in (0,1)");
    const Rational lo = b.pow(n);
    const Rational hi = b.pow(-n);
    if (beta_prime < lo || beta_prime > hi)
        throw std::invalid_argument("build_gadget: target outside [b^n, b^-n]");

    GadgetSpec spec;
    spec.b = b;
    spec.target = beta_prime;
    spec.accuracy = acc;
    spec.beta_hat = Rational(1);
    if (beta_prime == Rational(1)) return spec;  // two bare terminals

    // Smallest L with (c^2)^L >= 2/(b^n acc) + 1, i.e. the usual ceiling of
    // logs but decided by exact comparison.
    const Rational c2 = ((b + Rational(1)) / (b - Rational(1))).pow(2);
    const Rational need = Rational(2) / (lo * acc) + Rational(1);
    int big_l = 0;
    Rational c2_pow(1);
    while (c2_pow < need) {
        c2_pow *= c2;
        ++big_l;
    }
    spec.big_l = big_l;
    spec.d.assign(static_cast<size_t>(2 * big_l + 2), 0);

    // Incremental corner sums f_j, a_j along path lengths.
    Rational f = b;          // f_1
    Rational a = Rational(1);  // a_1
    const bool shrink = beta_prime > Rational(1);  // spend even lengths
    Rational remaining = beta_prime;
    for (int j = 2; j <= 2 * big_l + 1; ++j) {
        const Rational f_next = b * f + a;
        const Rational a_next = f + b * a;
        f = f_next;
        a = a_next;
        if (shrink != (j % 2 == 0)) continue;
        const Rational z = f / a;
        long count = 0;
        if (shrink) {
            // zeta_j > 1: largest power still <= remaining
            Rational p = z;
            while (p <= remaining) {
                p *= z;
                ++count;
            }
        } else {
            // zeta_j < 1: largest power still >= remaining
            Rational p = z;
            while (p >= remaining) {
                p *= z;
                ++count;
            }
        }
        if (count > 0) {
            spec.d[static_cast<size_t>(j)] = count;
            remaining /= z.pow(count);
            spec.beta_hat *= z.pow(count);
        }
    }

    if ((spec.beta_hat - beta_prime).abs() > acc)
        throw InternalError("build_gadget: accuracy guarantee violated");
    return spec;
}

IsingInstance realize_gadget(const GadgetSpec& spec) {
    return attach_gadget(
        IsingInstance(2, Mode::antiferromagnetic, {}, {}), spec.s, spec.t, spec);
}

IsingInstance attach_gadget(const IsingInstance& base, Vertex s, Vertex t,
                            const GadgetSpec& spec) {
    if (s < 0 || t < 0 || s >= base.vertex_count() || t >= base.vertex_count() || s == t)
        throw std::invalid_argument("attach_gadget: bad terminals");
    std::vector<Edge> edges = base.edges();
    std::vector<Rational> beta = base.betas();
    int next = base.vertex_count();
    for (size_t j = 2; j < spec.d.size(); ++j) {
        for (long copy = 0; copy < spec.d[j]; ++copy) {
            Vertex prev = s;
            for (size_t k = 1; k < j; ++k) {
                const Vertex fresh = next++;
                edges.push_back(Edge{prev, fresh});
                beta.push_back(spec.b);
                prev = fresh;
            }
            edges.push_back(Edge{prev, t});
            beta.push_back(spec.b);
        }
    }
    return IsingInstance(next, base.mode(), std::move(edges), std::move(beta));
}

IsingInstance splice_gadget(const IsingInstance& g, int edge_index, const GadgetSpec& spec) {
    if (edge_index < 0 || edge_index >= g.edge_count())
        throw std::invalid_argument("splice_gadget: edge index out of range");
    const Edge target = g.edge(edge_index);
    std::vector<Edge> edges;
    std::vector<Rational> beta;
    for (int i = 0; i < g.edge_count(); ++i) {
        if (i == edge_index) continue;
        edges.push_back(g.edge(i));
        beta.push_back(g.beta(i));
    }
    const IsingInstance base(g.vertex_count(), g.mode(), std::move(edges), std::move(beta));
    return attach_gadget(base, target.u, target.v, spec);
}

namespace {

// Weighted simple graph with unrestricted positive rational weights, used
// only inside the corner contraction.
struct WeightedGraph {
    int n;
    std::vector<std::map<Vertex, Rational>> adj;

    explicit WeightedGraph(const IsingInstance& g) : n(g.vertex_count()), adj(static_cast<size_t>(n)) {
        for (int i = 0; i < g.edge_count(); ++i) {
            const Edge& e = g.edge(i);
            adj[static_cast<size_t>(e.u)].emplace(e.v, g.beta(i));
            adj[static_cast<size_t>(e.v)].emplace(e.u, g.beta(i));
        }
    }

    void remove_edge(Vertex u, Vertex v) {
        adj[static_cast<size_t>(u)].erase(v);
        adj[static_cast<size_t>(v)].erase(u);
    }

    // Inserts or parallel-merges (weights multiply).
    void add_edge(Vertex u, Vertex v, const Rational& w) {
        auto [it, fresh] = adj[static_cast<size_t>(u)].emplace(v, w);
        if (!fresh) it->second *= w;
        auto [jt, fresh2] = adj[static_cast<size_t>(v)].emplace(u, w);
        if (!fresh2) jt->second *= w;
    }
};

}  // namespace

std::pair<Rational, Rational> corner_pair_contracted(const IsingInstance& g, Vertex s,
                                                     Vertex t, const OracleLimits& limits) {
    if (s < 0 || t < 0 || s >= g.vertex_count() || t >= g.vertex_count() || s == t)
        throw std::invalid_argument("corner_pair_contracted: bad terminals");
    WeightedGraph wg(g);
    Rational prefactor(1);  // multiplies every corner sum equally
    std::vector<char> alive(static_cast<size_t>(wg.n), 1);
    std::vector<Vertex> queue;
    for (Vertex v = 0; v < wg.n; ++v)
        if (v != s && v != t) queue.push_back(v);
    while (!queue.empty()) {
        const Vertex x = queue.back();
        queue.pop_back();
        if (!alive[static_cast<size_t>(x)] || x == s || x == t) continue;
        auto& nbrs = wg.adj[static_cast<size_t>(x)];
        if (nbrs.size() > 2) continue;
        if (nbrs.size() == 0) {
            prefactor *= Rational(2);  // free spin
            alive[static_cast<size_t>(x)] = 0;
        } else if (nbrs.size() == 1) {
            const auto [p, w] = *nbrs.begin();
            prefactor *= w + Rational(1);  // pendant sums to beta+1 either way
            wg.remove_edge(x, p);
            alive[static_cast<size_t>(x)] = 0;
            queue.push_back(p);
        } else {
            auto it = nbrs.begin();
            const auto [p, w1] = *it++;
            const auto [q, w2] = *it;
            // sum over sigma(x): agree/agree -> w1*w2 + 1, split -> w1 + w2
            const Rational series_num = w1 * w2 + Rational(1);
            const Rational series_den = w1 + w2;
            wg.remove_edge(x, p);
            wg.remove_edge(x, q);
            alive[static_cast<size_t>(x)] = 0;
            prefactor *= series_den;
            wg.add_edge(p, q, series_num / series_den);
            queue.push_back(p);
            queue.push_back(q);
        }
    }

    // Residual enumeration over the surviving vertices.
    std::vector<Vertex> live;
    for (Vertex v = 0; v < wg.n; ++v)
        if (alive[static_cast<size_t>(v)]) live.push_back(v);
    const int k = static_cast<int>(live.size());
    if (k > limits.max_spin_vertices || k > 30)
        throw CapExceeded("corner_pair_contracted: residual graph above the cap (" +
                          std::to_string(k) + " vertices)");
    std::vector<int> pos(static_cast<size_t>(wg.n), -1);
    for (int i = 0; i < k; ++i) pos[static_cast<size_t>(live[static_cast<size_t>(i)])] = i;
    struct REdge {
        int a, b;
        Rational w;
    };
    std::vector<REdge> redges;
    for (Vertex v : live)
        for (const auto& [u, w] : wg.adj[static_cast<size_t>(v)])
            if (v < u) redges.push_back(REdge{pos[static_cast<size_t>(v)],
                                              pos[static_cast<size_t>(u)], w});
    const int si = pos[static_cast<size_t>(s)];
    const int ti = pos[static_cast<size_t>(t)];
    Rational z_pp(0), z_pm(0);
    for (uint32_t sigma = 0; sigma < (1u << k); ++sigma) {
        if (((sigma >> si) & 1u) == 0) continue;  // fix sigma(s) = +1
        Rational w(1);
        for (const REdge& e : redges)
            if ((((sigma >> e.a) ^ (sigma >> e.b)) & 1u) == 0) w *= e.w;
        if ((sigma >> ti) & 1u)
            z_pp += w;
        else
            z_pm += w;
    }
    return {prefactor * z_pp, prefactor * z_pm};
}

Rational corner_ratio_contracted(const IsingInstance& g, Vertex s, Vertex t,
                                 const OracleLimits& limits) {
    const auto [pp, pm] = corner_pair_contracted(g, s, t, limits);
    return pp / pm;
}

int covariance_sign_contracted(const IsingInstance& g, Vertex s, Vertex t,
                               const OracleLimits& limits) {
    const auto [pp, pm] = corner_pair_contracted(g, s, t, limits);
    // covariance = 2(z_pp - z_pm) / Z by spin-flip symmetry
    return (pp - pm).sign();
}

Sign sign_oracle(const IsingInstance& g, Vertex s, Vertex t, const OracleLimits& limits) {
    const Rational cov = ising_covariance_exact(g, s, t, limits);
    return cov.sign() >= 0 ? Sign::non_negative : Sign::non_positive;
}

SignOracle make_contracted_sign_oracle(const OracleLimits& limits) {
    return [limits](const IsingInstance& g, Vertex s, Vertex t) {
        return covariance_sign_contracted(g, s, t, limits) >= 0 ? Sign::non_negative
                                                                : Sign::non_positive;
    };
}

NuSearch binary_search_nu(const IsingInstance& base, Vertex s, Vertex t, const Rational& b,
                          const Rational& delta_prime, const SignOracle& oracle) {
    check_b(b);
    if (delta_prime <= Rational(0))
        throw std::invalid_argument("binary_search_nu: delta_prime must be positive");
    const int n = base.vertex_count();
    NuSearch out;
    out.lo = b.pow(n);
    out.hi = b.pow(-n);
    const Rational acc = delta_prime / Rational(6);
    while (out.hi - out.lo > delta_prime) {
        const Rational mid = (out.lo + out.hi) / Rational(2);
        const GadgetSpec spec = build_gadget(n, mid, acc, b);
        const IsingInstance query = attach_gadget(base, s, t, spec);
        const Sign answer = oracle(query, s, t);
        ++out.queries;
        out.probes.push_back(spec.beta_hat);
        if (answer == Sign::non_negative)
            out.hi = spec.beta_hat;  // covariance >= 0 means beta_hat >= nu
        else
            out.lo = spec.beta_hat;
    }
    out.nu_hat = (out.lo + out.hi) / Rational(2);
    return out;
}

ReductionResult recover_partition(const IsingInstance& topology, const Rational& b,
                                  const SignOracle& oracle, bool audit,
                                  const OracleLimits& audit_limits) {
    check_b(b);
    const int n = topology.vertex_count();
    const int m = topology.edge_count();
    ReductionResult result;
    if (m == 0) {
        result.z = Rational(pow2(static_cast<unsigned long>(n)));
        result.z_estimate = result.z;
        return result;
    }

    const Integer q = b.den();
    // Smallest m' with b^{m'} <= q^{-m}; every representable value of Z is a
    // multiple of q^{-m}, so this pins the rounding lattice.
    const Rational lattice(Integer(1), ipow(q, static_cast<unsigned long>(m)));
    int m_prime = 0;
    Rational b_pow(1);
    while (b_pow > lattice) {
        b_pow *= b;
        ++m_prime;
    }
    result.m_prime = m_prime;
    result.delta = b_pow / Rational(pow2(static_cast<unsigned long>(n + 3)));
    result.delta_prime = b * result.delta / Rational(5L * m);

    Rational z_hat(pow2(static_cast<unsigned long>(n)));
    std::vector<Edge> prefix_edges;
    for (int j = 0; j < m; ++j) {
        const IsingInstance base = IsingInstance::antiferromagnetic_uniform(n, prefix_edges, b);
        const Edge e = topology.edge(j);
        const NuSearch search = binary_search_nu(base, e.u, e.v, b, result.delta_prime, oracle);
        if (audit) {
            const FourCorner c = four_corner(base, e.u, e.v, audit_limits);
            const Rational nu = c.z_pm / c.z_pp;
            if ((search.nu_hat - nu).abs() > result.delta_prime)
                throw InternalError("recover_partition: nu audit failed on edge " +
                                    std::to_string(j));
        }
        const Rational alpha = (b + search.nu_hat) / (Rational(1) + search.nu_hat);
        z_hat *= alpha;
        result.oracle_queries += static_cast<uint64_t>(search.queries);
        result.edges.push_back(EdgeRecovery{e, search.nu_hat, alpha, search.queries});
        prefix_edges.push_back(e);
    }

    result.z_estimate = z_hat;
    // Round to the nearest multiple of q^-m.
    const Rational scaled = z_hat / lattice;
    Integer nearest;
    {
        const Rational shifted = scaled + Rational(1, 2);
        mpz_fdiv_q(nearest.get_mpz_t(), shifted.num().get_mpz_t(), shifted.den().get_mpz_t());
    }
    result.z = Rational(nearest) * lattice;
    if ((result.z_estimate - result.z).abs() > b_pow / Rational(4) || result.z <= Rational(0))
        throw InternalError("recover_partition: estimate strayed outside the rounding window");
    return result;
}

}  // namespace wormcov
