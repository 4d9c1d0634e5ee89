#include "wormcov/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace wormcov {

Edge make_edge(Vertex a, Vertex b) {
    if (a == b) throw std::invalid_argument("edge: self-loop {" + std::to_string(a) + "}");
    return a < b ? Edge{a, b} : Edge{b, a};
}

IsingInstance::IsingInstance(int n, Mode mode, std::vector<Edge> edges,
                             std::vector<Rational> beta)
    : n_(n), mode_(mode), edges_(std::move(edges)), beta_(std::move(beta)) {
    if (n_ < 0) throw std::invalid_argument("instance: negative vertex count");
    if (beta_.size() != edges_.size())
        throw std::invalid_argument("instance: edge/weight count mismatch");
    std::set<std::pair<Vertex, Vertex>> seen;
    for (size_t i = 0; i < edges_.size(); ++i) {
        Edge& e = edges_[i];
        e = make_edge(e.u, e.v);
        if (e.u < 0 || e.v >= n_)
            throw std::invalid_argument("instance: edge endpoint out of range");
        if (!seen.insert({e.u, e.v}).second)
            throw std::invalid_argument("instance: duplicate edge {" + std::to_string(e.u) +
                                        "," + std::to_string(e.v) + "}");
        const Rational& b = beta_[i];
        if (mode_ == Mode::ferromagnetic) {
            if (b <= Rational(1))
                throw std::invalid_argument("instance: ferromagnetic mode needs beta > 1");
        } else {
            if (b <= Rational(0) || b >= Rational(1))
                throw std::invalid_argument(
                    "instance: antiferromagnetic mode needs 0 < beta < 1");
        }
    }
}

IsingInstance IsingInstance::ferromagnetic_uniform(int n, const std::vector<Edge>& edges,
                                                   long p, long q) {
    if (p <= 0 || q <= 0)
        throw std::invalid_argument("instance: P and Q must be positive");
    const Rational beta = Rational(1) + Rational(p, q);
    return IsingInstance(n, Mode::ferromagnetic, edges,
                         std::vector<Rational>(edges.size(), beta));
}

IsingInstance IsingInstance::antiferromagnetic_uniform(int n, const std::vector<Edge>& edges,
                                                       const Rational& b) {
    return IsingInstance(n, Mode::antiferromagnetic, edges,
                         std::vector<Rational>(edges.size(), b));
}

bool IsingInstance::has_edge(Vertex a, Vertex b) const {
    if (a == b) return false;
    const Edge probe = make_edge(a, b);
    for (const Edge& e : edges_)
        if (e.u == probe.u && e.v == probe.v) return true;
    return false;
}

EdgeLambda lambda_of_beta(const IsingInstance& g) {
    if (g.mode() != Mode::ferromagnetic)
        throw std::invalid_argument("lambda_of_beta: ferromagnetic instance required");
    EdgeLambda out;
    out.lambda.reserve(static_cast<size_t>(g.edge_count()));
    for (int i = 0; i < g.edge_count(); ++i) {
        const Rational& b = g.beta(i);
        Rational lam = (b - Rational(1)) / (b + Rational(1));
        if (out.lambda.empty() || lam < out.lambda_min) out.lambda_min = lam;
        out.lambda.push_back(std::move(lam));
    }
    return out;
}

Rational beta_of_lambda(const Rational& lambda) {
    return (Rational(1) + lambda) / (Rational(1) - lambda);
}

std::vector<Rational> p_of_beta(const IsingInstance& g) {
    std::vector<Rational> p;
    p.reserve(static_cast<size_t>(g.edge_count()));
    for (int i = 0; i < g.edge_count(); ++i) {
        const Rational& b = g.beta(i);
        if (b <= Rational(1))
            throw std::invalid_argument("p_of_beta: beta > 1 required");
        p.push_back(Rational(1) - b.reciprocal());
    }
    return p;
}

OddSet OddSet::pair(Vertex u, Vertex v) {
    const Edge e = make_edge(u, v);
    OddSet s;
    s.a_ = e.u;
    s.b_ = e.v;
    return s;
}

bool OddSet::is_pair(Vertex u, Vertex v) const {
    if (is_empty()) return false;
    const Edge e = make_edge(u, v);
    return a_ == e.u && b_ == e.v;
}

std::optional<OddSet> toggle_odd_set(const OddSet& s, Vertex u, Vertex v) {
    const Edge e = make_edge(u, v);
    if (s.is_empty()) return OddSet::pair(e.u, e.v);
    const Vertex a = s.first();
    const Vertex b = s.second();
    if (a == e.u && b == e.v) return OddSet::empty();
    if (e.u == a || e.u == b) {
        // e.u leaves, e.v enters
        return OddSet::pair(e.u == a ? b : a, e.v);
    }
    if (e.v == a || e.v == b) {
        return OddSet::pair(e.v == a ? b : a, e.u);
    }
    return std::nullopt;  // size-4 symmetric difference
}

SubsetWeighting::SubsetWeighting(int n) : n_(n) {
    if (n < 0) throw std::invalid_argument("weighting: negative vertex count");
    w_.assign(static_cast<size_t>(n) * (n > 0 ? n - 1 : 0) / 2, 1.0);
}

size_t SubsetWeighting::index(Vertex u, Vertex v) const {
    const Edge e = make_edge(u, v);
    if (e.u < 0 || e.v >= n_) throw std::invalid_argument("weighting: vertex out of range");
    const size_t a = static_cast<size_t>(e.u);
    const size_t b = static_cast<size_t>(e.v);
    return a * static_cast<size_t>(n_) - a * (a + 1) / 2 + (b - a - 1);
}

void SubsetWeighting::set(Vertex u, Vertex v, double value) {
    if (!(value > 0.0)) throw std::invalid_argument("weighting: weights must be positive");
    w_[index(u, v)] = value;
}

void SubsetWeighting::scale(Vertex u, Vertex v, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("weighting: factors must be positive");
    w_[index(u, v)] *= factor;
}

std::vector<Vertex> connected_component(const IsingInstance& g, Vertex s) {
    if (s < 0 || s >= g.vertex_count())
        throw std::invalid_argument("component: vertex out of range");
    std::vector<std::vector<Vertex>> adj(static_cast<size_t>(g.vertex_count()));
    for (const Edge& e : g.edges()) {
        adj[static_cast<size_t>(e.u)].push_back(e.v);
        adj[static_cast<size_t>(e.v)].push_back(e.u);
    }
    std::vector<char> seen(static_cast<size_t>(g.vertex_count()), 0);
    std::vector<Vertex> stack{s};
    seen[static_cast<size_t>(s)] = 1;
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (Vertex w : adj[static_cast<size_t>(v)]) {
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }
    std::vector<Vertex> out;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (seen[static_cast<size_t>(v)]) out.push_back(v);
    return out;
}

bool is_connected(const IsingInstance& g) {
    if (g.vertex_count() <= 1) return true;
    return static_cast<int>(connected_component(g, 0).size()) == g.vertex_count();
}

Restriction restrict_to(const IsingInstance& g, const std::vector<Vertex>& vertices) {
    std::vector<Vertex> to_new(static_cast<size_t>(g.vertex_count()), -1);
    std::vector<Vertex> to_old = vertices;
    std::sort(to_old.begin(), to_old.end());
    for (size_t i = 0; i < to_old.size(); ++i) {
        const Vertex v = to_old[i];
        if (v < 0 || v >= g.vertex_count())
            throw std::invalid_argument("restrict: vertex out of range");
        to_new[static_cast<size_t>(v)] = static_cast<Vertex>(i);
    }
    std::vector<Edge> edges;
    std::vector<Rational> beta;
    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edge(i);
        const Vertex u = to_new[static_cast<size_t>(e.u)];
        const Vertex v = to_new[static_cast<size_t>(e.v)];
        if (u >= 0 && v >= 0) {
            edges.push_back(Edge{u, v});
            beta.push_back(g.beta(i));
        }
    }
    IsingInstance sub(static_cast<int>(to_old.size()), g.mode(), std::move(edges),
                      std::move(beta));
    return Restriction{std::move(sub), std::move(to_old), std::move(to_new)};
}

}  // namespace wormcov
