#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wormcov/rational.hpp"

namespace wormcov {

using Vertex = int;

/// Unordered vertex pair, normalized so that u < v.
struct Edge {
    Vertex u;
    Vertex v;
};

Edge make_edge(Vertex a, Vertex b);

enum class Mode { ferromagnetic, antiferromagnetic };

/// Simple graph with exact rational edge weights beta.
///
/// Ferromagnetic mode requires beta(e) > 1 on every edge (beta = 1 + P/Q for
/// positive integers P, Q); antiferromagnetic mode requires 0 < beta(e) < 1.
/// Immutable after construction and safe to share across threads.
class IsingInstance {
public:
    IsingInstance(int n, Mode mode, std::vector<Edge> edges, std::vector<Rational> beta);

    /// All edges weighted 1 + p/q.
    static IsingInstance ferromagnetic_uniform(int n, const std::vector<Edge>& edges,
                                               long p, long q);
    /// All edges weighted b, 0 < b < 1.
    static IsingInstance antiferromagnetic_uniform(int n, const std::vector<Edge>& edges,
                                                   const Rational& b);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    Mode mode() const { return mode_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int i) const { return edges_[static_cast<size_t>(i)]; }
    const Rational& beta(int i) const { return beta_[static_cast<size_t>(i)]; }
    const std::vector<Rational>& betas() const { return beta_; }

    bool has_edge(Vertex a, Vertex b) const;

private:
    int n_;
    Mode mode_;
    std::vector<Edge> edges_;
    std::vector<Rational> beta_;
};

/// Per-edge lambda(e) = (beta(e)-1)/(beta(e)+1), all in (0,1).
struct EdgeLambda {
    std::vector<Rational> lambda;
    Rational lambda_min;
};

/// Requires ferromagnetic mode.
EdgeLambda lambda_of_beta(const IsingInstance& g);

/// Inverse map beta = (1+lambda)/(1-lambda).
Rational beta_of_lambda(const Rational& lambda);

/// Per-edge p(e) = 1 - 1/beta(e); requires beta(e) > 1 on every edge.
std::vector<Rational> p_of_beta(const IsingInstance& g);

/// The set of odd-degree vertices of a configuration: empty or a pair.
class OddSet {
public:
    OddSet() = default;
    static OddSet empty() { return OddSet(); }
    static OddSet pair(Vertex u, Vertex v);

    bool is_empty() const { return a_ < 0; }
    Vertex first() const { return a_; }
    Vertex second() const { return b_; }
    bool is_pair(Vertex u, Vertex v) const;

    friend bool operator==(const OddSet& x, const OddSet& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const OddSet& x, const OddSet& y) { return !(x == y); }

private:
    Vertex a_ = -1;
    Vertex b_ = -1;
};

/// S xor {u,v}; nullopt when the result would have four elements (the move
/// is then rejected by the chain). Requires u != v.
std::optional<OddSet> toggle_odd_set(const OddSet& s, Vertex u, Vertex v);

/// Positive weights w_S keyed by unordered vertex pairs; w of the empty set
/// is fixed at 1 and size-1 sets never carry weight.
class SubsetWeighting {
public:
    explicit SubsetWeighting(int n);

    static SubsetWeighting all_ones(int n) { return SubsetWeighting(n); }

    int vertex_count() const { return n_; }
    double weight(Vertex u, Vertex v) const { return w_[index(u, v)]; }
    double weight(const OddSet& s) const {
        return s.is_empty() ? 1.0 : weight(s.first(), s.second());
    }
    void set(Vertex u, Vertex v, double value);
    /// Multiplies w_{u,v} by a positive factor.
    void scale(Vertex u, Vertex v, double factor);

private:
    size_t index(Vertex u, Vertex v) const;
    int n_;
    std::vector<double> w_;
};

/// Vertices of the component containing s, sorted ascending.
std::vector<Vertex> connected_component(const IsingInstance& g, Vertex s);

bool is_connected(const IsingInstance& g);

/// Induced subinstance on a sorted vertex subset, with the relabeling maps.
struct Restriction {
    IsingInstance graph;
    std::vector<Vertex> to_old;  // new id -> old id
    std::vector<Vertex> to_new;  // old id -> new id, -1 if dropped
};

Restriction restrict_to(const IsingInstance& g, const std::vector<Vertex>& vertices);

}  // namespace wormcov
