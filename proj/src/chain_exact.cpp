#include "wormcov/chain_exact.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "wormcov/oracle.hpp"

namespace wormcov {

namespace {

uint32_t odd_mask_of(const IsingInstance& g, uint32_t edge_set) {
    uint32_t parity = 0;
    for (int e = 0; e < g.edge_count(); ++e)
        if (edge_set & (1u << e))
            parity ^= (1u << g.edge(e).u) | (1u << g.edge(e).v);
    return parity;
}

OddSet odd_set_of(uint32_t parity, int n) {
    if (parity == 0) return OddSet::empty();
    const auto vs = mask_vertices(parity, n);
    return OddSet::pair(vs[0], vs[1]);
}

}  // namespace

ChainSpace enumerate_chain_space(const IsingInstance& g) {
    if (g.edge_count() > 20)
        throw CapExceeded("chain space: too many edges to enumerate");
    if (g.vertex_count() > 32) throw CapExceeded("chain space: too many vertices");
    ChainSpace space;
    for (uint32_t mask = 0; mask < (1u << g.edge_count()); ++mask) {
        const uint32_t parity = odd_mask_of(g, mask);
        if (std::popcount(parity) > 2) continue;
        space.index.emplace(mask, static_cast<int>(space.states.size()));
        space.states.push_back(mask);
        space.odd.push_back(odd_set_of(parity, g.vertex_count()));
    }
    return space;
}

std::vector<double> state_weights(const ChainContext& ctx, const ChainSpace& space) {
    std::vector<double> weights;
    weights.reserve(space.states.size());
    for (size_t i = 0; i < space.states.size(); ++i) {
        double lam = 1.0;
        for (int e = 0; e < ctx.m; ++e)
            if (space.states[i] & (1u << e)) lam *= ctx.lambda[static_cast<size_t>(e)];
        weights.push_back(lam * ctx.weights.weight(space.odd[i]));
    }
    return weights;
}

std::vector<double> stationary_distribution(const ChainContext& ctx,
                                            const ChainSpace& space) {
    std::vector<double> pi = state_weights(ctx, space);
    double total = 0.0;
    for (double w : pi) total += w;
    for (double& w : pi) w /= total;
    return pi;
}

TransitionRows transition_rows(const ChainContext& ctx, const ChainSpace& space) {
    const std::vector<double> lam = state_weights(ctx, space);
    TransitionRows rows(space.states.size());
    const double move_p = 0.5 / static_cast<double>(ctx.m);
    for (size_t i = 0; i < space.states.size(); ++i) {
        double off = 0.0;
        for (int e = 0; e < ctx.m; ++e) {
            const uint32_t flipped = space.states[i] ^ (1u << e);
            const auto it = space.index.find(flipped);
            if (it == space.index.end()) continue;  // proposal degenerates to a stay
            const double accept = std::min(1.0, lam[static_cast<size_t>(it->second)] / lam[i]);
            const double p = move_p * accept;
            if (p > 0.0) {
                rows[i].emplace_back(it->second, p);
                off += p;
            }
        }
        rows[i].emplace_back(static_cast<int>(i), 1.0 - off);
    }
    return rows;
}

double detailed_balance_violation(const ChainContext& ctx, const ChainSpace& space,
                                  const TransitionRows& rows) {
    const std::vector<double> pi = stationary_distribution(ctx, space);
    double worst = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        for (const auto& [j, pij] : rows[i]) {
            if (static_cast<size_t>(j) == i) continue;
            double pji = 0.0;
            for (const auto& [k, p] : rows[static_cast<size_t>(j)])
                if (static_cast<size_t>(k) == i) pji = p;
            worst = std::max(worst, std::abs(pi[i] * pij - pi[static_cast<size_t>(j)] * pji));
        }
    }
    return worst;
}

double min_self_loop(const ChainSpace& space, const TransitionRows& rows) {
    double least = 1.0;
    for (size_t i = 0; i < rows.size(); ++i)
        for (const auto& [j, p] : rows[i])
            if (static_cast<size_t>(j) == i) least = std::min(least, p);
    (void)space;
    return least;
}

bool chain_irreducible(const ChainSpace& space, const TransitionRows& rows) {
    const auto it = space.index.find(0);
    if (it == space.index.end()) return false;
    std::vector<char> seen(space.states.size(), 0);
    std::vector<int> stack{it->second};
    seen[static_cast<size_t>(it->second)] = 1;
    size_t reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& [w, p] : rows[static_cast<size_t>(v)]) {
            if (p > 0.0 && !seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == space.states.size();
}

std::vector<double> distribution_from_empty(const ChainSpace& space,
                                            const TransitionRows& rows, uint64_t steps) {
    const auto it = space.index.find(0);
    if (it == space.index.end())
        throw std::invalid_argument("distribution_from_empty: empty state missing");
    std::vector<double> dist(space.states.size(), 0.0);
    dist[static_cast<size_t>(it->second)] = 1.0;
    std::vector<double> next(space.states.size());
    for (uint64_t k = 0; k < steps; ++k) {
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (dist[i] == 0.0) continue;
            for (const auto& [j, p] : rows[i]) next[static_cast<size_t>(j)] += dist[i] * p;
        }
        dist.swap(next);
    }
    return dist;
}

double tv_from_empty(const ChainContext& ctx, const ChainSpace& space,
                     const TransitionRows& rows, uint64_t steps) {
    const std::vector<double> pi = stationary_distribution(ctx, space);
    const std::vector<double> dist = distribution_from_empty(space, rows, steps);
    double tv = 0.0;
    for (size_t i = 0; i < pi.size(); ++i) tv += std::abs(pi[i] - dist[i]);
    return tv / 2.0;
}

}  // namespace wormcov
