#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "wormcov/worm.hpp"

namespace wormcov {

/// The worm state space Omega = { A : |S(A)| <= 2 } of a small instance,
/// enumerated explicitly (edge masks). Feasible for m <= ~20.
struct ChainSpace {
    std::vector<uint32_t> states;
    std::unordered_map<uint32_t, int> index;
    std::vector<OddSet> odd;
};

ChainSpace enumerate_chain_space(const IsingInstance& g);

/// Lambda(A) per state under the context's weighting.
std::vector<double> state_weights(const ChainContext& ctx, const ChainSpace& space);

/// Normalized stationary distribution (proportional to Lambda).
std::vector<double> stationary_distribution(const ChainContext& ctx, const ChainSpace& space);

/// Sparse transition rows built from the chain's proposal/acceptance rules.
/// Row i holds (state index, probability) pairs including the self-loop.
using TransitionRows = std::vector<std::vector<std::pair<int, double>>>;
TransitionRows transition_rows(const ChainContext& ctx, const ChainSpace& space);

/// max over transitions of |pi(A) P(A,B) - pi(B) P(B,A)|.
double detailed_balance_violation(const ChainContext& ctx, const ChainSpace& space,
                                  const TransitionRows& rows);

/// Self-loop probability of every state is at least this.
double min_self_loop(const ChainSpace& space, const TransitionRows& rows);

/// Reachability of every state from the empty configuration through positive
/// transitions (the chain is reversible, so this is irreducibility).
bool chain_irreducible(const ChainSpace& space, const TransitionRows& rows);

/// Distribution after `steps` transitions from the empty configuration.
std::vector<double> distribution_from_empty(const ChainSpace& space,
                                            const TransitionRows& rows, uint64_t steps);

/// Exact total-variation distance to stationarity after `steps` transitions
/// from the empty configuration.
double tv_from_empty(const ChainContext& ctx, const ChainSpace& space,
                     const TransitionRows& rows, uint64_t steps);

}  // namespace wormcov
