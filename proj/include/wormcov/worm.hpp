#pragma once

#include <cstdint>
#include <vector>

#include "wormcov/errors.hpp"
#include "wormcov/graph.hpp"
#include "wormcov/rng.hpp"

namespace wormcov {

/// Immutable inputs of one weighted worm chain: topology, double-precision
/// edge weights lambda, and the subset weighting. Shared read-only across
/// concurrently running chains.
struct ChainContext {
    int n = 0;
    int m = 0;
    std::vector<Edge> edges;
    std::vector<double> lambda;
    double lambda_min = 1.0;
    SubsetWeighting weights;
};

ChainContext make_context(const IsingInstance& g, const std::vector<double>& lambda,
                          SubsetWeighting weights);
ChainContext make_context(const IsingInstance& g, const EdgeLambda& lambda,
                          SubsetWeighting weights);

/// Current configuration A with incremental bookkeeping: per-vertex degree
/// parity, the odd set S(A), and float caches of lambda(A) and w_{S(A)}.
/// The caches are refreshed from scratch every 2^16 steps to bound drift.
class WormState {
public:
    explicit WormState(const ChainContext& ctx);

    const OddSet& odd_set() const { return odd_; }
    bool edge_in(int e) const { return in_a_[static_cast<size_t>(e)] != 0; }
    int edges_in() const { return count_in_; }
    uint64_t steps() const { return steps_; }
    double lambda_product() const { return lambda_a_; }
    double class_weight() const { return weight_; }
    /// Lambda(A) = lambda(A) * w_{S(A)}.
    double stationary_weight() const { return lambda_a_ * weight_; }

    /// Recomputes parity, S(A) and the float caches from the edge set.
    void refresh(const ChainContext& ctx);

    /// Back to the empty configuration (fresh chain start).
    void reset();

    friend void worm_step(WormState&, const ChainContext&, Xoshiro256pp&);
    friend bool worm_move(WormState&, const ChainContext&, int, double);

private:
    std::vector<unsigned char> in_a_;
    std::vector<unsigned char> parity_;
    OddSet odd_;
    double lambda_a_ = 1.0;
    double weight_ = 1.0;
    int count_in_ = 0;
    uint64_t steps_ = 0;
};

/// One transition: with probability 1/2 a self-loop, otherwise a uniform
/// edge is proposed, flips leaving the state space degenerate to "stay",
/// and the flip is accepted with probability min{Lambda(A')/Lambda(A), 1}.
/// Draws per step: one coin; plus the edge index and the acceptance uniform
/// when the coin selects a move.
void worm_step(WormState& state, const ChainContext& ctx, Xoshiro256pp& rng);

/// The move half of a transition with an explicit acceptance uniform u;
/// returns whether the configuration changed. Used by the exact chain
/// analysis to enumerate outcomes.
bool worm_move(WormState& state, const ChainContext& ctx, int edge, double u);

/// ceil(c_mix * lambda_min^-2 * n^4 * m^2 * (m + ln(1/delta))) — the
/// worst-case schedule for total-variation distance delta when started from
/// the empty configuration.
uint64_t mixing_budget(int n, int m, double lambda_min, double delta, double c_mix);
uint64_t mixing_budget(const IsingInstance& g, const EdgeLambda& lambda, double delta,
                       double c_mix);

/// Runs one chain of `steps` transitions from the empty configuration;
/// deterministic given the seed. Returns the class S(A) of the final state.
OddSet run_chain_from_empty(const ChainContext& ctx, uint64_t steps, uint64_t seed);

/// Which occupancy class a chain's final state is counted against.
struct ClassTarget {
    bool want_empty = true;
    Vertex s = -1;
    Vertex t = -1;
    static ClassTarget empty() { return ClassTarget{}; }
    static ClassTarget pair(Vertex s, Vertex t) { return ClassTarget{false, s, t}; }
    bool matches(const OddSet& odd) const {
        return want_empty ? odd.is_empty() : odd.is_pair(s, t);
    }
};

/// Runs `chains` independent chains (seeds derived from (master, stream, i))
/// and counts final states in the target class. OpenMP-parallel over chains;
/// the count is exactly the serial one for any thread count.
uint64_t run_ensemble(const ChainContext& ctx, uint64_t steps, uint64_t chains,
                      uint64_t master_seed, uint64_t stream, const ClassTarget& target,
                      int threads = 0);

/// Plain-loop reference for run_ensemble.
uint64_t run_ensemble_serial(const ChainContext& ctx, uint64_t steps, uint64_t chains,
                             uint64_t master_seed, uint64_t stream,
                             const ClassTarget& target);

struct RatioOptions {
    double c_mix = 1.0;        // scales the chain length (mixing budget)
    double sample_scale = 1.0; // scales the chain count T; 1 = formula verbatim
    int threads = 0;           // 0 = OpenMP default
};

struct RatioEstimate {
    double r_hat = 0.0;  // estimate of Zhat_empty / Zhat_S
    uint64_t hits_empty = 0;
    uint64_t hits_pair = 0;
    uint64_t chains_per_phase = 0;
    uint64_t steps_per_chain = 0;
    uint64_t total_steps() const { return 2 * chains_per_phase * steps_per_chain; }
};

/// Two-phase ratio estimator for Zhat_empty/Zhat_{s,t}: with theta = eps/8,
/// delta = eps/(32 n^2) and T = ceil(ln(6/delta_star) e^{8 n^2 delta} 12 n^2
/// / theta^2), runs T chains per phase of length mixing_budget(delta) and
/// returns x/y, the ratio of final-state counts in Omega_empty and
/// Omega_{s,t}. Uses streams 2*stream and 2*stream+1 under the master seed.
RatioEstimate estimate_ratio(const ChainContext& ctx, Vertex s, Vertex t, double epsilon,
                             double delta_star, uint64_t master_seed, uint64_t stream,
                             const RatioOptions& options = {});

}  // namespace wormcov
