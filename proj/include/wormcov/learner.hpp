#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wormcov/graph.hpp"
#include "wormcov/worm.hpp"

namespace wormcov {

/// Annealing schedule lambda^[0], ..., lambda^[t] with
/// lambda^[i](e) = max((1 + 1/2m)^{-i}, lambda(e)); lambda^[0] is identically
/// one and lambda^[t] is the target weighting.
struct Schedule {
    int stages = 0;  // t
    std::vector<std::vector<Rational>> lambda;  // stage -> per-edge, exact
    std::vector<std::vector<double>> lambda_dbl;
    std::vector<double> lambda_min_dbl;
};

/// t = max_e ceil(log(1/lambda(e)) / log(1 + 1/2m)), computed exactly.
/// Requires m >= 1.
Schedule build_schedule(const IsingInstance& g, const EdgeLambda& lambda);

/// w^[0]: the all-ones weighting. Valid at lambda identically one because
/// all classes Omega_S of a connected graph then have equal size (xor with a
/// fixed u-v path is a bijection Omega_S -> Omega_empty).
SubsetWeighting initial_weights(const IsingInstance& g);

struct PairEstimate {
    Vertex u = -1, v = -1;
    double r_hat = 0.0;
    double weight = 0.0;  // w after the update
};

struct StageDiagnostics {
    int stage = 0;  // 1-based: produced w^[stage]
    double lambda_min = 1.0;
    uint64_t chains_per_phase = 0;
    uint64_t steps_per_chain = 0;
    std::vector<PairEstimate> pairs;
};

struct LearnOptions {
    double c_mix = 1.0;
    double sample_scale = 1.0;
    int threads = 0;
    /// Called after each stage with (stage index i, lambda^[i], w^[i]);
    /// used by tests to audit the class-balance window against exact oracles.
    std::function<void(int, const std::vector<Rational>&, const SubsetWeighting&)> on_stage;
};

struct LearnResult {
    SubsetWeighting weights;
    Schedule schedule;
    std::vector<StageDiagnostics> stages;
    uint64_t total_steps = 0;
    uint64_t total_chains = 0;
};

/// Learns w with every class ratio Zhat_S/Zhat_empty in [1/2, 2] (with
/// probability >= 1 - delta at full budgets): per stage i and pair S,
/// estimates the current class ratio with epsilon = 1/8 and failure budget
/// delta/(n^2 t), then sets w^[i+1]_S = w^[i]_S * R_hat. Requires a
/// connected instance. Sampling streams are 1 + i*P + k for stage i and pair
/// index k, with P = C(n,2).
LearnResult learn_weights(const IsingInstance& g, const EdgeLambda& lambda, double delta,
                          uint64_t master_seed, const LearnOptions& options = {});

}  // namespace wormcov
