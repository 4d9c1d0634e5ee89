#pragma once

#include <cstdint>
#include <vector>

#include "wormcov/graph.hpp"
#include "wormcov/learner.hpp"

namespace wormcov {

struct FprasOptions {
    double c_mix = 1.0;
    double sample_scale = 1.0;        // chain-count multiplier for the final ratio
    double learn_sample_scale = 0.0;  // learning-phase multiplier; 0 = same as sample_scale
    int threads = 0;
};

struct EstimateReport {
    double estimate = 0.0;  // in (0,1] for connected queries; exactly 0 across components
    double epsilon = 0.0;
    double delta = 0.0;
    bool disconnected = false;
    int component_size = 0;
    double w_pair = 0.0;  // learned weight of {s,t}
    double r_hat = 0.0;   // Zhat_empty / Zhat_{s,t} estimate
    double q_hat = 0.0;   // 1 / r_hat
    uint64_t hits_empty = 0;
    uint64_t hits_pair = 0;
    uint64_t total_chains = 0;
    uint64_t total_steps = 0;
    uint64_t master_seed = 0;
    int learn_stage_count = 0;
    std::vector<StageDiagnostics> learn_stages;
    double wall_seconds = 0.0;
};

/// Multiplicative covariance estimator for a ferromagnetic instance: returns
/// exactly 0 when s and t lie in different components; otherwise restricts
/// to the common component, learns the subset weighting with failure budget
/// delta/2, estimates R = Zhat_empty/Zhat_{s,t} with (epsilon, delta/2), and
/// reports C = (1/R)/w_{s,t}, clamped into (0,1].
EstimateReport estimate_covariance(const IsingInstance& g, Vertex s, Vertex t,
                                   double epsilon, double delta, uint64_t master_seed,
                                   const FprasOptions& options = {});

}  // namespace wormcov
