#include "wormcov/fpras.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace wormcov {

EstimateReport estimate_covariance(const IsingInstance& g, Vertex s, Vertex t,
                                   double epsilon, double delta, uint64_t master_seed,
                                   const FprasOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    if (g.mode() != Mode::ferromagnetic)
        throw std::invalid_argument("estimate_covariance: ferromagnetic instance required");
    if (s == t) throw std::invalid_argument("estimate_covariance: s and t must differ");
    if (s < 0 || t < 0 || s >= g.vertex_count() || t >= g.vertex_count())
        throw std::invalid_argument("estimate_covariance: vertex out of range");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("estimate_covariance: epsilon must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("estimate_covariance: delta must lie in (0,1)");

    EstimateReport report;
    report.epsilon = epsilon;
    report.delta = delta;
    report.master_seed = master_seed;

    const std::vector<Vertex> component = connected_component(g, s);
    report.component_size = static_cast<int>(component.size());
    if (!std::binary_search(component.begin(), component.end(), t)) {
        // The Gibbs measure factorizes across components, so the covariance
        // is exactly zero; no sampling happens.
        report.disconnected = true;
        report.estimate = 0.0;
        return report;
    }

    const Restriction sub = restrict_to(g, component);
    const Vertex s2 = sub.to_new[static_cast<size_t>(s)];
    const Vertex t2 = sub.to_new[static_cast<size_t>(t)];

    const EdgeLambda lambda = lambda_of_beta(sub.graph);
    const double learn_scale =
        options.learn_sample_scale > 0.0 ? options.learn_sample_scale : options.sample_scale;
    const LearnOptions learn_options{options.c_mix, learn_scale, options.threads, {}};
    LearnResult learned =
        learn_weights(sub.graph, lambda, delta / 2.0, master_seed, learn_options);

    const ChainContext ctx = make_context(sub.graph, lambda, learned.weights);
    const RatioOptions ratio_options{options.c_mix, options.sample_scale, options.threads};
    const RatioEstimate est =
        estimate_ratio(ctx, s2, t2, epsilon, delta / 2.0, master_seed, 0, ratio_options);

    report.w_pair = learned.weights.weight(s2, t2);
    report.r_hat = est.r_hat;
    report.q_hat = 1.0 / est.r_hat;
    // True covariance lies in (0,1]; clamping can only shrink the
    // multiplicative error.
    report.estimate = std::min(1.0, report.q_hat / report.w_pair);
    report.hits_empty = est.hits_empty;
    report.hits_pair = est.hits_pair;
    report.total_chains = learned.total_chains + 2 * est.chains_per_phase;
    report.total_steps = learned.total_steps + est.total_steps();
    report.learn_stage_count = learned.schedule.stages;
    report.learn_stages = std::move(learned.stages);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace wormcov
