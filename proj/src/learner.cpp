#include "wormcov/learner.hpp"

#include <stdexcept>
#include <string>

#include "wormcov/errors.hpp"

namespace wormcov {

Schedule build_schedule(const IsingInstance& g, const EdgeLambda& lambda) {
    const int m = g.edge_count();
    if (m < 1) throw std::invalid_argument("schedule: instance has no edges");
    if (lambda.lambda.size() != static_cast<size_t>(m))
        throw std::invalid_argument("schedule: lambda size mismatch");
    const Rational cool(2L * m, 2L * m + 1);  // 1/(1 + 1/2m)

    // t(e) = smallest i with cool^i <= lambda(e); t = max over edges.
    int t = 0;
    for (const Rational& lam : lambda.lambda) {
        if (lam <= Rational(0) || lam >= Rational(1))
            throw std::invalid_argument("schedule: lambda must lie in (0,1)");
        int i = 0;
        Rational cur(1);
        while (cur > lam) {
            cur *= cool;
            ++i;
        }
        t = std::max(t, i);
    }

    Schedule sch;
    sch.stages = t;
    Rational floor_i(1);
    for (int i = 0; i <= t; ++i) {
        std::vector<Rational> stage;
        stage.reserve(static_cast<size_t>(m));
        for (const Rational& lam : lambda.lambda)
            stage.push_back(floor_i > lam ? floor_i : lam);
        std::vector<double> dbl;
        double lo = 1.0;
        for (const Rational& v : stage) {
            dbl.push_back(v.to_double());
            lo = std::min(lo, dbl.back());
        }
        sch.lambda.push_back(std::move(stage));
        sch.lambda_dbl.push_back(std::move(dbl));
        sch.lambda_min_dbl.push_back(lo);
        floor_i *= cool;
    }
    return sch;
}

SubsetWeighting initial_weights(const IsingInstance& g) {
    if (!is_connected(g)) throw std::invalid_argument("initial_weights: connected instance required");
    return SubsetWeighting::all_ones(g.vertex_count());
}

LearnResult learn_weights(const IsingInstance& g, const EdgeLambda& lambda, double delta,
                          uint64_t master_seed, const LearnOptions& options) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("learn_weights: delta must lie in (0,1)");
    if (!is_connected(g))
        throw std::invalid_argument("learn_weights: connected instance required");

    Schedule schedule = build_schedule(g, lambda);
    SubsetWeighting weights = initial_weights(g);

    const int n = g.vertex_count();
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) pairs.emplace_back(u, v);

    const int t = schedule.stages;
    LearnResult result{weights, schedule, {}, 0, 0};
    if (t == 0) return result;  // lambda already identically below the first floor

    const double delta_star =
        delta / (static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(t));
    const RatioOptions ratio_options{options.c_mix, options.sample_scale, options.threads};

    for (int i = 0; i < t; ++i) {
        const ChainContext ctx = make_context(g, schedule.lambda_dbl[static_cast<size_t>(i)],
                                              weights);
        SubsetWeighting next = weights;
        StageDiagnostics diag;
        diag.stage = i + 1;
        diag.lambda_min = ctx.lambda_min;
        for (size_t k = 0; k < pairs.size(); ++k) {
            const auto [u, v] = pairs[k];
            const uint64_t stream =
                1 + static_cast<uint64_t>(i) * pairs.size() + static_cast<uint64_t>(k);
            RatioEstimate est;
            try {
                est = estimate_ratio(ctx, u, v, 1.0 / 8.0, delta_star, master_seed, stream,
                                     ratio_options);
            } catch (const SamplingError& err) {
                throw SamplingError("learn_weights: stage " + std::to_string(i) + ", pair {" +
                                        std::to_string(u) + "," + std::to_string(v) + "}",
                                    err.phase);
            }
            next.scale(u, v, est.r_hat);
            diag.chains_per_phase = est.chains_per_phase;
            diag.steps_per_chain = est.steps_per_chain;
            diag.pairs.push_back(PairEstimate{u, v, est.r_hat, next.weight(u, v)});
            result.total_steps += est.total_steps();
            result.total_chains += 2 * est.chains_per_phase;
        }
        weights = next;
        result.stages.push_back(std::move(diag));
        if (options.on_stage)
            options.on_stage(i + 1, schedule.lambda[static_cast<size_t>(i) + 1], weights);
    }
    result.weights = weights;
    return result;
}

}  // namespace wormcov
