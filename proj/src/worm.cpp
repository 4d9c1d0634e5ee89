#include "wormcov/worm.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace wormcov {

namespace {

std::vector<double> to_doubles(const std::vector<Rational>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const Rational& x : xs) out.push_back(x.to_double());
    return out;
}

}  // namespace

ChainContext make_context(const IsingInstance& g, const std::vector<double>& lambda,
                          SubsetWeighting weights) {
    if (lambda.size() != static_cast<size_t>(g.edge_count()))
        throw std::invalid_argument("context: lambda size mismatch");
    if (weights.vertex_count() != g.vertex_count())
        throw std::invalid_argument("context: weighting size mismatch");
    ChainContext ctx{g.vertex_count(), g.edge_count(), g.edges(), lambda, 1.0,
                     std::move(weights)};
    for (double lam : lambda) {
        if (!(lam > 0.0) || lam > 1.0)
            throw std::invalid_argument("context: lambda must lie in (0,1]");
        ctx.lambda_min = std::min(ctx.lambda_min, lam);
    }
    return ctx;
}

ChainContext make_context(const IsingInstance& g, const EdgeLambda& lambda,
                          SubsetWeighting weights) {
    return make_context(g, to_doubles(lambda.lambda), std::move(weights));
}

WormState::WormState(const ChainContext& ctx)
    : in_a_(static_cast<size_t>(ctx.m), 0), parity_(static_cast<size_t>(ctx.n), 0) {}

void WormState::reset() {
    std::fill(in_a_.begin(), in_a_.end(), 0);
    std::fill(parity_.begin(), parity_.end(), 0);
    odd_ = OddSet::empty();
    lambda_a_ = 1.0;
    weight_ = 1.0;
    count_in_ = 0;
    steps_ = 0;
}

void WormState::refresh(const ChainContext& ctx) {
    std::fill(parity_.begin(), parity_.end(), 0);
    double prod = 1.0;
    int count = 0;
    for (int e = 0; e < ctx.m; ++e) {
        if (!in_a_[static_cast<size_t>(e)]) continue;
        ++count;
        prod *= ctx.lambda[static_cast<size_t>(e)];
        parity_[static_cast<size_t>(ctx.edges[static_cast<size_t>(e)].u)] ^= 1;
        parity_[static_cast<size_t>(ctx.edges[static_cast<size_t>(e)].v)] ^= 1;
    }
    Vertex a = -1, b = -1;
    for (Vertex v = 0; v < ctx.n; ++v) {
        if (!parity_[static_cast<size_t>(v)]) continue;
        (a < 0 ? a : b) = v;
    }
    odd_ = a < 0 ? OddSet::empty() : OddSet::pair(a, b);
    lambda_a_ = prod;
    weight_ = ctx.weights.weight(odd_);
    count_in_ = count;
}

bool worm_move(WormState& state, const ChainContext& ctx, int edge, double u) {
    const Edge& e = ctx.edges[static_cast<size_t>(edge)];
    const auto next = toggle_odd_set(state.odd_, e.u, e.v);
    if (!next) return false;  // A xor {e} leaves Omega; proposal degenerates to A
    const bool removing = state.in_a_[static_cast<size_t>(edge)] != 0;
    const double lam = ctx.lambda[static_cast<size_t>(edge)];
    const double factor = removing ? 1.0 / lam : lam;
    const double w_new = ctx.weights.weight(*next);
    const double ratio = factor * (w_new / state.weight_);
    if (ratio < 1.0 && u >= ratio) return false;
    state.in_a_[static_cast<size_t>(edge)] ^= 1;
    state.count_in_ += removing ? -1 : 1;
    state.parity_[static_cast<size_t>(e.u)] ^= 1;
    state.parity_[static_cast<size_t>(e.v)] ^= 1;
    state.odd_ = *next;
    state.lambda_a_ *= factor;
    state.weight_ = w_new;
    return true;
}

void worm_step(WormState& state, const ChainContext& ctx, Xoshiro256pp& rng) {
    ++state.steps_;
    if ((state.steps_ & 0xffffull) == 0) state.refresh(ctx);
    if (rng.coin()) return;  // self-loop half
    const int edge = static_cast<int>(rng.uniform_below(static_cast<uint32_t>(ctx.m)));
    worm_move(state, ctx, edge, rng.uniform01());
}

uint64_t mixing_budget(int n, int m, double lambda_min, double delta, double c_mix) {
    if (n < 1 || m < 1) throw std::invalid_argument("mixing_budget: empty instance");
    if (!(lambda_min > 0.0)) throw std::invalid_argument("mixing_budget: lambda_min <= 0");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("mixing_budget: delta must lie in (0,1)");
    if (!(c_mix > 0.0)) throw std::invalid_argument("mixing_budget: c_mix must be positive");
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    const double value = c_mix / (lambda_min * lambda_min) * nd * nd * nd * nd * md * md *
                         (md + std::log(1.0 / delta));
    if (!(value < 9.0e18)) throw std::invalid_argument("mixing_budget: budget overflow");
    return static_cast<uint64_t>(std::ceil(value));
}

uint64_t mixing_budget(const IsingInstance& g, const EdgeLambda& lambda, double delta,
                       double c_mix) {
    return mixing_budget(g.vertex_count(), g.edge_count(), lambda.lambda_min.to_double(),
                         delta, c_mix);
}

OddSet run_chain_from_empty(const ChainContext& ctx, uint64_t steps, uint64_t seed) {
    Xoshiro256pp rng(seed);
    WormState state(ctx);
    for (uint64_t k = 0; k < steps; ++k) worm_step(state, ctx, rng);
    return state.odd_set();
}

uint64_t run_ensemble_serial(const ChainContext& ctx, uint64_t steps, uint64_t chains,
                             uint64_t master_seed, uint64_t stream,
                             const ClassTarget& target) {
    uint64_t hits = 0;
    WormState state(ctx);
    for (uint64_t i = 0; i < chains; ++i) {
        state.reset();
        Xoshiro256pp rng(chain_seed(master_seed, stream, i));
        for (uint64_t k = 0; k < steps; ++k) worm_step(state, ctx, rng);
        if (target.matches(state.odd_set())) ++hits;
    }
    return hits;
}

uint64_t run_ensemble(const ChainContext& ctx, uint64_t steps, uint64_t chains,
                      uint64_t master_seed, uint64_t stream, const ClassTarget& target,
                      int threads) {
    if (threads == 1) return run_ensemble_serial(ctx, steps, chains, master_seed, stream, target);
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
    uint64_t hits = 0;
    const int64_t count = static_cast<int64_t>(chains);
#pragma omp parallel num_threads(nthreads)
    {
        WormState state(ctx);
        uint64_t local = 0;
#pragma omp for schedule(static) nowait
        for (int64_t i = 0; i < count; ++i) {
            state.reset();
            Xoshiro256pp rng(chain_seed(master_seed, stream, static_cast<uint64_t>(i)));
            for (uint64_t k = 0; k < steps; ++k) worm_step(state, ctx, rng);
            if (target.matches(state.odd_set())) ++local;
        }
#pragma omp atomic
        hits += local;
    }
    return hits;
}

RatioEstimate estimate_ratio(const ChainContext& ctx, Vertex s, Vertex t, double epsilon,
                             double delta_star, uint64_t master_seed, uint64_t stream,
                             const RatioOptions& options) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("estimate_ratio: epsilon must lie in (0,1)");
    if (!(delta_star > 0.0 && delta_star < 1.0))
        throw std::invalid_argument("estimate_ratio: delta_star must lie in (0,1)");
    if (s == t) throw std::invalid_argument("estimate_ratio: s and t must differ");
    if (s < 0 || t < 0 || s >= ctx.n || t >= ctx.n)
        throw std::invalid_argument("estimate_ratio: vertex out of range");
    if (ctx.m < 1) throw std::invalid_argument("estimate_ratio: instance has no edges");
    if (!(options.sample_scale > 0.0))
        throw std::invalid_argument("estimate_ratio: sample_scale must be positive");

    const double n2 = static_cast<double>(ctx.n) * static_cast<double>(ctx.n);
    const double theta = epsilon / 8.0;
    const double delta = epsilon / (32.0 * n2);
    const double t_real = std::log(6.0 / delta_star) * std::exp(8.0 * n2 * delta) * 12.0 *
                          n2 / (theta * theta) * options.sample_scale;
    if (!(t_real < 4.0e18)) throw std::invalid_argument("estimate_ratio: chain count overflow");
    const uint64_t chains = std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(t_real)));
    const uint64_t steps = mixing_budget(ctx.n, ctx.m, ctx.lambda_min, delta, options.c_mix);

    const uint64_t x = run_ensemble(ctx, steps, chains, master_seed, 2 * stream,
                                    ClassTarget::empty(), options.threads);
    const uint64_t y = run_ensemble(ctx, steps, chains, master_seed, 2 * stream + 1,
                                    ClassTarget::pair(s, t), options.threads);
    if (y == 0)
        throw SamplingError("estimate_ratio: insufficient samples",
                            "no chain ended in the target pair class");
    if (x == 0)
        throw SamplingError("estimate_ratio: insufficient samples",
                            "no chain ended in the empty class");
    return RatioEstimate{static_cast<double>(x) / static_cast<double>(y), x, y, chains, steps};
}

}  // namespace wormcov
