#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <queue>

#include "support.hpp"
#include "wormcov/chain_exact.hpp"
#include "wormcov/oracle.hpp"
#include "wormcov/worm.hpp"

using namespace wormcov;

namespace {

ChainContext uniform_context(const IsingInstance& g, double lam = 0.5) {
    return make_context(g, std::vector<double>(static_cast<size_t>(g.edge_count()), lam),
                        SubsetWeighting::all_ones(g.vertex_count()));
}

}  // namespace

TEST_CASE("single-edge move acceptance follows the Metropolis rule") {
    const ChainContext ctx = uniform_context(testing::single_edge());
    WormState st(ctx);
    // adding the edge multiplies Lambda by lambda = 1/2: accepted iff u < 1/2
    WormState reject = st;
    CHECK_FALSE(worm_move(reject, ctx, 0, 0.51));
    CHECK(reject.odd_set().is_empty());
    WormState accept = st;
    CHECK(worm_move(accept, ctx, 0, 0.49));
    CHECK(accept.odd_set().is_pair(0, 1));
    CHECK(accept.lambda_product() == 0.5);
    // removing it raises Lambda: always accepted
    CHECK(worm_move(accept, ctx, 0, 0.999999));
    CHECK(accept.odd_set().is_empty());
}

TEST_CASE("flips that would leave the state space degenerate to a stay") {
    const ChainContext ctx = uniform_context(testing::path_graph(3));
    WormState st(ctx);
    REQUIRE(worm_move(st, ctx, 0, 0.0));  // A = {e0}, S = {0,1}
    // flipping e2 would give odd degrees at 0,1,2,3
    WormState copy = st;
    CHECK_FALSE(worm_move(copy, ctx, 2, 0.0));
    CHECK(copy.odd_set() == st.odd_set());
    CHECK(copy.edge_in(0));
    CHECK_FALSE(copy.edge_in(2));
}

TEST_CASE("mixing budget arithmetic") {
    // n=3, m=3, lambda_min=1/2, delta=1/e: 4 * 81 * 9 * (3+1)
    CHECK(mixing_budget(3, 3, 0.5, std::exp(-1.0), 1.0) == 11664);
    CHECK(mixing_budget(3, 3, 0.5, std::exp(-1.0), 0.01) == 117);  // ceil(116.64)
    // delta -> 1 drops the log term
    const uint64_t near_one = mixing_budget(3, 3, 0.5, 1.0 - 1e-12, 1.0);
    CHECK(near_one >= 8748);  // 4 * 81 * 9 * 3
    CHECK(near_one <= 8749);
    CHECK_THROWS_AS(mixing_budget(3, 3, 0.5, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(mixing_budget(3, 3, 0.5, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("chains are deterministic and start empty") {
    const ChainContext ctx = uniform_context(testing::triangle());
    CHECK(run_chain_from_empty(ctx, 0, 1).is_empty());
    const OddSet a = run_chain_from_empty(ctx, 5000, 42);
    const OddSet b = run_chain_from_empty(ctx, 5000, 42);
    CHECK(a == b);
}

TEST_CASE("single-edge occupancy converges to the stationary split") {
    // Lambda(empty) = 1, Lambda({e}) = 1/2: Pr(empty class) = 2/3
    const ChainContext ctx = uniform_context(testing::single_edge());
    const uint64_t chains = 4000;
    const uint64_t hits =
        run_ensemble(ctx, 200, chains, 2024, 0, ClassTarget::empty(), 0);
    const double frac = static_cast<double>(hits) / static_cast<double>(chains);
    CHECK(frac > 2.0 / 3.0 - 0.05);
    CHECK(frac < 2.0 / 3.0 + 0.05);
}

TEST_CASE("incremental bookkeeping survives long runs") {
    Xoshiro256pp seeder(99);
    for (int trial = 0; trial < 3; ++trial) {
        const IsingInstance g = testing::random_connected(seeder, 6, 4);
        // use distinct weights to exercise the weight cache
        SubsetWeighting w(6);
        Xoshiro256pp wr(17 + static_cast<uint64_t>(trial));
        for (Vertex u = 0; u < 6; ++u)
            for (Vertex v = u + 1; v < 6; ++v) w.set(u, v, 0.25 + 1.5 * wr.uniform01());
        const ChainContext ctx =
            make_context(g, std::vector<double>(static_cast<size_t>(g.edge_count()), 0.5), w);
        Xoshiro256pp rng(seeder.next());
        WormState st(ctx);
        for (int k = 0; k < 100000; ++k) worm_step(st, ctx, rng);
        WormState fresh = st;
        fresh.refresh(ctx);
        CHECK(fresh.odd_set() == st.odd_set());
        CHECK(fresh.edges_in() == st.edges_in());
        CHECK(st.lambda_product() ==
              doctest::Approx(fresh.lambda_product()).epsilon(1e-9));
        CHECK(st.class_weight() == fresh.class_weight());
    }
}

TEST_CASE("triangle chain: balance, reachability, stationary law") {
    const IsingInstance g = testing::triangle();
    const ChainContext ctx = uniform_context(g);
    const ChainSpace space = enumerate_chain_space(g);
    CHECK(space.states.size() == 8);  // {}, full triangle, 3 edges, 3 two-edge paths
    const TransitionRows rows = transition_rows(ctx, space);
    CHECK(detailed_balance_violation(ctx, space, rows) < 1e-12);
    CHECK(min_self_loop(space, rows) >= 0.5 - 1e-12);
    CHECK(chain_irreducible(space, rows));

    // empirical occupancy against the stationary distribution
    const std::vector<double> pi = stationary_distribution(ctx, space);
    std::vector<uint64_t> visits(space.states.size(), 0);
    Xoshiro256pp rng(7);
    WormState st(ctx);
    const uint64_t total = 400000;
    for (uint64_t k = 0; k < total; ++k) {
        worm_step(st, ctx, rng);
        uint32_t mask = 0;
        for (int e = 0; e < ctx.m; ++e)
            if (st.edge_in(e)) mask |= 1u << e;
        ++visits[static_cast<size_t>(space.index.at(mask))];
    }
    for (size_t i = 0; i < pi.size(); ++i) {
        const double frac = static_cast<double>(visits[i]) / static_cast<double>(total);
        CHECK(std::abs(frac - pi[i]) < 0.01);
    }
}

TEST_CASE("worm_move agrees with the analytic transition rows") {
    Xoshiro256pp rng(12321);
    for (int trial = 0; trial < 6; ++trial) {
        const IsingInstance g = testing::random_connected(rng, 5, 3);
        SubsetWeighting w(5);
        for (Vertex u = 0; u < 5; ++u)
            for (Vertex v = u + 1; v < 5; ++v) w.set(u, v, 0.2 + 3.0 * rng.uniform01());
        const ChainContext ctx = make_context(
            g, std::vector<double>(static_cast<size_t>(g.edge_count()), 0.5), w);
        const ChainSpace space = enumerate_chain_space(g);
        const TransitionRows rows = transition_rows(ctx, space);
        const double move_p = 0.5 / static_cast<double>(ctx.m);

        // breadth-first replay over the state space with forced-accept moves
        std::vector<char> seen(space.states.size(), 0);
        std::queue<std::pair<int, WormState>> frontier;
        frontier.emplace(space.index.at(0), WormState(ctx));
        seen[static_cast<size_t>(space.index.at(0))] = 1;
        while (!frontier.empty()) {
            auto [idx, state] = frontier.front();
            frontier.pop();
            for (int e = 0; e < ctx.m; ++e) {
                const uint32_t flipped = space.states[static_cast<size_t>(idx)] ^ (1u << e);
                const auto it = space.index.find(flipped);
                double accept = 0.0;
                if (it != space.index.end()) {
                    for (const auto& [j, p] : rows[static_cast<size_t>(idx)])
                        if (j == it->second) accept = p / move_p;
                }
                if (it == space.index.end()) {
                    WormState probe = state;
                    CHECK_FALSE(worm_move(probe, ctx, e, 0.0));
                } else {
                    WormState probe = state;
                    CHECK(worm_move(probe, ctx, e, accept * (1.0 - 1e-9)));
                    if (accept < 1.0) {
                        WormState probe2 = state;
                        CHECK_FALSE(
                            worm_move(probe2, ctx, e, accept + (1.0 - accept) * 1e-9));
                    }
                    if (!seen[static_cast<size_t>(it->second)]) {
                        seen[static_cast<size_t>(it->second)] = 1;
                        frontier.emplace(it->second, std::move(probe));
                    }
                }
            }
        }
        for (char s : seen) CHECK(s == 1);
    }
}

TEST_CASE("parallel ensembles reproduce the serial reference") {
    const ChainContext ctx = uniform_context(testing::cycle_graph(4));
    const uint64_t serial =
        run_ensemble_serial(ctx, 300, 2000, 99, 5, ClassTarget::pair(0, 1));
    CHECK(run_ensemble(ctx, 300, 2000, 99, 5, ClassTarget::pair(0, 1), 0) == serial);
    CHECK(run_ensemble(ctx, 300, 2000, 99, 5, ClassTarget::pair(0, 1), 2) == serial);
    CHECK(run_ensemble(ctx, 300, 2000, 99, 5, ClassTarget::pair(0, 1), 1) == serial);
}

TEST_CASE("ratio estimator hits the oracle ratio on the single edge") {
    const IsingInstance g = testing::single_edge();
    const EdgeLambda lam = lambda_of_beta(g);
    const ChainContext ctx = make_context(g, lam, SubsetWeighting::all_ones(2));
    // true ratio Zhat_empty / Zhat_{0,1} = 1 / (1/2) = 2 from the exact oracle
    const Rational z_s = even_partition(g, lam.lambda, {0, 1});
    const Rational z_e = even_partition(g, lam.lambda, {});
    CHECK(z_e / z_s == Rational(2));

    int good = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const RatioEstimate est =
            estimate_ratio(ctx, 0, 1, 0.2, 0.25, seed, 0, RatioOptions{0.05, 2e-3, 0});
        if (est.r_hat >= 2.0 * std::exp(-0.2) && est.r_hat <= 2.0 * std::exp(0.2)) ++good;
    }
    CHECK(good >= 15);
}

TEST_CASE("ratio estimator with oracle weights is centered at one") {
    const IsingInstance g = testing::triangle();
    const EdgeLambda lam = lambda_of_beta(g);
    SubsetWeighting w(3);
    const Rational z_e = even_partition(g, lam.lambda, {});
    for (Vertex u = 0; u < 3; ++u)
        for (Vertex v = u + 1; v < 3; ++v)
            w.set(u, v, (z_e / even_partition(g, lam.lambda, {u, v})).to_double());
    const ChainContext ctx = make_context(g, lam, w);
    int good = 0;
    for (uint64_t seed = 100; seed < 120; ++seed) {
        const RatioEstimate est =
            estimate_ratio(ctx, 0, 1, 0.2, 0.25, seed, 3, RatioOptions{0.05, 2e-3, 0});
        if (est.r_hat >= std::exp(-0.2) && est.r_hat <= std::exp(0.2)) ++good;
    }
    CHECK(good >= 15);
}

TEST_CASE("ratio estimator reports starved classes") {
    const IsingInstance g = testing::single_edge();
    const EdgeLambda lam = lambda_of_beta(g);
    SubsetWeighting w(2);
    w.set(0, 1, 1e-13);  // the pair class essentially never appears
    const ChainContext ctx = make_context(g, lam, w);
    CHECK_THROWS_AS(
        estimate_ratio(ctx, 0, 1, 0.2, 0.25, 5, 0, RatioOptions{0.05, 1e-4, 0}),
        SamplingError);
}
