#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "wormcov/gadget.hpp"
#include "wormcov/oracle.hpp"

using namespace wormcov;

namespace {

IsingInstance anti_path(int edges, const Rational& b) {
    std::vector<Edge> es;
    for (int i = 0; i < edges; ++i) es.push_back(Edge{i, i + 1});
    return IsingInstance::antiferromagnetic_uniform(edges + 1, es, b);
}

IsingInstance anti_uniform(const IsingInstance& topology, const Rational& b) {
    return IsingInstance::antiferromagnetic_uniform(topology.vertex_count(),
                                                    topology.edges(), b);
}

GadgetSpec hand_spec(const Rational& b, const std::vector<std::pair<int, long>>& lengths) {
    GadgetSpec spec;
    spec.b = b;
    spec.beta_hat = Rational(1);
    int max_len = 1;
    for (const auto& [len, count] : lengths) max_len = std::max(max_len, len);
    spec.d.assign(static_cast<size_t>(max_len) + 1, 0);
    for (const auto& [len, count] : lengths) {
        spec.d[static_cast<size_t>(len)] = count;
        spec.beta_hat *= zeta(len, b).pow(count);
    }
    return spec;
}

}  // namespace

TEST_CASE("zeta values at b = 1/2") {
    const Rational b(1, 2);
    CHECK(zeta(1, b) == b);
    CHECK(zeta(2, b) == Rational(5, 4));   // (b^2+1)/(2b)
    CHECK(zeta(3, b) == Rational(13, 14));  // 1 + 2/(c^3 - 1), c = -3
    // closed form against the three-edge path's corner sums
    const FourCorner c3 = four_corner(anti_path(3, b), 0, 3);
    CHECK(zeta(3, b) == c3.z_pp / c3.z_pm);
}

TEST_CASE("path corner sums match the enumeration oracle") {
    for (const Rational& b : {Rational(1, 2), Rational(1, 3), Rational(3, 4)}) {
        for (int ell = 1; ell <= 6; ++ell) {
            const auto [f, a] = path_corner_sums(ell, b);
            const FourCorner c = four_corner(anti_path(ell, b), 0, ell);
            CHECK(f == c.z_pp);
            CHECK(a == c.z_pm);
        }
    }
}

TEST_CASE("zeta interleaving: odd lengths below one and rising, even above and falling") {
    for (const Rational& b : {Rational(1, 2), Rational(1, 3), Rational(3, 4)}) {
        CHECK(zeta(1, b) < zeta(3, b));
        CHECK(zeta(3, b) < zeta(5, b));
        CHECK(zeta(5, b) < Rational(1));
        CHECK(Rational(1) < zeta(6, b));
        CHECK(zeta(6, b) < zeta(4, b));
        CHECK(zeta(4, b) < zeta(2, b));
    }
}

TEST_CASE("degree bound values") {
    CHECK(gadget_degree_bound(Rational(1, 2)) == 11);  // ceil(81/8)
    CHECK(gadget_degree_bound(Rational(1, 3)) == 6);   // ceil(16/3)
}

TEST_CASE("target one yields the empty gadget") {
    const GadgetSpec spec = build_gadget(4, Rational(1), Rational(1, 1000), Rational(1, 2));
    CHECK(spec.beta_hat == Rational(1));
    CHECK(spec.total_edges() == 0);
    const IsingInstance j = realize_gadget(spec);
    CHECK(j.vertex_count() == 2);
    CHECK(j.edge_count() == 0);
}

TEST_CASE("a target hit exactly by one two-edge path stays exact") {
    const Rational b(1, 2);
    const GadgetSpec spec = build_gadget(3, Rational(5, 4), Rational(1, 1000000), b);
    CHECK(spec.d[2] == 1);
    for (size_t j = 3; j < spec.d.size(); ++j) CHECK(spec.d[j] == 0);
    CHECK(spec.beta_hat == Rational(5, 4));
}

TEST_CASE("random targets: accuracy, greedy bounds, wrong-parity lengths unused") {
    Xoshiro256pp rng(2718);
    for (const Rational& b : {Rational(1, 2), Rational(1, 3)}) {
        const long dmax = gadget_degree_bound(b);
        for (int n : {3, 5}) {
            for (int trial = 0; trial < 12; ++trial) {
                const Rational lo = b.pow(n);
                const Rational span = b.pow(-n) - lo;
                const Rational u(static_cast<long>(rng.uniform_below(1u << 30)),
                                 1L << 30);
                const Rational target = lo + u * span;
                const Rational acc(1, 1000000);
                const GadgetSpec spec = build_gadget(n, target, acc, b);
                CHECK((spec.beta_hat - target).abs() <= acc);
                const bool above_one = target > Rational(1);
                for (size_t j = 2; j < spec.d.size(); ++j) {
                    if (spec.d[j] == 0) continue;
                    CHECK((j % 2 == 0) == above_one);
                    if (j >= 4) CHECK(spec.d[j] <= dmax);
                }
                if (above_one && spec.d.size() > 2 && spec.d[2] > 0)
                    CHECK(zeta(2, b).pow(spec.d[2]) <= target);
                if (!above_one && spec.d.size() > 3 && spec.d[3] > 0)
                    CHECK(zeta(3, b).pow(spec.d[3]) >= target);
            }
        }
    }
    CHECK_THROWS_AS(
        build_gadget(3, Rational(100), Rational(1, 100), Rational(1, 2)),
        std::invalid_argument);
}

TEST_CASE("realized gadgets implement exactly the product of zeta powers") {
    const Rational b(1, 2);
    // hand-picked multiplicity patterns small enough to enumerate directly
    const std::vector<std::vector<std::pair<int, long>>> patterns = {
        {{2, 1}}, {{2, 2}}, {{3, 1}}, {{2, 1}, {3, 1}}, {{2, 1}, {5, 1}},
        {{3, 2}, {2, 1}}, {{4, 1}, {2, 2}},
    };
    for (const auto& pattern : patterns) {
        const GadgetSpec spec = hand_spec(b, pattern);
        REQUIRE(spec.total_edges() <= 12);
        const IsingInstance j = realize_gadget(spec);
        const FourCorner c = four_corner(j, spec.s, spec.t);
        CHECK(c.z_pp / c.z_pm == spec.beta_hat);
        CHECK(corner_ratio_contracted(j, spec.s, spec.t) == spec.beta_hat);
    }
}

TEST_CASE("splice bookkeeping") {
    const Rational b(1, 2);
    const IsingInstance one_edge =
        IsingInstance::antiferromagnetic_uniform(2, {{0, 1}}, b);
    const GadgetSpec empty = build_gadget(2, Rational(1), Rational(1, 10), b);
    const IsingInstance cut = splice_gadget(one_edge, 0, empty);
    CHECK(cut.vertex_count() == 2);
    CHECK(cut.edge_count() == 0);

    const IsingInstance tri = anti_uniform(testing::triangle(), b);
    const GadgetSpec p2 = hand_spec(b, {{2, 1}});
    const IsingInstance spliced = splice_gadget(tri, 0, p2);
    CHECK(spliced.vertex_count() == 4);
    CHECK(spliced.edge_count() == 4);
}

TEST_CASE("spliced covariance sign equals the corner comparison on the base") {
    Xoshiro256pp rng(31337);
    const Rational b(1, 2);
    const std::vector<std::vector<std::pair<int, long>>> patterns = {
        {{2, 1}}, {{3, 1}}, {{2, 1}, {3, 1}}, {{3, 2}},
    };
    for (int trial = 0; trial < 8; ++trial) {
        const IsingInstance base_topology = testing::random_connected(rng, 4, 2);
        const IsingInstance g = anti_uniform(base_topology, b);
        const int edge = static_cast<int>(rng.uniform_below(
            static_cast<uint32_t>(g.edge_count())));
        const Edge e = g.edge(edge);
        for (const auto& pattern : patterns) {
            const GadgetSpec spec = hand_spec(b, pattern);
            const IsingInstance spliced = splice_gadget(g, edge, spec);
            if (spliced.vertex_count() > 14) continue;
            // base graph without the spliced edge
            std::vector<Edge> rest;
            for (int i = 0; i < g.edge_count(); ++i)
                if (i != edge) rest.push_back(g.edge(i));
            const IsingInstance base =
                IsingInstance::antiferromagnetic_uniform(g.vertex_count(), rest, b);
            const FourCorner c = four_corner(base, e.u, e.v);
            const int expected = (spec.beta_hat * c.z_pp - c.z_pm).sign();
            const int brute = ising_covariance_exact(spliced, e.u, e.v).sign();
            const int contracted = covariance_sign_contracted(spliced, e.u, e.v);
            CHECK(brute == expected);
            CHECK(contracted == expected);
        }
    }
}

TEST_CASE("contracted corner sums equal brute force on arbitrary graphs") {
    Xoshiro256pp rng(555);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_below(5));
        const IsingInstance base = testing::random_connected(
            rng, n, static_cast<int>(rng.uniform_below(5)),
            1 + static_cast<long>(rng.uniform_below(3)), 1 + static_cast<long>(rng.uniform_below(3)));
        const Vertex t = 1 + static_cast<Vertex>(rng.uniform_below(static_cast<uint32_t>(n - 1)));
        const auto [pp, pm] = corner_pair_contracted(base, 0, t);
        const FourCorner c = four_corner(base, 0, t);
        CHECK(pp == c.z_pp);
        CHECK(pm == c.z_pm);
    }
    // pendants, separate components and pure cycles all peel away
    const IsingInstance mixed(
        8, Mode::antiferromagnetic,
        {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 2}, {5, 6}, {6, 7}, {5, 7}},
        std::vector<Rational>(8, Rational(1, 2)));
    const auto [pp, pm] = corner_pair_contracted(mixed, 0, 2);
    const FourCorner c = four_corner(mixed, 0, 2);
    CHECK(pp == c.z_pp);
    CHECK(pm == c.z_pm);
}

TEST_CASE("sign oracle answers") {
    const Rational b(1, 2);
    // single antiferromagnetic edge: covariance (b-1)/(b+1) = -1/3
    const IsingInstance edge = IsingInstance::antiferromagnetic_uniform(2, {{0, 1}}, b);
    CHECK(ising_covariance_exact(edge, 0, 1) == Rational(-1, 3));
    CHECK(sign_oracle(edge, 0, 1) == Sign::non_positive);

    // two-edge path: the negatives multiply out, covariance 1/9
    const IsingInstance p2 = anti_path(2, b);
    CHECK(ising_covariance_exact(p2, 0, 2) == Rational(1, 9));
    CHECK(sign_oracle(p2, 0, 2) == Sign::non_negative);

    // exactly zero: either answer is correct; the library picks non-negative
    const IsingInstance split =
        IsingInstance::antiferromagnetic_uniform(4, {{0, 1}, {2, 3}}, b);
    CHECK(ising_covariance_exact(split, 0, 2) == Rational(0));
    CHECK(sign_oracle(split, 0, 2) == Sign::non_negative);
    CHECK(covariance_sign_contracted(split, 0, 2) == 0);
}

TEST_CASE("binary search pins nu on an edgeless base") {
    const Rational b(1, 2);
    const IsingInstance base(3, Mode::antiferromagnetic, {}, {});
    const Rational delta_prime(1, 1000);
    const NuSearch res =
        binary_search_nu(base, 0, 1, b, delta_prime, make_contracted_sign_oracle({}));
    CHECK((res.nu_hat - Rational(1)).abs() <= delta_prime);
    CHECK(res.hi - res.lo <= delta_prime);
    CHECK(res.queries > 0);
}

TEST_CASE("binary search recovers the two-edge-path corner ratio") {
    const Rational b(1, 2);
    // the triangle's first two edges in input order form the path 0-1-2
    const IsingInstance base = IsingInstance::antiferromagnetic_uniform(
        3, {{0, 1}, {1, 2}}, b);
    const FourCorner c = four_corner(base, 0, 2);
    const Rational nu = c.z_pm / c.z_pp;
    CHECK(nu == Rational(4, 5));  // 2b / (b^2 + 1)
    const Rational delta_prime(1, 100000);
    const NuSearch res =
        binary_search_nu(base, 0, 2, b, delta_prime, make_contracted_sign_oracle({}));
    CHECK((res.nu_hat - nu).abs() <= delta_prime);
    // at most a 2/3 length factor per query
    const Rational initial = b.pow(-3) - b.pow(3);
    Rational bound = initial;
    for (int k = 0; k < res.queries; ++k) bound = bound * Rational(2, 3);
    CHECK(res.hi - res.lo <= bound + delta_prime);
}

TEST_CASE("partition recovery round trips through sign queries") {
    const SignOracle oracle = make_contracted_sign_oracle({});
    const Rational half(1, 2);
    const Rational third(1, 3);

    const ReductionResult edge =
        recover_partition(testing::single_edge(), half, oracle, true);
    CHECK(edge.z == Rational(3));  // 2(b+1)

    const ReductionResult tri = recover_partition(testing::triangle(), half, oracle, true);
    CHECK(tri.z == Rational(13, 4));  // 2b^3 + 6b

    const ReductionResult tri3 = recover_partition(testing::triangle(), third, oracle, true);
    CHECK(tri3.z == ising_partition(anti_uniform(testing::triangle(), third)));

    const IsingInstance c4 = testing::cycle_graph(4);
    const ReductionResult cyc = recover_partition(c4, half, oracle, false);
    CHECK(cyc.z == ising_partition(anti_uniform(c4, half)));

    // no edges: every assignment has weight one
    const IsingInstance empty(3, Mode::ferromagnetic, {}, {});
    CHECK(recover_partition(empty, half, oracle).z == Rational(8));
}

TEST_CASE("recovery is robust to adversarial tie answers") {
    Xoshiro256pp coin(99);
    const OracleLimits limits{};
    const SignOracle randomized = [&](const IsingInstance& g, Vertex s, Vertex t) {
        const int sg = covariance_sign_contracted(g, s, t, limits);
        if (sg > 0) return Sign::non_negative;
        if (sg < 0) return Sign::non_positive;
        return coin.coin() ? Sign::non_negative : Sign::non_positive;
    };
    const Rational half(1, 2);
    const IsingInstance p3 = testing::path_graph(3);
    CHECK(recover_partition(p3, half, randomized, true).z ==
          ising_partition(anti_uniform(p3, half)));
}
