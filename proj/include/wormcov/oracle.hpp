#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "wormcov/errors.hpp"
#include "wormcov/graph.hpp"

namespace wormcov {

/// Enumeration caps for the exact oracles. Spin enumeration costs 2^n,
/// edge-subset enumeration costs 2^m; both are meant for desk-scale ground
/// truth only.
struct OracleLimits {
    int max_spin_vertices = 20;
    int max_edge_subsets = 24;
};

/// Z restricted by the spins at two vertices. Global spin flip forces
/// z_pp = z_mm and z_pm = z_mp.
struct FourCorner {
    Rational z_pp, z_pm, z_mp, z_mm;
    Rational total() const { return z_pp + z_pm + z_mp + z_mm; }
};

/// Sum over all 2^n spin assignments of prod_{e: endpoints agree} beta(e).
Rational ising_partition(const IsingInstance& g, const OracleLimits& limits = {},
                         int threads = 0);
/// Plain-loop reference for the parallel sweep above.
Rational ising_partition_serial(const IsingInstance& g, const OracleLimits& limits = {});

FourCorner four_corner(const IsingInstance& g, Vertex s, Vertex t,
                       const OracleLimits& limits = {});

/// (z_pp - z_pm - z_mp + z_mm) / Z, exact.
Rational ising_covariance_exact(const IsingInstance& g, Vertex s, Vertex t,
                                const OracleLimits& limits = {});

/// E[prod_{v in S} sigma(v)] under the Gibbs distribution, exact.
Rational spin_product_expectation(const IsingInstance& g, const std::vector<Vertex>& S,
                                  const OracleLimits& limits = {});

/// Z_S = sum over A subset E with odd-degree set exactly S of prod_{e in A} lambda(e).
/// Requires |S| in {0,2,4}; lambda entries in (0,1].
Rational even_partition(const IsingInstance& g, const std::vector<Rational>& lambda,
                        const std::vector<Vertex>& S, const OracleLimits& limits = {});

/// Bitmask over vertices (bit v set <=> v in S); needs n <= 32.
uint32_t vertex_mask(const std::vector<Vertex>& S);
std::vector<Vertex> mask_vertices(uint32_t mask, int n);

/// All Z_S with |S| <= max_odd in a single 2^m sweep, keyed by vertex mask.
std::map<uint32_t, Rational> even_partition_all(const IsingInstance& g,
                                                const std::vector<Rational>& lambda,
                                                int max_odd,
                                                const OracleLimits& limits = {});

/// E[prod_{v in S} sigma(v)] == Z_S / Z_empty, exactly (Ising vs even-subgraphs).
bool check_worm_identity(const IsingInstance& g, const std::vector<Vertex>& S,
                         const OracleLimits& limits = {});

/// Probability that T lies inside one component of (V,A) under the
/// random-cluster measure with p(e) = 1 - 1/beta(e).
Rational rc_connected_probability(const IsingInstance& g, const std::vector<Vertex>& T,
                                  const OracleLimits& limits = {});

/// Exact spin marginal of the Edwards-Sokal coupling (sample A from the
/// random-cluster measure, then assign an independent uniform spin to every
/// component). Indexed by spin mask: bit v set <=> sigma(v) = +1.
std::vector<Rational> edwards_sokal_spin_distribution(const IsingInstance& g,
                                                      const OracleLimits& limits = {});

/// Exact Gibbs distribution over spin masks.
std::vector<Rational> gibbs_distribution(const IsingInstance& g,
                                         const OracleLimits& limits = {});

/// Upward-closed event: A is in the event iff A contains some generator.
/// Monotonicity is structural in this representation.
struct MonotoneEvent {
    std::vector<uint32_t> generators;  // edge masks
    bool contains(uint32_t edge_set) const {
        for (uint32_t gmask : generators)
            if ((edge_set & gmask) == gmask) return true;
        return false;
    }
};

/// Pr(E1 and E2) >= Pr(E1) Pr(E2) under the random-cluster measure, exactly.
bool check_fkg(const IsingInstance& g, const MonotoneEvent& e1, const MonotoneEvent& e2,
               const OracleLimits& limits = {});

/// Z_empty/Z_S <= (Z_empty/Z_S') (Z_empty/Z_{S xor S'}), exactly, in the
/// cross-multiplied form Z_S Z_empty >= Z_S' Z_{S xor S'}. Requires even
/// |S|, |S'| and that empty != S' is not a proper subset of S.
bool check_weight_compare(const IsingInstance& g, const std::vector<Vertex>& S,
                          const std::vector<Vertex>& Sp, const OracleLimits& limits = {});

}  // namespace wormcov
