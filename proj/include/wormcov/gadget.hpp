#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "wormcov/graph.hpp"
#include "wormcov/oracle.hpp"

namespace wormcov {

/// Corner sums of the uniform-b path with ell edges:
///   f_ell = Z_{s+,t+} = ((b+1)^ell + (b-1)^ell)/2,
///   a_ell = Z_{s+,t-} = ((b+1)^ell - (b-1)^ell)/2.
std::pair<Rational, Rational> path_corner_sums(int ell, const Rational& b);

/// zeta_ell = f_ell / a_ell, the edge weight a length-ell path implements.
Rational zeta(int ell, const Rational& b);

/// ceil(c^4 / (c^2 - 1)) with c = (b+1)/(b-1): the uniform bound on the
/// path multiplicities d_j for j >= 4.
long gadget_degree_bound(const Rational& b);

/// Two-terminal parallel-path gadget: d[j] copies of the j-edge path (only
/// j in 2..2L+1 are used) joined at the terminals, realizing
/// beta_hat = prod_j zeta_j^{d[j]}.
struct GadgetSpec {
    Rational b;
    Rational target;    // beta'
    Rational accuracy;  // requested |beta_hat - beta'| bound
    Rational beta_hat;
    int big_l = 0;               // L
    std::vector<long> d;         // index = path length; d[0] = d[1] = 0
    Vertex s = 0, t = 1;         // terminals of the realized graph
    long total_edges() const;
    long internal_vertices() const;
};

/// Greedy construction: for beta' > 1 spends even path lengths (zeta > 1,
/// decreasing), for beta' < 1 odd lengths (zeta < 1, increasing), always the
/// largest power that does not overshoot. Guarantees |beta_hat - beta'| <=
/// acc for beta' in [b^n, b^-n]. beta' = 1 yields the empty gadget.
GadgetSpec build_gadget(int n, const Rational& beta_prime, const Rational& acc,
                        const Rational& b);

/// The gadget as a graph: terminals 0 and 1, fresh internal path vertices,
/// every edge weighted b (antiferromagnetic).
IsingInstance realize_gadget(const GadgetSpec& spec);

/// Adds the gadget's paths to `base` between existing vertices s and t.
IsingInstance attach_gadget(const IsingInstance& base, Vertex s, Vertex t,
                            const GadgetSpec& spec);

/// Replaces edge `edge_index` by the gadget (terminals identified with the
/// edge's endpoints, internal vertices appended fresh).
IsingInstance splice_gadget(const IsingInstance& g, int edge_index, const GadgetSpec& spec);

/// Exact (Z_{s+,t+}, Z_{s+,t-}) of an instance. Internal vertices of degree
/// <= 2 are eliminated first (pendant/series/parallel rules, exact rational
/// arithmetic), so graphs made of many parallel s-t paths — in particular
/// everything build_gadget realizes or splices — collapse far below the
/// enumeration cap; the cap applies to the residual graph only.
std::pair<Rational, Rational> corner_pair_contracted(const IsingInstance& g, Vertex s,
                                                     Vertex t,
                                                     const OracleLimits& limits = {});

/// Z_{s+,t+} / Z_{s+,t-} via the contraction above.
Rational corner_ratio_contracted(const IsingInstance& g, Vertex s, Vertex t,
                                 const OracleLimits& limits = {});

/// Exact sign of the covariance at (s,t): -1, 0 or +1.
int covariance_sign_contracted(const IsingInstance& g, Vertex s, Vertex t,
                               const OracleLimits& limits = {});

enum class Sign { non_negative, non_positive };

/// Desk-scale stand-in for the sign decision problem: a correct one of the
/// two statements, via exact covariance under the enumeration cap. Returns
/// non_negative at exact zero.
Sign sign_oracle(const IsingInstance& g, Vertex s, Vertex t, const OracleLimits& limits = {});

using SignOracle = std::function<Sign(const IsingInstance&, Vertex, Vertex)>;

/// Sign oracle that answers spliced-gadget queries through the contraction;
/// ties answer non_negative.
SignOracle make_contracted_sign_oracle(const OracleLimits& limits = {});

struct NuSearch {
    Rational nu_hat;
    Rational lo, hi;  // final interval
    int queries = 0;
    std::vector<Rational> probes;  // implemented beta_hat per query
};

/// Binary search for nu = Z_{s+,t-}(base)/Z_{s+,t+}(base) over [b^n, b^-n]:
/// each round implements the interval midpoint to accuracy delta_prime/6,
/// attaches the gadget to (s,t), and keeps the side the sign oracle selects;
/// stops when the interval is no longer than delta_prime and returns its
/// midpoint. The interval shrinks by a factor of at least 2/3 per query.
NuSearch binary_search_nu(const IsingInstance& base, Vertex s, Vertex t, const Rational& b,
                          const Rational& delta_prime, const SignOracle& oracle);

struct EdgeRecovery {
    Edge e;
    Rational nu_hat;
    Rational alpha_hat;  // (b + nu_hat)/(1 + nu_hat)
    int queries = 0;
};

struct ReductionResult {
    Rational z;           // recovered partition function, exact
    Rational z_estimate;  // 2^n prod alpha_hat, before lattice rounding
    int m_prime = 0;
    Rational delta;
    Rational delta_prime;
    std::vector<EdgeRecovery> edges;
    uint64_t oracle_queries = 0;
};

/// Recovers Z of the uniform-b antiferromagnetic model on the input's
/// topology exactly, from sign queries only: telescopes Z = 2^n prod alpha_j
/// over the edges in input order, estimates each nu_j by binary search to
/// additive error delta' = b*delta/(5m) with delta = b^{m'} 2^{-(n+3)}, and
/// rounds the product to the lattice of representable values (multiples of
/// q^-m), whose spacing exceeds twice the accumulated error. With audit set,
/// every nu_hat is checked against the exact oracle (|nu_hat - nu| <= delta')
/// and the rounding window |Z_estimate - Z| <= b^{m'}/4 is enforced.
ReductionResult recover_partition(const IsingInstance& topology, const Rational& b,
                                  const SignOracle& oracle, bool audit = false,
                                  const OracleLimits& audit_limits = {});

}  // namespace wormcov
