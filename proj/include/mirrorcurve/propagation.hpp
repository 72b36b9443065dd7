#pragma once

#include <map>
#include <vector>

#include "mirrorcurve/graph.hpp"

namespace mc {

/// Dense truncated power series over Q: coefficients c_0..c_N.
struct PowerSeries {
    std::vector<Rat> coeffs;

    std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    Rat at(std::size_t i) const { return i < coeffs.size() ? coeffs[i] : Rat(0); }

    static PowerSeries constant(const Rat& c, std::size_t order);
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
    PowerSeries pow(long k) const;
};

/// Taylor coefficients of t_in^{-k} expanded in t = t_out around t = 0:
/// writing t_in as the Mobius function (alpha t + beta)/(gamma t + delta) of
/// t_out, with beta != 0, returns the expansion of its (-k)-th power up to
/// order N. Throws SingularExpansion when beta = 0.
PowerSeries expand_inverse_power(const MobiusQ& t_in, const MobiusQ& t_out, long k, std::size_t N);

/// Closed forms for the default charts. The pair class is the ordered pair of
/// marked points (of e_in and e_out); the cyclic classes {(0,1),(1,inf),(inf,0)}
/// give (-1)^{k_out} binom(k_in, k_out), the other three give
/// (-1)^{k_in} binom(k_out - 1, k_in - 1).
Rat closed_form_coefficient(Marked in, Marked out, long k_in, long k_out);

/// Constant term K_{k1,k2} of the partial-fraction decomposition of
/// t_1^{-k_1} t_2^{-k_2} over the basis {1, t_1^{-j}, t_2^{-j}}.
Rat partial_fraction_constant(const MobiusQ& t1, const MobiusQ& t2, long k1, long k2);

/// Cached propagation data at one vertex: C^{v;e,e'}_{k,l} for each ordered
/// pair of distinct half-edges (1 <= k <= k_max, 0 <= l <= l_max) and
/// K^{v;e1,e2}_{k1,k2} for 1 <= k1,k2 <= k_max. The index-0 convention
/// C_{0,l} = delta_{0,l} is available through coefficient().
class PropagationTable {
  public:
    PropagationTable(const TrivalentGraph& g, const VertexChart& charts, VertexId v, long k_max,
                     long l_max);

    VertexId vertex() const { return v_; }
    long k_max() const { return k_max_; }
    long l_max() const { return l_max_; }

    /// C^{v;e_in,e_out}_{k,l}; k = 0 yields delta_{0,l}. Requires k <= k_max, l <= l_max.
    Rat coefficient(EdgeId e_in, EdgeId e_out, long k, long l) const;
    /// K^{v;e1,e2}_{k1,k2}; either index 0 yields 0 (no constant component).
    Rat constant_term(EdgeId e1, EdgeId e2, long k1, long k2) const;

  private:
    VertexId v_;
    long k_max_, l_max_;
    std::array<EdgeId, 3> local_;                      // incident edges
    std::map<std::pair<int, int>, std::vector<PowerSeries>> c_;  // (slot_in, slot_out) -> per k
    std::map<std::pair<int, int>, std::vector<std::vector<Rat>>> k_;
    int slot(EdgeId e) const;
};

struct IdentityCheckEntry {
    std::string identity;  // backwards | forward | output_bounce | tripod
    VertexId vertex;
    std::array<EdgeId, 2> pair;
    std::vector<long> indices;
    bool pass;
    Rat lhs, rhs;
};

struct IdentityReport {
    std::vector<IdentityCheckEntry> failures;
    std::size_t checked = 0;
    bool all_pass() const { return failures.empty(); }
};

/// Exact verification of the four propagation-coefficient identities
/// (backwards, forward, output-bounce, tripod) for all index tuples with
/// entries <= k_bound, over every ordered pair of distinct half-edges at every
/// vertex of the graph.
IdentityReport check_propagation_identities(const TrivalentGraph& g, const VertexChart& charts,
                                            long k_bound);

}  // namespace mc
