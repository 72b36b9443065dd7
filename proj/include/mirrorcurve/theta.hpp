#pragma once

#include "mirrorcurve/pair_model.hpp"

namespace mc {

/// Laurent data of the function M(t)^{power} of t = t_{e/frame} on the
/// annulus U_e; power may be negative.
FuncUe mobius_power_on_ue(const BsideContext& ctx, const MobiusN& m, long power, EdgeId e,
                          VertexId frame);

/// Expansion on U_v of scale * prod_j W_j(t)^{-k_j}, where each W_j sends the
/// z coordinate of the vertex sphere to a coordinate value. Polar tails are
/// collected at the marked disks containing the factors' poles; the constant
/// is recovered by sample evaluation.
FuncUv expand_product_on_uv(const BsideContext& ctx, VertexId v,
                            const std::vector<std::pair<MobiusN, long>>& factors,
                            const Novikov& scale);

struct ThetaSeed {
    bool at_node = true;
    VertexId v0 = 0;     // base vertex (the node for node seeds)
    EdgeId e0 = -1;      // host edge for interior seeds
    long rotation = 0;   // r_{e0/v0}(x)
    Rat area = Rat(0);   // S_{e0/v0}(x)
    Novikov phi = Novikov::one();

    static ThetaSeed node(VertexId v, const Novikov& phi);
    static ThetaSeed interior(const TrivalentGraph& g, const PairData& pair,
                              const IntersectionPoint& x, const Novikov& phi);
};

struct ThetaResult {
    std::vector<FuncUv> theta;  // one function on U_v per vertex
    std::vector<FuncUe> slots;  // restrictions to the annuli (canonical frames)
};

/// Path-sum route: for each vertex, the sum over reduced paths from the seed's
/// base vertex of the transported seed section, expanded on U_v.
ThetaResult theta_by_averaging(const PairModel& pm, const ThetaSeed& seed, const Rat& budget,
                               std::size_t cap);

/// Operator route: the Neumann series of the spreading operator applied to the
/// seed in the degree-0 slot model, mapped back to per-vertex functions.
ThetaResult theta_by_hpl(const PairModel& pm, const ThetaSeed& seed);

/// Worst disagreement of the two annulus restrictions of theta across each
/// edge (via the Hom frame change); infinity when consistent mod the cutoff.
ExtRat gluing_defect(const PairModel& pm, const std::vector<FuncUv>& theta);

/// Worst difference between two theta results, measured slotwise.
ExtRat theta_difference(const ThetaResult& a, const ThetaResult& b);

}  // namespace mc
