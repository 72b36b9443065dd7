#pragma once

#include <map>
#include <string>
#include <vector>

#include "mirrorcurve/bside.hpp"
#include "mirrorcurve/novikov_linalg.hpp"

namespace mc {

/// Invariants of a vector-bundle-type object: rotation numbers per edge,
/// signed areas per half-edge, monodromy units per half-edge.
struct VBObject {
    std::vector<long> rotation;                           // indexed by edge
    std::map<std::pair<EdgeId, VertexId>, Rat> area;      // S_{e/v}
    std::map<std::pair<EdgeId, VertexId>, Novikov> monodromy;

    static VBObject structure_sheaf(const TrivalentGraph& g);
    /// r_e = r for every edge, areas split S_{e/v} = S_{e/v'} = r A_e / 2,
    /// trivial monodromies.
    static VBObject uniform(const TrivalentGraph& g, long r);

    long rotation_of(EdgeId e) const { return rotation[std::size_t(e)]; }
    const Rat& area_of(EdgeId e, VertexId v) const { return area.at({e, v}); }
    const Novikov& monodromy_of(EdgeId e, VertexId v) const { return monodromy.at({e, v}); }

    /// S_{e/v} + S_{e/v'} = r_e A_e; monodromies are units with
    /// R_{e/v} R_{e/v'} = 1 (the two directions of the parallel transport).
    std::vector<std::string> validate(const TrivalentGraph& g) const;
    long slope() const;
};

BundleCocycle bundle_cocycle(const TrivalentGraph& g, const VBObject& L);

/// One generator of the End(L0) complex. Annulus generators live on an edge
/// with exponent label m in the frame of the edge's first endpoint (the label
/// seen from the other endpoint is -m); saddle generators are indexed by a
/// half-edge and k >= 0.
struct FloerGenerator {
    enum class Kind { Node, Annulus, Saddle };
    Kind kind;
    VertexId v = -1;  // Node: the vertex; Saddle: the half-edge vertex
    EdgeId e = -1;    // Annulus / Saddle: the edge
    long k = 0;       // Annulus: frame exponent m; Saddle: k >= 0

    int degree() const { return kind == Kind::Saddle ? 1 : 0; }
    std::string name(const TrivalentGraph& g) const;
    friend bool operator==(const FloerGenerator&, const FloerGenerator&) = default;
    friend auto operator<=>(const FloerGenerator&, const FloerGenerator&) = default;
};

/// Truncated Floer complex CF*((L0),(L0); H) over the Novikov ring with the
/// idealized area convention: S(p_{e/v,-k}) = (3/4) k A_e for k >= 1,
/// S(p_{e/v,k}) = -(1/4) k A_e for k >= 0, saddle areas equal to the adjacent
/// annulus areas, and unit naive strips.
class EndComplex {
  public:
    EndComplex(const TrivalentGraph& g, const VertexChart& charts, Rat lambda, long k_max);

    const TrivalentGraph& graph() const { return *g_; }
    const VertexChart& charts() const { return *charts_; }
    const Rat& lambda() const { return lambda_; }
    long k_max() const { return k_max_; }

    const std::vector<FloerGenerator>& deg0() const { return deg0_; }
    const std::vector<FloerGenerator>& deg1() const { return deg1_; }
    const NovikovMatrix& differential() const { return d_; }  // deg0 -> deg1

    std::size_t index0(const FloerGenerator& gen) const;
    std::size_t index1(const FloerGenerator& gen) const;

    /// Annulus generator with label k in the frame of the half-edge e/v.
    FloerGenerator annulus_at(EdgeId e, VertexId v, long label) const;
    FloerGenerator node(VertexId v) const { return {FloerGenerator::Kind::Node, v, -1, 0}; }
    FloerGenerator saddle(EdgeId e, VertexId v, long k) const {
        return {FloerGenerator::Kind::Saddle, v, e, k};
    }

    /// The naive (low-area) part of the differential: the area-0 strips
    /// p_{e/v,k} -> q_{e/v,k} and p_v -> q_{e/v,0}.
    NovikovMatrix naive_differential() const;

    /// Local closed representatives of the quotient model at v:
    /// ptilde_v = p_v + sum over e/v of p_{e/v,0}, and
    /// ptilde_{e/v,-k} = p_{e/v,-k} + propagation corrections.
    std::vector<Novikov> rep_node(VertexId v) const;
    std::vector<Novikov> rep_annulus(VertexId v, EdgeId e, long k) const;

    /// The part of d x supported on the saddle generators at vertex v
    /// (the differential of the local quotient model at v).
    std::vector<Novikov> local_differential(VertexId v, const std::vector<Novikov>& x) const;

    /// The class of the global unit: sum of all node generators plus the
    /// label-0 annulus generators.
    std::vector<Novikov> unit_class() const;

  private:
    const TrivalentGraph* g_;
    const VertexChart* charts_;
    Rat lambda_;
    long k_max_;
    std::vector<FloerGenerator> deg0_, deg1_;
    std::map<FloerGenerator, std::size_t> idx0_, idx1_;
    NovikovMatrix d_;
};

struct CohomologyResult {
    std::size_t h0 = 0, h1 = 0;
    std::vector<std::vector<Novikov>> h0_basis;  // kernel vectors in the deg0 basis
    std::size_t rank = 0;
};

CohomologyResult cohomology_basis(const EndComplex& c);

/// Degree-0 generator of the reduced local model F(P_v): the node class or an
/// area-rescaled pole class (e, k >= 1).
struct LocalGen {
    bool is_unit = false;
    EdgeId e = -1;
    long k = 0;
    friend auto operator<=>(const LocalGen&, const LocalGen&) = default;
    friend bool operator==(const LocalGen&, const LocalGen&) = default;
};

using LocalCombination = std::map<LocalGen, Novikov>;

/// mu^2 on the reduced local model at v, in the area-rescaled basis
/// (hat p_{e/v,-k}): unit acts as identity, same-edge classes multiply
/// exponents, distinct edges decompose through K and C.
LocalCombination local_mu2(const BsideContext& ctx, VertexId v, const LocalGen& a,
                           const LocalGen& b);

/// mu^2 on the unrescaled classes p_{e/v,-k} = T^{(3/4) k A_e} hat p: the same
/// structure constants with the area weights restored.
LocalCombination local_mu2_unrescaled(const BsideContext& ctx, VertexId v, const LocalGen& a,
                                      const LocalGen& b);

/// Restriction of a local cohomology class to the edge algebra F(N_e):
/// a combination of edge generators, keyed by the label in the v frame.
std::map<long, Novikov> restriction_to_edge(const BsideContext& ctx, VertexId v, EdgeId e,
                                            const LocalGen& cls);

/// Dictionary of the local functor: the local class as a function on U_v
/// (unit -> 1, hat p_{e/v,-k} -> t_{e/v}^{-k}).
FuncUv local_class_to_function(const BsideContext& ctx, VertexId v, const LocalGen& cls);

/// Edge generators as functions on U_e (v frame): p_{e/v,m} -> T^{S(m)} t^m
/// with S(m) = -(1/4) m A for m >= 0 and (3/4) |m| A for m < 0.
Rat idealized_area(const TrivalentGraph& g, EdgeId e, long label);

}  // namespace mc
