#pragma once

#include "mirrorcurve/bside.hpp"
#include "mirrorcurve/floer.hpp"

namespace mc {

/// Relative invariants of an ordered pair of v.b.-type objects:
/// r_e = r_e(L') - r_e(L), S_{e/v} = S_{e/v}(L') - S_{e/v}(L), and the
/// monodromy ratio u_{e/v} = R'_{e/v} R_{e/v}^{-1}.
struct PairData {
    std::vector<long> rotation;
    std::map<std::pair<EdgeId, VertexId>, Rat> area;
    std::map<std::pair<EdgeId, VertexId>, Novikov> unit;

    static PairData of(const TrivalentGraph& g, const VBObject& L, const VBObject& Lp,
                       const Rat& lambda);

    long rotation_of(EdgeId e) const { return rotation[std::size_t(e)]; }
    const Rat& area_of(EdgeId e, VertexId v) const { return area.at({e, v}); }
    const Novikov& unit_of(EdgeId e, VertexId v) const { return unit.at({e, v}); }
};

/// An element of the degree-0 model CF^0((L,E),(L',E'); H): a scalar per
/// vertex slot plus annulus data per edge slot (sections of the Hom bundle
/// over U_e, written in the frame of the edge's first endpoint).
struct PairElement {
    std::vector<Novikov> vertex;  // indexed by vertex
    std::vector<FuncUe> edge;     // indexed by edge

    PairElement(const BsideContext& ctx);
    PairElement& operator+=(const PairElement& o);
    bool is_zero() const;
    ExtRat norm_val() const;
};

/// The degree-0 operator model of a degree-zero-concentrated pair: slots,
/// the frame transition across edges, and the spreading operator whose
/// Neumann series reconstructs sections from Floer data. Requires all
/// relative rotation numbers positive and each area split strictly between
/// 0 and r_e A_e.
class PairModel {
  public:
    PairModel(const BsideContext& ctx, const TrivalentGraph& g, const VBObject& L,
              const VBObject& Lp);

    const BsideContext& context() const { return *ctx_; }
    const PairData& pair() const { return data_; }

    /// Hom-bundle frame change of edge data across e: in the frame of the
    /// other endpoint the monomial c t^m becomes
    /// u_{e/v} c T^{S_{e/v} + m A_e} t'^{-m - r_e}.
    FuncUe reframe(const FuncUe& f) const;

    /// One application of the spreading operator: a vertex slot restricts to
    /// its three edge slots; an edge monomial with a pole at a vertex spreads
    /// to the other two edge slots there (through the frame change at the far
    /// end). Entries follow the propagation expansions.
    PairElement spread(const PairElement& x) const;

    PairElement seed_vertex(VertexId v, const Novikov& phi) const;
    /// Seed from an intersection point on edge e with rotation rho and area S
    /// on the given half-edge side.
    PairElement seed_edge(EdgeId e, VertexId v, long rho, const Rat& S, const Novikov& phi) const;

    /// Certified minimal norm gain of a double application of the spreading
    /// operator over the truncated slot basis.
    Rat double_application_gain() const;

    /// Neumann series: sum of spread^n applied to the seed, mod T^lambda, with
    /// per-vertex accumulation of everything that spreads through each vertex
    /// (the theta function's U_v component).
    struct Accumulated {
        PairElement slots;
        std::vector<FuncUv> theta;  // per vertex
    };
    Accumulated neumann(const PairElement& seed) const;

  private:
    const BsideContext* ctx_;
    const TrivalentGraph* g_;
    PairData data_;
    long window_ = 0;

    void spread_step(const PairElement& x, PairElement& out, std::vector<FuncUv>* theta) const;
};

/// Checked relations of an intersection point's invariants against the pair:
/// r_{e/v} + r_{e/v'} = r_e and S_{e/v'} - S_{e/v} + r_{e/v} A_e = S_{e/v}(pair).
struct IntersectionPoint {
    EdgeId e;
    VertexId v;  // reference half-edge
    long rotation;
    Rat area;
    std::vector<std::string> validate(const TrivalentGraph& g, const PairData& pair) const;
    long far_rotation(const PairData& pair) const;
    Rat far_area(const TrivalentGraph& g, const PairData& pair) const;
};

}  // namespace mc
