#pragma once

#include <map>
#include <memory>

#include "mirrorcurve/novikov.hpp"
#include "mirrorcurve/propagation.hpp"
#include "mirrorcurve/schottky.hpp"

namespace mc {

/// Shared context for the function algebras: graph, charts, the norm cutoff
/// lambda, and a cache of propagation tables deep enough for the requested
/// indices.
class BsideContext {
  public:
    BsideContext(const TrivalentGraph& g, const VertexChart& charts, Rat lambda);

    const TrivalentGraph& graph() const { return *g_; }
    const VertexChart& charts() const { return *charts_; }
    const Rat& lambda() const { return lambda_; }

    const PropagationTable& table(VertexId v, long k_need, long l_need) const;

    /// Sup-norm weight of the monomial t_{e/v}^m on U_e (v-frame):
    /// (1/4) m A_e for m >= 0, (3/4) m A_e for m < 0.
    Rat ue_weight(EdgeId e, long m) const;
    /// Sup-norm weight of t_{e/v}^{-k} (k >= 1) on U_v: -(3/4) k A_e.
    Rat uv_weight(EdgeId e, long k) const;

    /// Largest pole order a function on U_v can carry at e/v with a unit
    /// coefficient and norm below the cutoff.
    long max_pole_order(EdgeId e) const;

  private:
    const TrivalentGraph* g_;
    const VertexChart* charts_;
    Rat lambda_;
    mutable std::map<VertexId, std::unique_ptr<PropagationTable>> tables_;
};

/// f = c_0 + sum_{e/v} sum_{k >= 1} c_{e,k} t_{e/v}^{-k} on U_v, truncated by
/// the sup norm: a term is kept iff val(c) - (3/4) k A_e < lambda.
class FuncUv {
  public:
    FuncUv(const BsideContext& ctx, VertexId v) : ctx_(&ctx), v_(v) {}

    VertexId vertex() const { return v_; }
    const BsideContext& context() const { return *ctx_; }
    const Novikov& constant() const { return const_; }
    const std::map<std::pair<EdgeId, long>, Novikov>& polar() const { return polar_; }

    static FuncUv constant_fn(const BsideContext& ctx, VertexId v, const Novikov& c);
    static FuncUv pole(const BsideContext& ctx, VertexId v, EdgeId e, long k, const Novikov& coeff);

    void add_constant(const Novikov& c);
    void add_pole(EdgeId e, long k, const Novikov& coeff);  // k >= 1
    void prune();

    FuncUv operator+(const FuncUv& o) const;
    FuncUv operator-() const;
    bool is_zero() const { return const_.is_zero() && polar_.empty(); }

    /// Norm valuation: min over terms of val(c) + weight. >= lambda means 0 on U_v.
    ExtRat norm_val() const;

    /// Evaluate at a point given in the z coordinate of the vertex sphere.
    Novikov evaluate(const Novikov& z, const ExtRat& prec) const;

    std::string str(const TrivalentGraph& g) const;

  private:
    const BsideContext* ctx_;
    VertexId v_;
    Novikov const_;
    std::map<std::pair<EdgeId, long>, Novikov> polar_;
};

/// Laurent data on the annulus U_e written in the frame of the half-edge e/v:
/// sum_m c_m t_{e/v}^m, kept iff val(c_m) + ue_weight(m) < lambda.
class FuncUe {
  public:
    FuncUe(const BsideContext& ctx, EdgeId e, VertexId frame) : ctx_(&ctx), e_(e), frame_(frame) {}

    EdgeId edge() const { return e_; }
    VertexId frame() const { return frame_; }
    const BsideContext& context() const { return *ctx_; }
    const std::map<long, Novikov>& coeffs() const { return coeffs_; }

    void add(long m, const Novikov& coeff);
    void prune();
    bool is_zero() const { return coeffs_.empty(); }
    ExtRat norm_val() const;

    FuncUe operator+(const FuncUe& o) const;
    FuncUe operator-() const;
    FuncUe operator*(const FuncUe& o) const;  // Laurent product on the annulus

    /// Same function rewritten in the frame of the other endpoint, using
    /// t_{e/v} t_{e/v'} = q_e.
    FuncUe reframed() const;

    /// Evaluate at a point with t_{e/frame} = t.
    Novikov evaluate(const Novikov& t, const ExtRat& prec) const;

    std::string str(const TrivalentGraph& g) const;

  private:
    const BsideContext* ctx_;
    EdgeId e_;
    VertexId frame_;
    std::map<long, Novikov> coeffs_;
};

/// Product of two functions on U_v: same-edge monomials multiply exponents,
/// distinct-edge monomials decompose through the C and K coefficients.
FuncUv multiply_uv(const FuncUv& f, const FuncUv& g);

/// Restriction of a function on U_v to the annulus U_e (result in the v frame).
FuncUe restrict_uv_to_ue(const FuncUv& f, EdgeId e);

/// Rewrite annulus data as a function on U_v: nonpositive exponents are polar
/// monomials at e/v; positive powers of t_{e/v} expand exactly through the
/// half-edge whose marked point is the pole of t_{e/v}.
FuncUv annulus_to_uv(const FuncUe& f, VertexId v);

/// Laurent expansion of the Mobius function (a t + b)/(c t + d) of t = t_{e/v}
/// on the annulus U_e. Throws PoleOnOrbit when the pole of the function lies
/// on the annulus (within the cutoff).
FuncUe mobius_on_ue(const BsideContext& ctx, const MobiusN& m, EdgeId e, VertexId frame);

/// Polar expansion on U_v of c * M(t)^{-rho}, where M expresses some global
/// coordinate as a Mobius function of the charts at v. Each marked point
/// receives the tail of the expansion whose pole lies inside its disk.
FuncUv mobius_power_on_uv(const BsideContext& ctx, VertexId v, const MobiusN& to_chart_of_first,
                          EdgeId reference_edge, long rho, const Novikov& scale);

/// Gluing data of the line bundle attached to a v.b.-type object.
struct BundleCocycle {
    struct Entry {
        Novikov unit;  // monodromy factor R_{e/v}
        Rat area;      // S_{e/v}(L)
        long rotation; // r_e(L)
    };
    std::map<std::pair<EdgeId, VertexId>, Entry> entries;
    long slope = 0;
};

/// Degree-1 part of the two-step complex: per vertex an element of
/// V_v = span(e_{e1/v}, e_{e2/v}, e_{e3/v}) / (sum = 0), stored canonically
/// with the last incident edge's slot set to zero.
class CechDegree1 {
  public:
    explicit CechDegree1(const TrivalentGraph& g) : g_(&g), slots_(g.num_vertices()) {}

    void add(VertexId v, EdgeId e, const Novikov& c);
    /// xi^{e,e'}_v = e_{e/v}^* - e_{e'/v}^*, well defined on V_v.
    Novikov xi(VertexId v, EdgeId e, EdgeId eprime) const;
    void canonicalize();
    bool is_zero_mod(const Rat& lambda) const;

  private:
    const TrivalentGraph* g_;
    std::vector<std::map<EdgeId, Novikov>> slots_;
};

/// Value of the constant degree-1 class on each basis loop (the map to group
/// cohomology): sum of xi^{e_i, e_{i+1}}_{v_i} along the loop, with e_{n+1}
/// wrapping to e_1.
std::vector<Novikov> cech_cocycle_on_loops(const CechDegree1& a, const TrivalentGraph& g,
                                           const std::vector<ReducedPath>& loops);

struct PrincipalPartsResult {
    /// f_e as annulus data (frame = first endpoint of e); empty when a pole of
    /// some path term lies on the annulus, in which case only the boundary is
    /// reported. The sheaf of sections allows such poles; the Laurent window
    /// does not.
    std::vector<FuncUe> sections;
    bool sections_available = false;
    CechDegree1 boundary;    // d({f_e}), the constant degree-1 element
    ExtRat constancy_defect; // disagreement of the two sample evaluations (>= lambda when well formed)
};

/// Sections f_e of the principal-parts sheaf of phi = s/(t - s) attached to
/// the half-edge e0/v0, by path summation. The boundary d({f_e}) lands in the
/// constant subcomplex; its entries are extracted by evaluating the section
/// differences at a common sample point of each W_v, and constancy is asserted
/// by comparing two sample points.
PrincipalPartsResult cech_principal_parts(const BsideContext& ctx, const Novikov& s, EdgeId e0,
                                          VertexId v0, const Rat& budget, std::size_t cap);

}  // namespace mc
