#include "mirrorcurve/pair_model.hpp"

namespace mc {

PairData PairData::of(const TrivalentGraph& g, const VBObject& L, const VBObject& Lp,
                      const Rat& lambda) {
    PairData d;
    const ExtRat prec = ExtRat::of(2 * lambda + 4 * g.max_area());
    for (std::size_t ei = 0; ei < g.num_edges(); ++ei) {
        const Edge& e = g.edge(EdgeId(ei));
        d.rotation.push_back(Lp.rotation_of(EdgeId(ei)) - L.rotation_of(EdgeId(ei)));
        for (VertexId v : {e.ends[0], e.ends[1]}) {
            d.area[{EdgeId(ei), v}] = Lp.area_of(EdgeId(ei), v) - L.area_of(EdgeId(ei), v);
            d.unit[{EdgeId(ei), v}] =
                Lp.monodromy_of(EdgeId(ei), v) * L.monodromy_of(EdgeId(ei), v).inverse(prec);
        }
    }
    return d;
}

PairElement::PairElement(const BsideContext& ctx) {
    const TrivalentGraph& g = ctx.graph();
    vertex.assign(g.num_vertices(), Novikov());
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        edge.push_back(FuncUe(ctx, EdgeId(e), g.edge(EdgeId(e)).ends[0]));
}

PairElement& PairElement::operator+=(const PairElement& o) {
    for (std::size_t v = 0; v < vertex.size(); ++v) vertex[v] += o.vertex[v];
    for (std::size_t e = 0; e < edge.size(); ++e) edge[e] = edge[e] + o.edge[e];
    return *this;
}

bool PairElement::is_zero() const {
    for (const auto& c : vertex)
        if (!c.is_zero()) return false;
    for (const auto& f : edge)
        if (!f.is_zero()) return false;
    return true;
}

ExtRat PairElement::norm_val() const {
    ExtRat m = ExtRat::infinity();
    for (const auto& c : vertex)
        if (!c.is_zero()) m = ExtRat::min(m, c.val());
    for (const auto& f : edge) m = ExtRat::min(m, f.norm_val());
    return m;
}

std::vector<std::string> IntersectionPoint::validate(const TrivalentGraph& g,
                                                     const PairData& pair) const {
    std::vector<std::string> issues;
    long r = pair.rotation_of(e);
    VertexId vp = g.other_end(e, v);
    long rho_far = r - rotation;
    (void)rho_far;
    // S_{e/v'}(x) - S_{e/v}(x) + r_{e/v}(x) A_e = S_{e/v}(L, L')
    Rat far = area - Rat(rotation) * g.edge(e).area + pair.area_of(e, v);
    (void)far;  // derived, no constraint beyond the defining relations
    (void)vp;
    return issues;
}

long IntersectionPoint::far_rotation(const PairData& pair) const {
    return pair.rotation_of(e) - rotation;
}

Rat IntersectionPoint::far_area(const TrivalentGraph& g, const PairData& pair) const {
    return area - Rat(rotation) * g.edge(e).area + pair.area_of(e, v);
}

PairModel::PairModel(const BsideContext& ctx, const TrivalentGraph& g, const VBObject& L,
                     const VBObject& Lp)
    : ctx_(&ctx), g_(&g), data_(PairData::of(g, L, Lp, ctx.lambda())) {
    for (std::size_t ei = 0; ei < g.num_edges(); ++ei) {
        const Edge& e = g.edge(EdgeId(ei));
        long r = data_.rotation_of(EdgeId(ei));
        if (r <= 0)
            throw NotDegreeZeroConcentrated("relative rotation on edge " + e.name +
                                            " is not positive");
        for (VertexId v : {e.ends[0], e.ends[1]}) {
            const Rat& s = data_.area_of(EdgeId(ei), v);
            if (!(s > 0 && s < Rat(r) * e.area))
                throw NotDegreeZeroConcentrated("area split on edge " + e.name +
                                                " is not strictly between 0 and r A");
        }
    }
    long rmax = 0;
    for (long r : data_.rotation) rmax = std::max(rmax, r);
    window_ = rat_ceil(4 * ctx.lambda() / g.min_area()) + rmax + 1;
}

FuncUe PairModel::reframe(const FuncUe& f) const {
    const Edge& ed = g_->edge(f.edge());
    VertexId v = f.frame();
    VertexId vp = g_->other_end(f.edge(), v);
    long r = data_.rotation_of(f.edge());
    Novikov u = data_.unit_of(f.edge(), v);
    const Rat& S = data_.area_of(f.edge(), v);
    FuncUe out(*ctx_, f.edge(), vp);
    for (const auto& [m, c] : f.coeffs())
        out.add(-m - r, u * c * Novikov::t_power(S + Rat(m) * ed.area));
    return out;
}

static FuncUe to_frame(const PairModel& pm, const FuncUe& f, VertexId target) {
    return f.frame() == target ? f : pm.reframe(f);
}

void PairModel::spread_step(const PairElement& x, PairElement& out,
                            std::vector<FuncUv>* theta) const {
    const TrivalentGraph& g = *g_;
    const Rat& lambda = ctx_->lambda();

    auto spread_at = [&](VertexId w, EdgeId from_e, long n, const Novikov& c) {
        // the U_w-function c t_{from_e/w}^{-n} spreads to the other two edges
        if (theta && !c.is_zero()) (*theta)[std::size_t(w)].add_pole(from_e, n, c);
        if (c.is_zero()) return;
        Rat cval = c.val().is_inf() ? lambda : c.val().value();
        for (EdgeId e2 : g.incident(w)) {
            if (e2 == from_e) continue;
            const Rat& a2 = g.edge(e2).area;
            long lcap = rat_ceil(4 * (lambda - cval) / a2) + 1;
            const PropagationTable& tab = ctx_->table(w, n, lcap);
            FuncUe add(*ctx_, e2, w);
            for (long l = 0; l <= lcap; ++l) {
                Rat coef = tab.coefficient(from_e, e2, n, l);
                if (coef != 0) add.add(l, c * coef);
            }
            out.edge[std::size_t(e2)] = out.edge[std::size_t(e2)] + add;
        }
    };

    for (std::size_t vi = 0; vi < x.vertex.size(); ++vi) {
        const Novikov& phi = x.vertex[vi];
        if (phi.is_zero()) continue;
        if (theta) (*theta)[vi].add_constant(phi);
        for (EdgeId e : g.incident(VertexId(vi))) {
            FuncUe add(*ctx_, e, VertexId(vi));
            add.add(0, phi);
            out.edge[std::size_t(e)] = out.edge[std::size_t(e)] + add;
        }
    }
    for (std::size_t ei = 0; ei < x.edge.size(); ++ei) {
        const FuncUe& f = x.edge[ei];
        if (f.is_zero()) continue;
        const Edge& ed = g.edge(EdgeId(ei));
        long r = data_.rotation_of(EdgeId(ei));
        // poles at the canonical end
        for (const auto& [m, c] : f.coeffs())
            if (m < 0) spread_at(ed.ends[0], EdgeId(ei), -m, c);
        // poles at the far end, through the Hom frame change
        FuncUe far = reframe(f);
        for (const auto& [m, c] : far.coeffs())
            if (m < 0) spread_at(ed.ends[1], EdgeId(ei), -m, c);
        (void)r;
    }
}

PairElement PairModel::spread(const PairElement& x) const {
    PairElement out(*ctx_);
    spread_step(x, out, nullptr);
    return out;
}

PairElement PairModel::seed_vertex(VertexId v, const Novikov& phi) const {
    PairElement x(*ctx_);
    x.vertex[std::size_t(v)] = phi.truncated(ctx_->lambda());
    return x;
}

PairElement PairModel::seed_edge(EdgeId e, VertexId v, long rho, const Rat& S,
                                 const Novikov& phi) const {
    PairElement x(*ctx_);
    FuncUe f(*ctx_, e, v);
    f.add(-rho, phi * Novikov::t_power(S));
    x.edge[std::size_t(e)] = to_frame(*this, f, g_->edge(e).ends[0]);
    return x;
}

Rat PairModel::double_application_gain() const {
    Rat gain = 4 * ctx_->lambda();
    bool any = false;
    auto measure = [&](const PairElement& x, const Rat& in_norm) {
        PairElement y = spread(spread(x));
        ExtRat nv = y.norm_val();
        if (nv.is_inf()) return;
        any = true;
        gain = rat_min(gain, nv.value() - in_norm);
    };
    for (std::size_t v = 0; v < g_->num_vertices(); ++v) {
        PairElement x(*ctx_);
        x.vertex[v] = Novikov::one();
        measure(x, Rat(0));
    }
    for (std::size_t ei = 0; ei < g_->num_edges(); ++ei)
        for (long m = -window_; m <= window_; ++m) {
            Rat w = ctx_->ue_weight(EdgeId(ei), m);
            if (w >= ctx_->lambda()) continue;
            PairElement x(*ctx_);
            FuncUe f(*ctx_, EdgeId(ei), g_->edge(EdgeId(ei)).ends[0]);
            f.add(m, Novikov::one());
            x.edge[ei] = f;
            if (x.edge[ei].is_zero()) continue;
            measure(x, w);
        }
    if (!any) return ctx_->lambda();
    if (!(gain > 0)) throw NotNilpotent("double application of the spreading operator gains nothing");
    return gain;
}

PairModel::Accumulated PairModel::neumann(const PairElement& seed) const {
    Rat eps = double_application_gain();
    long max_steps = 2 * rat_ceil((2 * ctx_->lambda() + 4 * g_->max_area()) / eps) + 4;

    Accumulated acc{PairElement(*ctx_), {}};
    for (std::size_t v = 0; v < g_->num_vertices(); ++v)
        acc.theta.push_back(FuncUv(*ctx_, VertexId(v)));

    PairElement cur = seed;
    acc.slots += cur;
    for (long s = 0; s < max_steps; ++s) {
        PairElement next(*ctx_);
        spread_step(cur, next, &acc.theta);
        if (next.is_zero()) return acc;
        acc.slots += next;
        cur = std::move(next);
    }
    throw NotNilpotent("spreading series failed to terminate within the certified bound");
}

}  // namespace mc
