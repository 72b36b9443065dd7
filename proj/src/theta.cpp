#include "mirrorcurve/theta.hpp"

#include "mirrorcurve/schottky.hpp"

namespace mc {

FuncUe mobius_power_on_ue(const BsideContext& ctx, const MobiusN& m, long power, EdgeId e,
                          VertexId frame) {
    if (power == 0) {
        FuncUe one(ctx, e, frame);
        one.add(0, Novikov::one());
        return one;
    }
    MobiusN base = power > 0 ? m : MobiusN{m.c, m.d, m.a, m.b};  // reciprocal as a function
    FuncUe acc = mobius_on_ue(ctx, base, e, frame);
    FuncUe out = acc;
    for (long i = 1; i < std::labs(power); ++i) out = out * acc;
    return out;
}

FuncUv expand_product_on_uv(const BsideContext& ctx, VertexId v,
                            const std::vector<std::pair<MobiusN, long>>& factors,
                            const Novikov& scale) {
    const TrivalentGraph& g = ctx.graph();
    const Rat lambda = ctx.lambda();
    FuncUv out(ctx, v);
    if (scale.is_zero()) return out;

    // polar tails per marked disk from the annulus Laurent of the product
    std::vector<std::pair<EdgeId, std::map<long, Novikov>>> tails;
    for (EdgeId f : g.incident(v)) {
        MobiusN chart_adj = to_novikov(ctx.charts().chart(v, f)).adjugate();
        FuncUe prod(ctx, f, v);
        prod.add(0, Novikov::one());
        for (const auto& [core, k] : factors) {
            if (k == 0) continue;
            MobiusN wf = normalize_valuation(core.compose(chart_adj));
            prod = prod * mobius_power_on_ue(ctx, wf, -k, f, v);
        }
        std::map<long, Novikov> tail;
        for (const auto& [mm, c] : prod.coeffs())
            if (mm < 0 && !c.is_zero()) tail[mm] = c;
        if (!tail.empty()) tails.push_back({f, std::move(tail)});
    }
    for (const auto& [f, tail] : tails)
        for (const auto& [mm, c] : tail) out.add_pole(f, -mm, scale * c);

    // constant by sample evaluation
    const ExtRat wprec = ExtRat::of(2 * lambda + 8 * g.max_area());
    for (long z0 : {2, 3, 5, 7, 11, 13}) {
        try {
            Novikov full = scale;
            for (const auto& [core, k] : factors) {
                auto img = core.apply_proj(Novikov(Rat(z0)), Novikov::one());
                full = full * proj_power(img, -k, wprec);
            }
            Novikov tail_vals;
            bool bad = false;
            for (const auto& [f, tail] : tails) {
                MobiusQ cf = ctx.charts().chart(v, f);
                Rat tn = cf.a * Rat(z0) + cf.b, td = cf.c * Rat(z0) + cf.d;
                if (tn == 0 || td == 0) {
                    bad = true;
                    break;
                }
                std::array<Novikov, 2> tf{Novikov(tn), Novikov(td)};
                for (const auto& [mm, c] : tail)
                    tail_vals += (scale * c) * proj_power(tf, mm, wprec);
            }
            if (bad) continue;
            out.add_constant((full - tail_vals).truncated(lambda));
            out.prune();
            return out;
        } catch (const ZeroDivision&) {
            continue;
        }
    }
    throw SpecError("no usable sample point for the product expansion");
}

ThetaSeed ThetaSeed::node(VertexId v, const Novikov& phi) {
    ThetaSeed s;
    s.at_node = true;
    s.v0 = v;
    s.phi = phi;
    return s;
}

ThetaSeed ThetaSeed::interior(const TrivalentGraph& g, const PairData& pair,
                              const IntersectionPoint& x, const Novikov& phi) {
    ThetaSeed s;
    s.at_node = false;
    s.v0 = x.v;
    s.e0 = x.e;
    s.rotation = x.rotation;
    s.area = x.area;
    s.phi = phi;
    auto issues = x.validate(g, pair);
    if (!issues.empty()) throw SpecError("bad intersection point: " + issues.front());
    return s;
}

ThetaResult theta_by_averaging(const PairModel& pm, const ThetaSeed& seed, const Rat& budget,
                               std::size_t cap) {
    const BsideContext& ctx = pm.context();
    const TrivalentGraph& g = ctx.graph();
    const ExtRat wprec = ExtRat::of(2 * ctx.lambda() + 8 * g.max_area());
    SchottkyGroupoid groupoid(g, ctx.charts(), wprec);

    std::vector<FuncUv> theta;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) theta.push_back(FuncUv(ctx, VertexId(v)));

    // walker state: transport cores of the seed coordinate and of each
    // traversed half-edge coordinate, all in the z frame of the current sphere
    struct State {
        ReducedPath path;
        Novikov scalar;
        std::vector<std::pair<MobiusN, long>> cores;
    };
    auto clipm = [&](MobiusN m) {
        m = normalize_valuation(m);
        for (Novikov* x : {&m.a, &m.b, &m.c, &m.d})
            *x = x->truncated(wprec);
        return m;
    };

    State root;
    root.path = ReducedPath{seed.v0, {}};
    root.scalar = seed.phi * Novikov::t_power(seed.area);
    if (!seed.at_node)
        root.cores.push_back({to_novikov(ctx.charts().chart(seed.v0, seed.e0)), seed.rotation});

    std::size_t count = 1;
    std::vector<State> frontier{root};
    auto visit = [&](const State& st) {
        VertexId v = st.path.end(g);
        theta[std::size_t(v)] =
            theta[std::size_t(v)] + expand_product_on_uv(ctx, v, st.cores, st.scalar);
    };
    visit(root);
    while (!frontier.empty()) {
        std::vector<State> next;
        for (const auto& st : frontier) {
            VertexId v = st.path.end(g);
            for (EdgeId e : g.incident(v)) {
                if (!st.path.edges.empty() && e == st.path.edges.back()) continue;
                State ns;
                ns.path = st.path;
                ns.path.edges.push_back(e);
                if (ns.path.weight(g) > budget) continue;
                if (++count > cap) throw CapExceeded("averaging path walk exceeded cap");
                MobiusN step = groupoid.generator(e, v).adjugate();
                ns.scalar = (st.scalar * pm.pair().unit_of(e, v) *
                             Novikov::t_power(pm.pair().area_of(e, v)))
                                .truncated(wprec);
                ns.cores.reserve(st.cores.size() + 1);
                for (const auto& [core, k] : st.cores) ns.cores.push_back({clipm(core.compose(step)), k});
                VertexId vp = g.other_end(e, v);
                ns.cores.push_back(
                    {clipm(to_novikov(ctx.charts().chart(vp, e)).compose(step)), pm.pair().rotation_of(e)});
                visit(ns);
                next.push_back(std::move(ns));
            }
        }
        frontier = std::move(next);
    }

    ThetaResult out;
    out.theta = std::move(theta);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(EdgeId(e));
        out.slots.push_back(restrict_uv_to_ue(out.theta[std::size_t(ed.ends[0])], EdgeId(e)));
    }
    return out;
}

namespace {

// Rebuild the per-vertex function from slot data: polar parts are the negative
// exponents of the incident slots, the constant comes from the exponent-0
// coefficient corrected by the other poles' expansion constants.
FuncUv theta_from_slots(const PairModel& pm, VertexId v, const std::vector<FuncUe>& slots) {
    const BsideContext& ctx = pm.context();
    const TrivalentGraph& g = ctx.graph();
    FuncUv out(ctx, v);
    for (EdgeId e : g.incident(v)) {
        FuncUe local = slots[std::size_t(e)];
        if (local.frame() != v) local = pm.reframe(local);
        for (const auto& [m, c] : local.coeffs())
            if (m < 0) out.add_pole(e, -m, c);
    }
    // constant from the first incident edge's zero coefficient
    EdgeId e = g.incident(v)[0];
    FuncUe local = slots[std::size_t(e)];
    if (local.frame() != v) local = pm.reframe(local);
    Novikov c0;
    if (auto it = local.coeffs().find(0); it != local.coeffs().end()) c0 = it->second;
    for (const auto& [key, c] : out.polar()) {
        if (key.first == e) continue;
        Rat coef = ctx.table(v, key.second, 0).coefficient(key.first, e, key.second, 0);
        if (coef != 0) c0 -= c * coef;
    }
    out.add_constant(c0);
    out.prune();
    return out;
}

}  // namespace

ThetaResult theta_by_hpl(const PairModel& pm, const ThetaSeed& seed) {
    const BsideContext& ctx = pm.context();
    const TrivalentGraph& g = ctx.graph();
    PairElement start = seed.at_node
                            ? pm.seed_vertex(seed.v0, seed.phi)
                            : pm.seed_edge(seed.e0, seed.v0, seed.rotation, seed.area, seed.phi);
    auto acc = pm.neumann(start);
    ThetaResult out;
    out.slots = acc.slots.edge;
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        out.theta.push_back(theta_from_slots(pm, VertexId(v), out.slots));
    return out;
}

ExtRat gluing_defect(const PairModel& pm, const std::vector<FuncUv>& theta) {
    const BsideContext& ctx = pm.context();
    const TrivalentGraph& g = ctx.graph();
    ExtRat worst = ExtRat::infinity();
    for (std::size_t ei = 0; ei < g.num_edges(); ++ei) {
        const Edge& ed = g.edge(EdgeId(ei));
        FuncUe a = restrict_uv_to_ue(theta[std::size_t(ed.ends[0])], EdgeId(ei));
        FuncUe b = restrict_uv_to_ue(theta[std::size_t(ed.ends[1])], EdgeId(ei));
        FuncUe b0 = pm.reframe(b);  // bring the far-frame data to the canonical frame
        FuncUe diff = a + (-b0);
        worst = ExtRat::min(worst, diff.norm_val());
    }
    return worst;
}

ExtRat theta_difference(const ThetaResult& a, const ThetaResult& b) {
    ExtRat worst = ExtRat::infinity();
    for (std::size_t e = 0; e < a.slots.size(); ++e) {
        FuncUe diff = a.slots[e] + (-b.slots[e]);
        worst = ExtRat::min(worst, diff.norm_val());
    }
    for (std::size_t v = 0; v < a.theta.size(); ++v) {
        FuncUv diff = a.theta[v] + (-b.theta[v]);
        worst = ExtRat::min(worst, diff.norm_val());
    }
    return worst;
}

}  // namespace mc
