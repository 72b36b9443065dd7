#include "mirrorcurve/schottky.hpp"

#include <map>

#include "mirrorcurve/propagation.hpp"

namespace mc {

MobiusN SchottkyGroupoid::generator(EdgeId e, VertexId v) const {
    const Edge& ed = g_->edge(e);
    VertexId vp = g_->other_end(e, v);
    MobiusN cv = to_novikov(charts_->chart(v, e));
    MobiusN cvp = to_novikov(charts_->chart(vp, e));
    Novikov q = Novikov::t_power(ed.area);
    MobiusN inversion{Novikov::zero(), q, Novikov::one(), Novikov::zero()};  // t -> q/t
    return cvp.adjugate().compose(inversion).compose(cv);
}

MobiusN SchottkyGroupoid::clip(MobiusN m) const {
    if (prec_.is_inf()) return m;
    m = normalize_valuation(m);
    for (Novikov* e : {&m.a, &m.b, &m.c, &m.d}) *e = e->truncated(prec_);
    return m;
}

MobiusN SchottkyGroupoid::core_start(EdgeId e0, VertexId v0) const {
    if (!g_->is_incident(e0, v0)) throw IncompatibleEndpoints("e0 not incident to the start vertex");
    return to_novikov(charts_->chart(v0, e0));
}

MobiusN SchottkyGroupoid::core_extend(const MobiusN& core, EdgeId e, VertexId from) const {
    return clip(core.compose(generator(e, from).adjugate()));
}

MobiusN SchottkyGroupoid::core_finish(const MobiusN& core, EdgeId e, VertexId end) const {
    if (!g_->is_incident(e, end)) throw IncompatibleEndpoints("e not incident to the path end");
    return clip(core.compose(to_novikov(charts_->chart(end, e)).adjugate()));
}

MobiusN SchottkyGroupoid::path_transport(const ReducedPath& p, EdgeId e0, EdgeId e) const {
    p.check(*g_);
    MobiusN acc = core_start(e0, p.start);
    VertexId v = p.start;
    for (EdgeId ei : p.edges) {
        acc = core_extend(acc, ei, v);
        v = g_->other_end(ei, v);
    }
    return normalize_valuation(core_finish(acc, e, v));
}

MobiusN SchottkyGroupoid::loop_action(const ReducedPath& p) const {
    p.check(*g_);
    MobiusN acc = MobiusN::identity();
    VertexId v = p.start;
    for (EdgeId ei : p.edges) {
        acc = generator(ei, v).compose(acc);
        v = g_->other_end(ei, v);
    }
    return normalize_valuation(acc);
}

Novikov propagation_series_sum(const SchottkyGroupoid& s, const ReducedPath& p, EdgeId e0, EdgeId e,
                               long k, const Rat& lambda) {
    const TrivalentGraph& g = s.graph();
    p.check(g);
    if (!p.edges.empty() && p.edges.front() == e0)
        throw SpecError("series sum needs e1 != e0 at the path start");
    if (!p.edges.empty() && p.edges.back() == e)
        throw SpecError("series sum needs e != en at the path end");
    if (p.edges.empty() && e == e0) throw SpecError("series sum needs e != e0 for the empty path");
    long bound = std::max<long>(k, rat_ceil(lambda / g.min_area()) + 1);
    std::map<VertexId, PropagationTable> tables;
    auto table = [&](VertexId v) -> const PropagationTable& {
        auto it = tables.find(v);
        if (it == tables.end())
            it = tables.emplace(v, PropagationTable(g, s.charts(), v, bound, bound)).first;
        return it->second;
    };

    auto vs = p.vertices(g);
    // Current state: coefficients of t_{e_i/v_i}^{-k_i}, k_i >= 0, as Novikov weights.
    std::map<long, Novikov> state{{k, Novikov::one()}};
    EdgeId prev = e0;
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        EdgeId ei = p.edges[i];
        VertexId vi = vs[i];
        const Rat& area = g.edge(ei).area;
        std::map<long, Novikov> next;
        for (const auto& [ki, c] : state) {
            if (c.is_zero()) continue;
            Rat cval = c.val().is_inf() ? lambda : c.val().value();
            for (long kn = 0; cval + kn * area < lambda && kn <= bound; ++kn) {
                Rat coef = table(vi).coefficient(prev, ei, ki, kn);
                if (coef == 0) continue;
                Novikov w = c * Novikov::monomial(kn * area, coef);
                auto [it, inserted] = next.try_emplace(kn, w);
                if (!inserted) it->second += w;
            }
        }
        for (auto& [kn, c] : next) c = c.truncated(lambda);
        state = std::move(next);
        prev = ei;
    }
    VertexId vend = vs.back();
    Novikov out;
    for (const auto& [kn, c] : state) {
        Rat coef = table(vend).coefficient(prev, e, kn, 0);
        if (coef == 0) continue;
        out += c * Rat(coef);
    }
    return out.truncated(lambda);
}

}  // namespace mc
