#include "mirrorcurve/floer.hpp"

#include <sstream>

namespace mc {

VBObject VBObject::structure_sheaf(const TrivalentGraph& g) { return uniform(g, 0); }

VBObject VBObject::uniform(const TrivalentGraph& g, long r) {
    VBObject L;
    L.rotation.assign(g.num_edges(), r);
    for (std::size_t ei = 0; ei < g.num_edges(); ++ei) {
        const Edge& e = g.edge(EdgeId(ei));
        for (VertexId v : {e.ends[0], e.ends[1]}) {
            L.area[{EdgeId(ei), v}] = Rat(r) * e.area / 2;
            L.monodromy[{EdgeId(ei), v}] = Novikov::one();
        }
    }
    return L;
}

std::vector<std::string> VBObject::validate(const TrivalentGraph& g) const {
    std::vector<std::string> issues;
    if (rotation.size() != g.num_edges()) issues.push_back("rotation table size mismatch");
    for (std::size_t ei = 0; ei < g.num_edges() && ei < rotation.size(); ++ei) {
        const Edge& e = g.edge(EdgeId(ei));
        auto a0 = area.find({EdgeId(ei), e.ends[0]});
        auto a1 = area.find({EdgeId(ei), e.ends[1]});
        if (a0 == area.end() || a1 == area.end()) {
            issues.push_back("missing area on edge " + e.name);
            continue;
        }
        if (a0->second + a1->second != Rat(rotation[ei]) * e.area)
            issues.push_back("areas on edge " + e.name + " do not sum to r_e * A_e");
        auto m0 = monodromy.find({EdgeId(ei), e.ends[0]});
        auto m1 = monodromy.find({EdgeId(ei), e.ends[1]});
        if (m0 == monodromy.end() || m1 == monodromy.end()) {
            issues.push_back("missing monodromy on edge " + e.name);
            continue;
        }
        for (const auto* m : {&m0->second, &m1->second})
            if (m->is_zero() || !(m->val() == ExtRat::of(Rat(0))))
                issues.push_back("monodromy on edge " + e.name + " is not a unit of valuation 0");
        if (!m0->second.is_zero() && !m1->second.is_zero()) {
            Novikov prod = m0->second * m1->second;
            if (!(prod == Novikov::one()))
                issues.push_back("monodromies on edge " + e.name + " are not mutually inverse");
        }
    }
    return issues;
}

long VBObject::slope() const {
    long s = 0;
    for (long r : rotation) s += r;
    return s;
}

BundleCocycle bundle_cocycle(const TrivalentGraph& g, const VBObject& L) {
    BundleCocycle out;
    for (std::size_t ei = 0; ei < g.num_edges(); ++ei) {
        const Edge& e = g.edge(EdgeId(ei));
        for (VertexId v : {e.ends[0], e.ends[1]})
            out.entries[{EdgeId(ei), v}] =
                BundleCocycle::Entry{L.monodromy_of(EdgeId(ei), v), L.area_of(EdgeId(ei), v),
                                     L.rotation_of(EdgeId(ei))};
    }
    out.slope = L.slope();
    return out;
}

Rat idealized_area(const TrivalentGraph& g, EdgeId e, long label) {
    const Rat& a = g.edge(e).area;
    if (label >= 0) return Rat(-label) * a / 4;
    return Rat(-3 * label) * a / 4;
}

std::string FloerGenerator::name(const TrivalentGraph& g) const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Node: os << "p_" << g.vertex_name(v); break;
        case Kind::Annulus:
            os << "p[" << g.edge(e).name << "/" << g.vertex_name(g.edge(e).ends[0]) << "," << k << "]";
            break;
        case Kind::Saddle:
            os << "q[" << g.edge(e).name << "/" << g.vertex_name(v) << "," << k << "]";
            break;
    }
    return os.str();
}

EndComplex::EndComplex(const TrivalentGraph& g, const VertexChart& charts, Rat lambda, long k_max)
    : g_(&g), charts_(&charts), lambda_(std::move(lambda)), k_max_(k_max) {
    long needed = rat_ceil(4 * lambda_ / g.min_area());
    if (k_max_ < needed)
        throw InsufficientTruncation("k_max below ceil(4 lambda / min area) = " +
                                     std::to_string(needed));
    for (std::size_t v = 0; v < g.num_vertices(); ++v) deg0_.push_back(node(VertexId(v)));
    for (std::size_t ei = 0; ei < g.num_edges(); ++ei)
        for (long m = -k_max_; m <= k_max_; ++m)
            deg0_.push_back({FloerGenerator::Kind::Annulus, -1, EdgeId(ei), m});
    for (std::size_t ei = 0; ei < g.num_edges(); ++ei) {
        const Edge& e = g.edge(EdgeId(ei));
        for (VertexId v : {e.ends[0], e.ends[1]})
            for (long k = 0; k <= k_max_; ++k) deg1_.push_back(saddle(EdgeId(ei), v, k));
    }
    for (std::size_t i = 0; i < deg0_.size(); ++i) idx0_[deg0_[i]] = i;
    for (std::size_t i = 0; i < deg1_.size(); ++i) idx1_[deg1_[i]] = i;

    d_ = NovikovMatrix(deg1_.size(), deg0_.size());
    BsideContext ctx(g, charts, lambda_);

    for (std::size_t col = 0; col < deg0_.size(); ++col) {
        const FloerGenerator& gen = deg0_[col];
        if (gen.kind == FloerGenerator::Kind::Node) {
            for (EdgeId e : g.incident(gen.v))
                d_.at(index1(saddle(e, gen.v, 0)), col) += Novikov(Rat(-1));
            continue;
        }
        const Edge& ed = g.edge(gen.e);
        VertexId v = ed.ends[0], vp = ed.ends[1];
        long m = gen.k;
        if (m >= 0) d_.at(index1(saddle(gen.e, v, m)), col) += Novikov::one();
        if (m <= 0) d_.at(index1(saddle(gen.e, vp, -m)), col) += Novikov::one();
        // propagation through the far node: the v'-frame label is -m
        auto propagate = [&](VertexId w, long kin) {
            const Rat base = Rat(3 * kin) * ed.area / 4;
            for (EdgeId e2 : g.incident(w)) {
                if (e2 == gen.e) continue;
                const Rat& a2 = g.edge(e2).area;
                for (long l = 0; l <= k_max_; ++l) {
                    Rat w_exp = base + Rat(l) * a2 / 4;
                    if (w_exp >= lambda_) break;
                    Rat c = ctx.table(w, kin, l).coefficient(gen.e, e2, kin, l);
                    if (c == 0) continue;
                    d_.at(index1(saddle(e2, w, l)), col) += Novikov::monomial(w_exp, -c);
                }
            }
        };
        if (m >= 1) propagate(vp, m);
        if (m <= -1) propagate(v, -m);
    }
    d_.truncate(lambda_);
}

std::size_t EndComplex::index0(const FloerGenerator& gen) const {
    auto it = idx0_.find(gen);
    if (it == idx0_.end()) throw SpecError("unknown degree-0 generator");
    return it->second;
}

std::size_t EndComplex::index1(const FloerGenerator& gen) const {
    auto it = idx1_.find(gen);
    if (it == idx1_.end()) throw SpecError("unknown degree-1 generator");
    return it->second;
}

FloerGenerator EndComplex::annulus_at(EdgeId e, VertexId v, long label) const {
    const Edge& ed = g_->edge(e);
    long m = (ed.ends[0] == v) ? label : -label;
    if (ed.ends[0] != v && ed.ends[1] != v) throw NotLocal("annulus frame vertex not on the edge");
    return {FloerGenerator::Kind::Annulus, -1, e, m};
}

NovikovMatrix EndComplex::naive_differential() const {
    NovikovMatrix nv(deg1_.size(), deg0_.size());
    for (std::size_t col = 0; col < deg0_.size(); ++col) {
        const FloerGenerator& gen = deg0_[col];
        if (gen.kind == FloerGenerator::Kind::Node) {
            for (EdgeId e : g_->incident(gen.v))
                nv.at(index1(saddle(e, gen.v, 0)), col) += Novikov(Rat(-1));
            continue;
        }
        const Edge& ed = g_->edge(gen.e);
        if (gen.k >= 0) nv.at(index1(saddle(gen.e, ed.ends[0], gen.k)), col) += Novikov::one();
        if (gen.k <= 0) nv.at(index1(saddle(gen.e, ed.ends[1], -gen.k)), col) += Novikov::one();
    }
    return nv;
}

std::vector<Novikov> EndComplex::rep_node(VertexId v) const {
    std::vector<Novikov> x(deg0_.size());
    x[index0(node(v))] = Novikov::one();
    for (EdgeId e : g_->incident(v)) x[index0(annulus_at(e, v, 0))] += Novikov::one();
    return x;
}

std::vector<Novikov> EndComplex::rep_annulus(VertexId v, EdgeId e, long k) const {
    if (k < 1 || k > k_max_) throw SpecError("representative index out of range");
    std::vector<Novikov> x(deg0_.size());
    x[index0(annulus_at(e, v, -k))] = Novikov::one();
    BsideContext ctx(*g_, *charts_, lambda_);
    const Rat base = Rat(3 * k) * g_->edge(e).area / 4;
    for (EdgeId e2 : g_->incident(v)) {
        if (e2 == e) continue;
        const Rat& a2 = g_->edge(e2).area;
        for (long l = 0; l <= k_max_; ++l) {
            Rat w_exp = base + Rat(l) * a2 / 4;
            if (w_exp >= lambda_) break;
            Rat c = ctx.table(v, k, l).coefficient(e, e2, k, l);
            if (c == 0) continue;
            x[index0(annulus_at(e2, v, l))] += Novikov::monomial(w_exp, c);
        }
    }
    return x;
}

std::vector<Novikov> EndComplex::local_differential(VertexId v, const std::vector<Novikov>& x) const {
    std::vector<Novikov> full = d_.apply(x);
    std::vector<Novikov> out(full.size());
    for (std::size_t i = 0; i < deg1_.size(); ++i)
        if (deg1_[i].v == v) out[i] = full[i];
    return out;
}

std::vector<Novikov> EndComplex::unit_class() const {
    std::vector<Novikov> x(deg0_.size());
    for (std::size_t v = 0; v < g_->num_vertices(); ++v)
        x[index0(node(VertexId(v)))] = Novikov::one();
    for (std::size_t e = 0; e < g_->num_edges(); ++e)
        x[index0({FloerGenerator::Kind::Annulus, -1, EdgeId(e), 0})] = Novikov::one();
    return x;
}

CohomologyResult cohomology_basis(const EndComplex& c) {
    auto rk = valuation_rank(c.differential(), c.lambda(), nullptr, nullptr, true);
    CohomologyResult res;
    res.rank = rk.rank;
    res.h0 = rk.kernel.size();
    res.h1 = c.deg1().size() - rk.rank;
    res.h0_basis = std::move(rk.kernel);
    return res;
}

namespace {

void add_to(LocalCombination& acc, const LocalGen& g, const Novikov& c) {
    if (c.is_zero()) return;
    acc[g] += c;
    if (acc[g].is_zero()) acc.erase(g);
}

}  // namespace

LocalCombination local_mu2(const BsideContext& ctx, VertexId v, const LocalGen& a,
                           const LocalGen& b) {
    LocalCombination out;
    if (a.is_unit) {
        add_to(out, b, Novikov::one());
        return out;
    }
    if (b.is_unit) {
        add_to(out, a, Novikov::one());
        return out;
    }
    if (!ctx.graph().is_incident(a.e, v) || !ctx.graph().is_incident(b.e, v))
        throw NotLocal("local product inputs must live at the vertex");
    if (a.k < 1 || b.k < 1) throw NotDegreeZero("local classes are indexed by k >= 1");
    if (a.e == b.e) {
        add_to(out, LocalGen{false, a.e, a.k + b.k}, Novikov::one());
        return out;
    }
    const PropagationTable& tab = ctx.table(v, std::max(a.k, b.k), std::max(a.k, b.k));
    add_to(out, LocalGen{true, -1, 0}, Novikov(tab.constant_term(a.e, b.e, a.k, b.k)));
    for (long bb = 0; bb < a.k; ++bb)
        add_to(out, LocalGen{false, a.e, a.k - bb}, Novikov(tab.coefficient(b.e, a.e, b.k, bb)));
    for (long aa = 0; aa < b.k; ++aa)
        add_to(out, LocalGen{false, b.e, b.k - aa}, Novikov(tab.coefficient(a.e, b.e, a.k, aa)));
    return out;
}

LocalCombination local_mu2_unrescaled(const BsideContext& ctx, VertexId v, const LocalGen& a,
                                      const LocalGen& b) {
    auto rescale = [&](const LocalGen& g) {
        if (g.is_unit) return Rat(0);
        return Rat(Rat(3 * g.k) * ctx.graph().edge(g.e).area / 4);
    };
    LocalCombination core = local_mu2(ctx, v, a, b);
    Rat in_weight = rescale(a) + rescale(b);
    LocalCombination out;
    for (const auto& [gen, c] : core)
        add_to(out, gen, c * Novikov::t_power(in_weight - rescale(gen)));
    return out;
}

std::map<long, Novikov> restriction_to_edge(const BsideContext& ctx, VertexId v, EdgeId e,
                                            const LocalGen& cls) {
    if (!ctx.graph().is_incident(e, v)) throw NotLocal("restriction edge not incident");
    std::map<long, Novikov> out;
    if (cls.is_unit) {
        out[0] = Novikov::one();  // Q(ptilde_v) = T^{-S(p_{e/v,0})} p_{e/v,0}, S = 0
        return out;
    }
    if (cls.k < 1) throw NotRepresentative("local classes are indexed by k >= 1");
    if (cls.e == e) {
        out[-cls.k] = Novikov::one();
        return out;
    }
    const Rat base = Rat(3 * cls.k) * ctx.graph().edge(cls.e).area / 4;
    const Rat& a2 = ctx.graph().edge(e).area;
    for (long l = 0;; ++l) {
        Rat w_exp = base + Rat(l) * a2 / 4;
        if (w_exp >= ctx.lambda()) break;
        Rat c = ctx.table(v, cls.k, l).coefficient(cls.e, e, cls.k, l);
        if (c != 0) out[l] = Novikov::monomial(w_exp, c);
    }
    return out;
}

FuncUv local_class_to_function(const BsideContext& ctx, VertexId v, const LocalGen& cls) {
    if (cls.is_unit) return FuncUv::constant_fn(ctx, v, Novikov::one());
    return FuncUv::pole(ctx, v, cls.e, cls.k, Novikov::one());
}

}  // namespace mc
