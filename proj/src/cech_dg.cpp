#include "mirrorcurve/cech_dg.hpp"

namespace mc {

// The basis is unit-normalized: the degree-0 elements are 1 and
// T^{(3/4) j A} t_{e/v}^{-j}, the degree-1 elements T^{-w(m)} t_{e/v0}^m with
// w(m) the sup-norm exponent. Every structure constant then has valuation
// >= 0, with valuation 0 exactly on the same-edge pass-throughs, and a term
// dropped outside the window carries valuation >= lambda provided
// lambda <= min_e A_e (each unit of excess depth costs at least A/4).

namespace {

std::map<long, Rat> restrict_monomial(const BsideContext& ctx, VertexId v, bool is_unit, EdgeId pe,
                                      long j, EdgeId e, long pos_cap) {
    std::map<long, Rat> out;
    if (is_unit) {
        out[0] = Rat(1);
        return out;
    }
    if (pe == e) {
        out[-j] = Rat(1);
        return out;
    }
    const PropagationTable& tab = ctx.table(v, j, pos_cap);
    for (long l = 0; l <= pos_cap; ++l) {
        Rat c = tab.coefficient(pe, e, j, l);
        if (c != 0) out[l] = c;
    }
    return out;
}

}  // namespace

CechDG build_cech_dg(const BsideContext& ctx, long window_factor) {
    const TrivalentGraph& g = ctx.graph();
    const Rat& lambda = ctx.lambda();
    if (lambda > g.min_area())
        throw SpecError("the Cech model needs lambda <= min area (window soundness)");
    CechDG out;

    // ldrop: expansion depth beyond which a unit-coefficient term clears the
    // cutoff; reach: tree-additive depth from generating inputs plus one
    // expansion allowance; W: index window (one more allowance).
    const long ldrop = rat_ceil(4 * lambda / g.min_area());
    std::vector<long> jgen(g.num_edges());
    long jgen_max = 1;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        jgen[e] = ctx.max_pole_order(EdgeId(e));
        jgen_max = std::max(jgen_max, jgen[e]);
    }
    const long reach = (window_factor - 1) * jgen_max + ldrop;
    const long W = reach + ldrop;

    for (std::size_t vi = 0; vi < g.num_vertices(); ++vi) {
        VertexId v = VertexId(vi);
        out.index0[{v, true, -1, 0}] = int(out.basis.size());
        out.unit.push_back(int(out.basis.size()));
        out.generating.push_back(int(out.basis.size()));
        out.basis.add(0, "1@" + g.vertex_name(v));
        for (EdgeId e : g.incident(v))
            for (long j = 1; j <= W; ++j) {
                out.index0[{v, false, e, j}] = int(out.basis.size());
                if (j <= jgen[std::size_t(e)]) out.generating.push_back(int(out.basis.size()));
                out.basis.add(0,
                              g.edge(e).name + "/" + g.vertex_name(v) + "^-" + std::to_string(j));
            }
    }
    for (std::size_t ei = 0; ei < g.num_edges(); ++ei) {
        EdgeId e = EdgeId(ei);
        for (long m = -W; m <= W; ++m) {
            out.index1[{e, m}] = int(out.basis.size());
            if (std::labs(m) <= jgen[ei]) out.generating.push_back(int(out.basis.size()));
            out.basis.add(1, g.edge(e).name + "^" + std::to_string(m));
        }
    }

    const std::size_t n = out.basis.size();
    out.d = NovikovMatrix(n, n);

    // normalization weights: the stored element is T^{nw} * (monomial)
    auto nw0 = [&](const CechDG::Key0& k) {
        if (k.is_unit) return Rat(0);
        return Rat(Rat(3 * k.j) * g.edge(k.e).area / 4);
    };
    auto nw1 = [&](EdgeId e, long m) { return Rat(-ctx.ue_weight(e, m)); };

    auto emit1 = [&](auto&& sink, EdgeId e, VertexId at, long m_frame, const Rat& coeff_val,
                     const Rat& c) {
        // a term c T^{coeff_val} t_{e/at}^{m_frame}; convert to the canonical
        // frame and the normalized basis
        const Edge& ed = g.edge(e);
        bool canonical = (ed.ends[0] == at);
        long m = canonical ? m_frame : -m_frame;
        Rat v = coeff_val - nw1(e, m);
        if (!canonical) v += Rat(m_frame) * ed.area;
        auto it = out.index1.find({e, m});
        if (it == out.index1.end()) {
            if (v < lambda)
                throw SpecError("Cech window overflow (degree 1): edge " + g.edge(e).name +
                                " exponent " + std::to_string(m) + " value " + rat_to_string(v));
            return;
        }
        if (v >= lambda) return;
        sink(it->second, Novikov::monomial(v, c));
    };

    // differential: d(F)_e = F_{v1}|_{U_e} - F_{v0}|_{U_e}
    for (const auto& [key, col] : out.index0) {
        VertexId v = key.v;
        for (EdgeId e : g.incident(v)) {
            Rat sign = (g.edge(e).ends[0] == v) ? Rat(-1) : Rat(1);
            auto data = restrict_monomial(ctx, v, key.is_unit, key.e, key.j, e, ldrop + W);
            for (const auto& [m, c] : data)
                emit1([&](int row, const Novikov& cc) { out.d.at(std::size_t(row),
                                                                 std::size_t(col)) += cc; },
                      e, v, m, nw0(key), sign * c);
        }
    }

    // cup on degree 0: normalized local products
    for (const auto& [ka, a] : out.index0)
        for (const auto& [kb, b] : out.index0) {
            if (ka.v != kb.v) continue;
            long da = ka.is_unit ? 0 : ka.j, db = kb.is_unit ? 0 : kb.j;
            if (da + db > reach) continue;  // beyond the reachable depth
            SparseVec vec;
            if (ka.is_unit || kb.is_unit) {
                vec[ka.is_unit ? b : a] = Novikov::one();
            } else if (ka.e == kb.e) {
                vec[out.index0.at({ka.v, false, ka.e, ka.j + kb.j})] = Novikov::one();
            } else {
                const PropagationTable& tab = ctx.table(ka.v, std::max(ka.j, kb.j),
                                                        std::max(ka.j, kb.j));
                Rat base = nw0(ka) + nw0(kb);
                Rat kterm = tab.constant_term(ka.e, kb.e, ka.j, kb.j);
                if (kterm != 0 && base < lambda)
                    vec[out.index0.at({ka.v, true, -1, 0})] = Novikov::monomial(base, kterm);
                for (long bb = 0; bb < ka.j; ++bb) {
                    Rat c = tab.coefficient(kb.e, ka.e, kb.j, bb);
                    if (c == 0) continue;
                    CechDG::Key0 kk{ka.v, false, ka.e, ka.j - bb};
                    Rat v = base - nw0(kk);
                    if (v < lambda) vec[out.index0.at(kk)] = Novikov::monomial(v, c);
                }
                for (long aa = 0; aa < kb.j; ++aa) {
                    Rat c = tab.coefficient(ka.e, kb.e, ka.j, aa);
                    if (c == 0) continue;
                    CechDG::Key0 kk{ka.v, false, kb.e, kb.j - aa};
                    Rat v = base - nw0(kk);
                    if (v < lambda) vec[out.index0.at(kk)] = Novikov::monomial(v, c);
                }
            }
            for (auto it = vec.begin(); it != vec.end();)
                it = it->second.is_zero() ? vec.erase(it) : std::next(it);
            if (!vec.empty()) out.cup[{a, b}] = std::move(vec);
        }

    // mixed cup: (F . q)_e = F_{v0}|_{U_e} q_e and (q . F)_e = q_e F_{v1}|_{U_e}
    for (const auto& [kf, fcol] : out.index0)
        for (const auto& [kq, qcol] : out.index1) {
            const Edge& ed = g.edge(kq.e);
            for (bool front : {true, false}) {
                VertexId face = front ? ed.ends[0] : ed.ends[1];
                if (kf.v != face) continue;
                long fdepth = kf.is_unit ? 0 : kf.j;
                if (fdepth + std::labs(kq.m) > reach) continue;
                auto data = restrict_monomial(ctx, kf.v, kf.is_unit, kf.e, kf.j, kq.e, ldrop + W);
                SparseVec vec;
                // kq is stored in the canonical frame; in the back-face frame
                // t' = q/t turns t^{m} into T^{m A} t'^{-m}
                long m_face = (face == ed.ends[0]) ? kq.m : -kq.m;
                Rat q_face_val = nw1(kq.e, kq.m);
                if (face != ed.ends[0]) q_face_val += Rat(kq.m) * ed.area;
                for (const auto& [m, c] : data)
                    emit1([&](int row, const Novikov& cc) {
                        auto& slot = vec[row];
                        slot += cc;
                        if (slot.is_zero()) vec.erase(row);
                    },
                          kq.e, face, m + m_face, nw0(kf) + q_face_val, c);
                if (vec.empty()) continue;
                if (front)
                    out.cup[{fcol, qcol}] = std::move(vec);
                else
                    out.cup[{qcol, fcol}] = std::move(vec);
            }
        }

    return out;
}

}  // namespace mc
