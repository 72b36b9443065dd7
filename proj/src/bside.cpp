#include "mirrorcurve/bside.hpp"

#include <sstream>

namespace mc {

BsideContext::BsideContext(const TrivalentGraph& g, const VertexChart& charts, Rat lambda)
    : g_(&g), charts_(&charts), lambda_(std::move(lambda)) {
    if (lambda_ <= 0) throw SpecError("lambda must be positive");
}

const PropagationTable& BsideContext::table(VertexId v, long k_need, long l_need) const {
    long l_norm = rat_ceil(4 * lambda_ / g_->min_area()) + 1;
    long k = std::max({k_need, l_norm, 4L});
    long l = std::max({l_need, l_norm, 4L});
    auto it = tables_.find(v);
    if (it != tables_.end() && it->second->k_max() >= k && it->second->l_max() >= l)
        return *it->second;
    auto tab = std::make_unique<PropagationTable>(*g_, *charts_, v, k, l);
    auto [pos, _] = tables_.insert_or_assign(v, std::move(tab));
    return *pos->second;
}

Rat BsideContext::ue_weight(EdgeId e, long m) const {
    const Rat& a = g_->edge(e).area;
    if (m >= 0) return Rat(m) * a / 4;
    return Rat(3 * m) * a / 4;
}

Rat BsideContext::uv_weight(EdgeId e, long k) const { return Rat(-3 * k) * g_->edge(e).area / 4; }

long BsideContext::max_pole_order(EdgeId e) const {
    // val 0 - (3/4) k A < lambda
    long k = rat_ceil(4 * lambda_ / (3 * g_->edge(e).area));
    return std::max(1L, k);
}

FuncUv FuncUv::constant_fn(const BsideContext& ctx, VertexId v, const Novikov& c) {
    FuncUv f(ctx, v);
    f.add_constant(c);
    return f;
}

FuncUv FuncUv::pole(const BsideContext& ctx, VertexId v, EdgeId e, long k, const Novikov& coeff) {
    FuncUv f(ctx, v);
    f.add_pole(e, k, coeff);
    return f;
}

void FuncUv::add_constant(const Novikov& c) {
    const_ += c;
    const_ = const_.truncated(ctx_->lambda());
}

void FuncUv::add_pole(EdgeId e, long k, const Novikov& coeff) {
    if (k < 1) throw SpecError("pole order must be >= 1");
    if (!ctx_->graph().is_incident(e, v_)) throw NotLocal("pole edge not incident to the vertex");
    auto key = std::make_pair(e, k);
    auto it = polar_.find(key);
    Novikov c = (it == polar_.end() ? coeff : it->second + coeff)
                    .truncated(ctx_->lambda() - ctx_->uv_weight(e, k));
    if (c.is_zero())
        polar_.erase(key);
    else
        polar_[key] = c;
}

void FuncUv::prune() {
    const_ = const_.truncated(ctx_->lambda());
    for (auto it = polar_.begin(); it != polar_.end();) {
        it->second =
            it->second.truncated(ctx_->lambda() - ctx_->uv_weight(it->first.first, it->first.second));
        it = it->second.is_zero() ? polar_.erase(it) : std::next(it);
    }
}

FuncUv FuncUv::operator+(const FuncUv& o) const {
    if (v_ != o.v_) throw NotLocal("sum of functions at different vertices");
    FuncUv f = *this;
    f.add_constant(o.const_);
    for (const auto& [key, c] : o.polar_) f.add_pole(key.first, key.second, c);
    return f;
}

FuncUv FuncUv::operator-() const {
    FuncUv f = *this;
    f.const_ = -f.const_;
    for (auto& [key, c] : f.polar_) c = -c;
    return f;
}

ExtRat FuncUv::norm_val() const {
    ExtRat m = ExtRat::infinity();
    if (!const_.is_zero()) m = const_.val();
    for (const auto& [key, c] : polar_)
        if (!c.is_zero()) m = ExtRat::min(m, c.val() + ctx_->uv_weight(key.first, key.second));
    return m;
}

Novikov FuncUv::evaluate(const Novikov& z, const ExtRat& prec) const {
    Novikov out = const_;
    for (const auto& [key, c] : polar_) {
        MobiusN chart = to_novikov(ctx_->charts().chart(v_, key.first));
        auto t = chart.apply_proj(z, Novikov::one());
        out += c * proj_power(t, -key.second, prec);
    }
    return out.truncated(prec);
}

std::string FuncUv::str(const TrivalentGraph& g) const {
    std::ostringstream os;
    os << "(" << const_.str() << ")";
    for (const auto& [key, c] : polar_)
        os << " + (" << c.str() << ")*" << g.edge(key.first).name << "^-" << key.second;
    return os.str();
}

void FuncUe::add(long m, const Novikov& coeff) {
    auto it = coeffs_.find(m);
    Novikov c = (it == coeffs_.end() ? coeff : it->second + coeff)
                    .truncated(ctx_->lambda() - ctx_->ue_weight(e_, m));
    if (c.is_zero())
        coeffs_.erase(m);
    else
        coeffs_[m] = c;
}

void FuncUe::prune() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        it->second = it->second.truncated(ctx_->lambda() - ctx_->ue_weight(e_, it->first));
        it = it->second.is_zero() ? coeffs_.erase(it) : std::next(it);
    }
}

ExtRat FuncUe::norm_val() const {
    ExtRat m = ExtRat::infinity();
    for (const auto& [k, c] : coeffs_)
        if (!c.is_zero()) m = ExtRat::min(m, c.val() + ctx_->ue_weight(e_, k));
    return m;
}

FuncUe FuncUe::operator+(const FuncUe& o) const {
    if (e_ != o.e_) throw NotLocal("sum of annulus data on different edges");
    FuncUe rhs = (o.frame_ == frame_) ? o : o.reframed();
    FuncUe f = *this;
    for (const auto& [m, c] : rhs.coeffs_) f.add(m, c);
    return f;
}

FuncUe FuncUe::operator-() const {
    FuncUe f = *this;
    for (auto& [m, c] : f.coeffs_) c = -c;
    return f;
}

FuncUe FuncUe::operator*(const FuncUe& o) const {
    if (e_ != o.e_) throw NotLocal("product of annulus data on different edges");
    FuncUe rhs = (o.frame_ == frame_) ? o : o.reframed();
    FuncUe out(*ctx_, e_, frame_);
    for (const auto& [m1, c1] : coeffs_)
        for (const auto& [m2, c2] : rhs.coeffs_) out.add(m1 + m2, c1 * c2);
    return out;
}

FuncUe FuncUe::reframed() const {
    VertexId other = ctx_->graph().other_end(e_, frame_);
    FuncUe out(*ctx_, e_, other);
    const Rat& a = ctx_->graph().edge(e_).area;
    for (const auto& [m, c] : coeffs_) out.add(-m, c * Novikov::t_power(Rat(m) * a));
    return out;
}

Novikov FuncUe::evaluate(const Novikov& t, const ExtRat& prec) const {
    Novikov out;
    std::array<Novikov, 2> pt{t, Novikov::one()};
    for (const auto& [m, c] : coeffs_) out += c * proj_power(pt, m, prec);
    return out.truncated(prec);
}

std::string FuncUe::str(const TrivalentGraph& g) const {
    std::ostringstream os;
    os << "[" << g.edge(e_).name << "@" << g.vertex_name(frame_) << "]";
    for (const auto& [m, c] : coeffs_) os << " + (" << c.str() << ")*t^" << m;
    return os.str();
}

FuncUv multiply_uv(const FuncUv& f, const FuncUv& g) {
    if (f.vertex() != g.vertex()) throw NotLocal("product of functions at different vertices");
    const BsideContext& ctx = f.context();
    VertexId v = f.vertex();
    FuncUv out(ctx, v);
    out.add_constant(f.constant() * g.constant());
    for (const auto& [key, c] : g.polar()) out.add_pole(key.first, key.second, f.constant() * c);
    for (const auto& [key, c] : f.polar()) out.add_pole(key.first, key.second, g.constant() * c);
    for (const auto& [k1, c1] : f.polar())
        for (const auto& [k2, c2] : g.polar()) {
            Novikov c = c1 * c2;
            if (c.is_zero()) continue;
            if (k1.first == k2.first) {
                out.add_pole(k1.first, k1.second + k2.second, c);
                continue;
            }
            long j1 = k1.second, j2 = k2.second;
            const PropagationTable& tab = ctx.table(v, std::max(j1, j2), std::max(j1, j2));
            out.add_constant(c * tab.constant_term(k1.first, k2.first, j1, j2));
            for (long b = 0; b < j1; ++b) {
                Rat coef = tab.coefficient(k2.first, k1.first, j2, b);
                if (coef != 0) out.add_pole(k1.first, j1 - b, c * coef);
            }
            for (long a = 0; a < j2; ++a) {
                Rat coef = tab.coefficient(k1.first, k2.first, j1, a);
                if (coef != 0) out.add_pole(k2.first, j2 - a, c * coef);
            }
        }
    out.prune();
    return out;
}

FuncUe restrict_uv_to_ue(const FuncUv& f, EdgeId e) {
    const BsideContext& ctx = f.context();
    VertexId v = f.vertex();
    if (!ctx.graph().is_incident(e, v)) throw NotLocal("restriction edge not incident");
    FuncUe out(ctx, e, v);
    out.add(0, f.constant());
    const Rat& a = ctx.graph().edge(e).area;
    for (const auto& [key, c] : f.polar()) {
        if (key.first == e) {
            out.add(-key.second, c);
            continue;
        }
        Rat cval = c.val().is_inf() ? ctx.lambda() : c.val().value();
        long lmax = rat_ceil(4 * (ctx.lambda() - cval) / a) + 1;
        const PropagationTable& tab = ctx.table(v, key.second, lmax);
        for (long l = 0; l <= lmax; ++l) {
            Rat coef = tab.coefficient(key.first, e, key.second, l);
            if (coef != 0) out.add(l, c * coef);
        }
    }
    out.prune();
    return out;
}

FuncUv annulus_to_uv(const FuncUe& fin, VertexId v) {
    const BsideContext& ctx = fin.context();
    FuncUe f = (fin.frame() == v) ? fin : fin.reframed();
    if (f.frame() != v) throw NotLocal("annulus data not adjacent to the vertex");
    EdgeId e = f.edge();
    FuncUv out(ctx, v);
    // positive powers of t_{e/v} have their pole at the marked point of the
    // half-edge where t_{e/v} takes the value infinity
    EdgeId pole_edge = -1;
    for (EdgeId f2 : ctx.graph().incident(v)) {
        if (f2 == e) continue;
        auto p = VertexChart::marked_point(ctx.charts().marked_of(v, f2));
        MobiusQ te = ctx.charts().chart(v, e);
        auto img = te.apply_proj(p[0], p[1]);
        if (img[1] == 0) pole_edge = f2;
    }
    if (pole_edge < 0) throw SpecError("no half-edge carries the pole of the coordinate");
    MobiusQ m = ctx.charts().chart(v, e).compose(ctx.charts().chart(v, pole_edge).adjugate());
    // t_{e/v} = (a t + b)/(c t) in the pole chart (the value at t = 0 is infinity)
    if (m.d != 0) throw SpecError("pole chart normalization failed");
    for (const auto& [deg, c] : f.coeffs()) {
        if (deg == 0) {
            out.add_constant(c);
        } else if (deg < 0) {
            out.add_pole(e, -deg, c);
        } else {
            // (a t + b)^deg / (c t)^deg: finite Laurent polynomial, exponents in [-deg, 0]
            Rat cpow(1);
            for (long i = 0; i < deg; ++i) cpow *= m.c;
            std::vector<Rat> bpows(std::size_t(deg) + 1);
            Rat bacc(1);
            for (long i = 0; i <= deg; ++i) {
                bpows[std::size_t(i)] = bacc;
                bacc *= m.b;
            }
            Rat apow(1);
            for (long i = 0; i <= deg; ++i) {
                Rat coef = Rat(binomial(deg, i)) * apow * bpows[std::size_t(deg - i)] / cpow;
                if (coef != 0) {
                    if (i == deg)
                        out.add_constant(c * coef);
                    else
                        out.add_pole(pole_edge, deg - i, c * coef);
                }
                apow *= m.a;
            }
        }
    }
    out.prune();
    return out;
}

FuncUe mobius_on_ue(const BsideContext& ctx, const MobiusN& m0, EdgeId e, VertexId frame) {
    MobiusN m = normalize_valuation(m0);
    const Rat& area = ctx.graph().edge(e).area;
    const Rat lo = area / 4, hi = 3 * area / 4;  // val(t) range on the annulus
    FuncUe out(ctx, e, frame);
    const Rat lambda = ctx.lambda();

    // 1/(c t + d) by uniform domination on the annulus
    std::map<long, Novikov> inv;
    if (m.c.is_zero()) {
        if (m.d.is_zero()) throw PoleOnOrbit("degenerate denominator");
        inv[0] = m.d.inverse(ExtRat::of(lambda + 2 * hi));
    } else if (m.d.is_zero()) {
        inv[-1] = m.c.inverse(ExtRat::of(lambda + 2 * hi));
    } else {
        Rat vc = m.c.val().value(), vd = m.d.val().value();
        if (vd < vc + lo) {
            // d dominates on the annulus: 1/(ct+d) = d^-1 sum_j (-c t / d)^j
            Novikov dinv = m.d.inverse(ExtRat::of(lambda + 2 * hi - vd));
            Novikov ratio = -(m.c * dinv);
            Novikov acc = dinv;
            long j = 0;
            while (true) {
                inv[j] = acc;
                ++j;
                acc = acc * ratio;
                Rat gain = Rat(j) * (vc - vd + lo);
                if (acc.is_zero() || gain >= lambda + hi) break;
            }
        } else if (vc + hi < vd) {
            // c t dominates: 1/(ct+d) = (ct)^-1 sum_j (-d/(c t))^j
            Novikov cinv = m.c.inverse(ExtRat::of(lambda + 2 * hi - vc));
            Novikov ratio = -(m.d * cinv);
            Novikov acc = cinv;
            long j = 1;
            while (true) {
                inv[-j] = acc;
                ++j;
                acc = acc * ratio;
                Rat gain = Rat(j - 1) * (vd - vc - hi);
                if (acc.is_zero() || gain >= lambda + hi) break;
            }
        } else {
            throw PoleOnOrbit("pole of the transported function lies on the annulus");
        }
    }
    for (const auto& [j, c] : inv) {
        if (c.is_zero()) continue;
        if (!m.a.is_zero()) out.add(j + 1, m.a * c);
        if (!m.b.is_zero()) out.add(j, m.b * c);
    }
    out.prune();
    return out;
}

FuncUv mobius_power_on_uv(const BsideContext& ctx, VertexId v, const MobiusN& m0, EdgeId ref_edge,
                          long rho, const Novikov& scale) {
    MobiusN m = normalize_valuation(m0);
    const Rat lambda = ctx.lambda();
    FuncUv out(ctx, v);
    if (rho == 0) {
        out.add_constant(scale);
        return out;
    }
    if (rho < 0) throw SpecError("mobius_power_on_uv expects rho >= 0");
    MobiusQ ref_chart = ctx.charts().chart(v, ref_edge);
    std::vector<std::pair<EdgeId, std::map<long, Novikov>>> tail_data;
    for (EdgeId f : ctx.graph().incident(v)) {
        // rewrite t_ref as a function of t_f, then m as a function of t_f
        MobiusQ change = ref_chart.compose(ctx.charts().chart(v, f).adjugate());
        MobiusN mf = normalize_valuation(m.compose(to_novikov(change)));
        const Rat& area = ctx.graph().edge(f).area;
        const Rat hi = 3 * area / 4;
        if (mf.a.is_zero()) continue;  // the zero of m sits at infinity in this chart
        std::map<long, Novikov> tail;
        if (mf.b.is_zero()) {
            // pole exactly at the marked point: finite Laurent expansion
            // mf^{-rho} = (c t + d)^rho / (a t)^rho
            Novikov ainv = mf.a.inverse(ExtRat::of(lambda + Rat(2 * rho + 2) * hi));
            Novikov apow = ainv.pow(rho);
            std::vector<Novikov> dpows(std::size_t(rho) + 1);
            Novikov dacc = Novikov::one();
            for (long i = 0; i <= rho; ++i) {
                dpows[std::size_t(i)] = dacc;
                dacc = dacc * mf.d;
            }
            Novikov cpow = Novikov::one();
            for (long i = 0; i <= rho; ++i) {
                Novikov coef = Rat(binomial(rho, i)) * apow * cpow * dpows[std::size_t(rho - i)];
                if (!coef.is_zero()) tail[i - rho] += coef;
                cpow = cpow * mf.c;
            }
        } else {
            Rat va = mf.a.val().value(), vb = mf.b.val().value();
            if (!(vb - va > hi)) continue;  // pole not inside this marked disk
            Rat step = vb - va - hi;        // per-order norm gain along the tail
            ExtRat wp = ExtRat::of(lambda + Rat(2 * rho + 2) * hi + 2 * (vb - va));
            Novikov ainv = mf.a.inverse(wp);
            Novikov ratio = mf.b * ainv;
            Novikov apow = ainv.pow(rho);
            std::map<long, Novikov> base;
            Novikov rpow = Novikov::one();
            long jmax = rat_ceil((lambda + Rat(rho + 1) * hi) / step) + 1;
            for (long j = 0; j <= jmax; ++j) {
                Rat binc = Rat(binomial(rho + j - 1, j)) * ((j % 2) ? -1 : 1);
                Novikov coef = binc * apow * rpow;
                if (!coef.is_zero()) base[-rho - j] += coef;
                rpow = rpow * ratio;
                if (rpow.is_zero()) break;
            }
            std::map<long, Novikov> poly{{0, Novikov::one()}};
            for (long i = 0; i < rho; ++i) {
                std::map<long, Novikov> nxt;
                for (const auto& [deg, cc] : poly) {
                    if (!mf.c.is_zero()) nxt[deg + 1] += cc * mf.c;
                    if (!mf.d.is_zero()) nxt[deg] += cc * mf.d;
                }
                poly = std::move(nxt);
            }
            for (const auto& [d1, c1] : base)
                for (const auto& [d2, c2] : poly) {
                    Novikov c = c1 * c2;
                    if (!c.is_zero()) tail[d1 + d2] += c;
                }
        }
        tail_data.push_back({f, std::move(tail)});
    }
    if (tail_data.empty()) throw PoleOnOrbit("transported pole lies in no marked disk");

    for (auto& [f, tail] : tail_data)
        for (auto& [deg, c] : tail)
            if (deg < 0) out.add_pole(f, -deg, scale * c);

    // Constant term: the function minus its polar tails, at a sample point.
    for (long z0 : {2, 3, 5, 7, 11}) {
        ExtRat wp = ExtRat::of(lambda + 8 * ctx.graph().max_area());
        Rat tz_num = ref_chart.a * Rat(z0) + ref_chart.b;
        Rat tz_den = ref_chart.c * Rat(z0) + ref_chart.d;
        if (tz_den == 0 || tz_num == 0) continue;
        auto img = m.apply_proj(Novikov(tz_num), Novikov(tz_den));
        Novikov full, tail_vals;
        try {
            full = scale * proj_power(img, -rho, wp);
            bool bad = false;
            for (auto& [f, tail] : tail_data) {
                MobiusQ cf = ctx.charts().chart(v, f);
                Rat tf_num = cf.a * Rat(z0) + cf.b, tf_den = cf.c * Rat(z0) + cf.d;
                if (tf_den == 0 || tf_num == 0) {
                    bad = true;
                    break;
                }
                std::array<Novikov, 2> tf{Novikov(tf_num), Novikov(tf_den)};
                for (auto& [deg, c] : tail)
                    if (deg < 0) tail_vals += (scale * c) * proj_power(tf, deg, wp);
            }
            if (bad) continue;
        } catch (const ZeroDivision&) {
            continue;
        }
        // nonnegative tail exponents (from finite expansions) fold into the constant
        for (auto& [f, tail] : tail_data) {
            MobiusQ cf = ctx.charts().chart(v, f);
            for (auto& [deg, c] : tail)
                if (deg == 0) out.add_constant(scale * c);
                else if (deg > 0) throw SpecError("unexpected positive tail exponent");
        }
        Novikov c0 = (full - tail_vals).truncated(lambda);
        // subtract the constants already folded in, to avoid double counting
        for (auto& [f, tail] : tail_data)
            for (auto& [deg, c] : tail)
                if (deg == 0) c0 -= (scale * c).truncated(lambda);
        out.add_constant(c0);
        out.prune();
        return out;
    }
    throw SpecError("no usable sample point for constant extraction");
}

void CechDegree1::add(VertexId v, EdgeId e, const Novikov& c) { slots_[std::size_t(v)][e] += c; }

Novikov CechDegree1::xi(VertexId v, EdgeId e, EdgeId eprime) const {
    const auto& m = slots_[std::size_t(v)];
    Novikov a, b;
    if (auto it = m.find(e); it != m.end()) a = it->second;
    if (auto it = m.find(eprime); it != m.end()) b = it->second;
    return a - b;
}

void CechDegree1::canonicalize() {
    for (std::size_t v = 0; v < slots_.size(); ++v) {
        const auto& inc = g_->incident(VertexId(v));
        if (inc.empty()) continue;
        EdgeId last = inc.back();
        Novikov shift;
        if (auto it = slots_[v].find(last); it != slots_[v].end()) shift = it->second;
        if (shift.is_zero()) continue;
        for (EdgeId e : inc) slots_[v][e] -= shift;
        for (auto it = slots_[v].begin(); it != slots_[v].end();)
            it = it->second.is_zero() ? slots_[v].erase(it) : std::next(it);
    }
}

bool CechDegree1::is_zero_mod(const Rat& lambda) const {
    for (std::size_t v = 0; v < slots_.size(); ++v) {
        const auto& inc = g_->incident(VertexId(v));
        for (std::size_t i = 0; i + 1 < inc.size(); ++i)
            if (!xi(VertexId(v), inc[i], inc.back()).truncated(lambda).is_zero()) return false;
    }
    return true;
}

std::vector<Novikov> cech_cocycle_on_loops(const CechDegree1& a, const TrivalentGraph& g,
                                           const std::vector<ReducedPath>& loops) {
    std::vector<Novikov> out;
    for (const auto& loop : loops) {
        loop.check(g);
        if (loop.end(g) != loop.start) throw IncompatibleEndpoints("cocycle evaluation needs loops");
        Novikov c;
        auto vs = loop.vertices(g);
        std::size_t n = loop.edges.size();
        for (std::size_t i = 1; i <= n; ++i) {
            EdgeId ei = loop.edges[i - 1];
            EdgeId enext = (i == n) ? loop.edges[0] : loop.edges[i];
            c += a.xi(vs[i], ei, enext);
        }
        out.push_back(c);
    }
    return out;
}

namespace {

// phi(gamma([num : den])) with phi(x) = s/(x - s), as a Novikov value.
Novikov phi_at(const Novikov& s, const MobiusN& gamma, const std::array<Novikov, 2>& pt,
               const ExtRat& wprec, const Rat& lambda) {
    auto img = gamma.apply_proj(pt[0], pt[1]);
    Novikov num = s * img[1];
    Novikov den = img[0] - s * img[1];
    if (den.is_zero() || (!den.val().is_inf() && den.val().value() >= lambda))
        throw PoleOnOrbit("evaluation hits the pole of phi within precision");
    return num * den.inverse(wprec);
}

}  // namespace

PrincipalPartsResult cech_principal_parts(const BsideContext& ctx, const Novikov& s, EdgeId e0,
                                          VertexId v0, const Rat& budget, std::size_t cap) {
    const TrivalentGraph& g = ctx.graph();
    if (s.is_zero()) throw SpecError("phi needs a nonzero parameter s");
    Rat vs = s.val().value();
    if (!(vs > 0 && vs < g.edge(e0).area))
        throw SpecError("need 0 < val(s) < area of the base edge");

    const ExtRat wprec = ExtRat::of(ctx.lambda() + 2 * g.max_area() + 1);
    SchottkyGroupoid groupoid(g, ctx.charts(), wprec);
    MobiusN phi{Novikov::zero(), s, Novikov::one(), -s};  // x -> s/(x - s)

    PrincipalPartsResult res{{}, true, CechDegree1(g), ExtRat::infinity()};
    for (std::size_t e = 0; e < g.num_edges(); ++e)
        res.sections.push_back(FuncUe(ctx, EdgeId(e), g.edge(EdgeId(e)).ends[0]));

    // Evaluations of f_e at two sample points per vertex, accumulated over paths.
    // Sample points live on the vertex sphere at generic valuation-0 positions;
    // a point of Y_v in the coordinate of the far frame is q_e / t_{e/v}(z).
    const std::array<Rat, 2> samples{Rat(2), Rat(5)};
    // eval[v][slot of e][sample]
    std::vector<std::array<std::array<Novikov, 2>, 3>> eval(g.num_vertices());

    walk_reduced_paths(groupoid, v0, e0, budget, cap, [&](const ReducedPath& p, const MobiusN& core) {
        VertexId vn = p.end(g);
        for (EdgeId e : g.incident(vn)) {
            if (!p.edges.empty() && e == p.edges.back()) continue;
            MobiusN gamma = groupoid.core_finish(core, e, vn);
            Novikov c0 = phi_at(s, gamma, {Novikov::zero(), Novikov::one()}, wprec, ctx.lambda());

            if (res.sections_available) {
                try {
                    MobiusN m = phi.compose(gamma);
                    FuncUe term = mobius_on_ue(ctx, m, e, vn);
                    term.add(0, -c0);
                    term.prune();
                    res.sections[std::size_t(e)] = res.sections[std::size_t(e)] + term;
                } catch (const PoleOnOrbit&) {
                    res.sections_available = false;
                    res.sections.clear();
                }
            }

            // contributions of this term to the evaluations at both endpoints of e
            const Edge& ed = g.edge(e);
            for (VertexId v : {ed.ends[0], ed.ends[1]}) {
                int slot = -1;
                const auto& inc = g.incident(v);
                for (std::size_t i = 0; i < inc.size(); ++i)
                    if (inc[i] == e) slot = int(i);
                for (int si = 0; si < 2; ++si) {
                    MobiusQ chart = ctx.charts().chart(v, e);
                    Rat tn = chart.a * samples[std::size_t(si)] + chart.b;
                    Rat td = chart.c * samples[std::size_t(si)] + chart.d;
                    std::array<Novikov, 2> tau;
                    if (v == vn) {
                        tau = {Novikov(tn), Novikov(td)};
                    } else {
                        // same point seen from the far frame: t' = q_e / t
                        tau = {Novikov::t_power(ed.area) * Novikov(td), Novikov(tn)};
                    }
                    Novikov val = phi_at(s, gamma, tau, wprec, ctx.lambda()) - c0;
                    eval[std::size_t(v)][std::size_t(slot)][std::size_t(si)] += val;
                }
            }
        }
    });

    for (std::size_t vi = 0; vi < g.num_vertices(); ++vi) {
        VertexId v = VertexId(vi);
        const auto& inc = g.incident(v);
        for (std::size_t i = 0; i < inc.size(); ++i) {
            // xi-slot value from the first sample point
            res.boundary.add(v, inc[i], eval[vi][i][0].truncated(ctx.lambda()));
        }
        for (std::size_t i = 0; i < inc.size(); ++i)
            for (std::size_t j = i + 1; j < inc.size(); ++j) {
                Novikov d1 = eval[vi][i][0] - eval[vi][j][0];
                Novikov d2 = eval[vi][i][1] - eval[vi][j][1];
                res.constancy_defect = ExtRat::min(res.constancy_defect, (d1 - d2).val());
            }
    }
    res.boundary.canonicalize();
    return res;
}

}  // namespace mc
