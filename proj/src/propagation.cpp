#include "mirrorcurve/propagation.hpp"

#include "mirrorcurve/errors.hpp"

namespace mc {

PowerSeries PowerSeries::constant(const Rat& c, std::size_t order) {
    PowerSeries s;
    s.coeffs.assign(order + 1, Rat(0));
    s.coeffs[0] = c;
    return s;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    std::size_t N = std::min(a.order(), b.order());
    PowerSeries out;
    out.coeffs.assign(N + 1, Rat(0));
    for (std::size_t i = 0; i <= N; ++i) {
        if (a.coeffs[i] == 0) continue;
        for (std::size_t j = 0; i + j <= N; ++j) out.coeffs[i + j] += a.coeffs[i] * b.at(j);
    }
    return out;
}

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
    std::size_t N = std::min(a.order(), b.order());
    PowerSeries out;
    out.coeffs.assign(N + 1, Rat(0));
    for (std::size_t i = 0; i <= N; ++i) out.coeffs[i] = a.at(i) + b.at(i);
    return out;
}

PowerSeries PowerSeries::pow(long k) const {
    PowerSeries acc = PowerSeries::constant(Rat(1), order());
    PowerSeries base = *this;
    for (long m = k; m > 0; m >>= 1) {
        if (m & 1) acc = acc * base;
        base = base * base;
    }
    return acc;
}

PowerSeries expand_inverse_power(const MobiusQ& t_in, const MobiusQ& t_out, long k, std::size_t N) {
    if (k < 1) throw SpecError("expand_inverse_power: k must be >= 1");
    // t_in as a function of t = t_out: F = t_in o t_out^{-1}.
    MobiusQ F = t_in.compose(t_out.adjugate());
    if (F.det() == 0) throw SpecError("degenerate chart pair");
    const Rat &alpha = F.a, &beta = F.b, &gamma = F.c, &delta = F.d;
    if (beta == 0) throw SingularExpansion("t_out's marked point is a zero of t_in");
    // F^{-k} = (gamma t + delta)^k * (alpha t + beta)^{-k}
    PowerSeries num;
    num.coeffs.assign(N + 1, Rat(0));
    num.coeffs[0] = delta;
    if (N >= 1) num.coeffs[1] = gamma;
    PowerSeries inv;  // (alpha t + beta)^{-1} = beta^{-1} sum (-alpha/beta)^j t^j
    inv.coeffs.assign(N + 1, Rat(0));
    Rat r = -alpha / beta;
    Rat c = Rat(1) / beta;
    for (std::size_t j = 0; j <= N; ++j) {
        inv.coeffs[j] = c;
        c *= r;
    }
    return num.pow(k) * inv.pow(k);
}

Rat closed_form_coefficient(Marked in, Marked out, long k_in, long k_out) {
    if (in == out) throw SameMarkedPoint("closed form needs distinct marked points");
    if (k_in < 1 || k_out < 0) throw SpecError("closed_form_coefficient: k_in >= 1, k_out >= 0");
    bool cyclic = (int(out) - int(in) + 3) % 3 == 1;  // (0,1),(1,inf),(inf,0)
    if (cyclic) {
        Rat sign = (k_out % 2 == 0) ? Rat(1) : Rat(-1);
        return sign * Rat(binomial(k_in, k_out));
    }
    Rat sign = (k_in % 2 == 0) ? Rat(1) : Rat(-1);
    return sign * Rat(binomial(k_out - 1, k_in - 1));
}

namespace {

// Evaluation point for constant-term extraction: a rational z* at which both
// charts are finite and nonzero. Candidates outside {0, 1, inf} orbit issues.
Rat pick_sample_point(const MobiusQ& t1, const MobiusQ& t2) {
    for (long num : {2, 3, 5, 7, -1, -2}) {
        for (long den : {1, 2, 3}) {
            Rat z(num, den);
            bool ok = true;
            for (const MobiusQ* t : {&t1, &t2}) {
                if (t->c * z + t->d == 0 || t->a * z + t->b == 0) ok = false;
            }
            if (ok) return z;
        }
    }
    throw SpecError("no sample point found");
}

}  // namespace

Rat partial_fraction_constant(const MobiusQ& t1, const MobiusQ& t2, long k1, long k2) {
    if (k1 < 1 || k2 < 1) throw SpecError("partial_fraction_constant: k1, k2 >= 1");
    MobiusQ rel = t1.compose(t2.adjugate());
    {
        auto img = rel.apply_zero();  // t1 at t2's marked point
        if (img[0] == 0) throw SameMarkedPoint("charts share a marked point");
    }
    // Polar part of t1^{-k1} t2^{-k2} at the zero of t1:
    //   P1 = sum_{b=0}^{k1-1} C^{e2,e1}_{k2,b} t1^{b-k1},
    // with C^{e2,e1}_{k2,b} the expansion of t2^{-k2} in t1. Symmetrically P2.
    PowerSeries c21 = expand_inverse_power(t2, t1, k2, std::size_t(k1 - 1));
    PowerSeries c12 = expand_inverse_power(t1, t2, k1, std::size_t(k2 - 1));
    Rat z = pick_sample_point(t1, t2);
    Rat v1 = t1.apply_affine(z), v2 = t2.apply_affine(z);
    if (v1 == 0 || v2 == 0) throw SpecError("sample point hits a chart zero");
    auto ipow = [](const Rat& x, long n) {
        Rat acc(1);
        Rat base = n >= 0 ? x : Rat(1) / x;
        for (long m = n >= 0 ? n : -n; m > 0; --m) acc *= base;
        return acc;
    };
    Rat full = ipow(v1, -k1) * ipow(v2, -k2);
    Rat p1(0), p2(0);
    for (long b = 0; b < k1; ++b) p1 += c21.at(std::size_t(b)) * ipow(v1, b - k1);
    for (long a = 0; a < k2; ++a) p2 += c12.at(std::size_t(a)) * ipow(v2, a - k2);
    return full - p1 - p2;
}

int PropagationTable::slot(EdgeId e) const {
    for (int s = 0; s < 3; ++s)
        if (local_[s] == e) return s;
    throw SpecError("edge not incident to the table's vertex");
}

PropagationTable::PropagationTable(const TrivalentGraph& g, const VertexChart& charts, VertexId v,
                                   long k_max, long l_max)
    : v_(v), k_max_(k_max), l_max_(l_max) {
    const auto& inc = g.incident(v);
    if (inc.size() != 3) throw SpecError("propagation table requires a trivalent vertex");
    for (int s = 0; s < 3; ++s) local_[s] = inc[s];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            MobiusQ ti = charts.chart(v, local_[i]);
            MobiusQ tj = charts.chart(v, local_[j]);
            auto& per_k = c_[{i, j}];
            per_k.reserve(std::size_t(k_max));
            for (long k = 1; k <= k_max; ++k)
                per_k.push_back(expand_inverse_power(ti, tj, k, std::size_t(l_max)));
            auto& kk = k_[{i, j}];
            kk.assign(std::size_t(k_max), std::vector<Rat>(std::size_t(k_max), Rat(0)));
            for (long k1 = 1; k1 <= k_max; ++k1)
                for (long k2 = 1; k2 <= k_max; ++k2)
                    kk[std::size_t(k1 - 1)][std::size_t(k2 - 1)] =
                        partial_fraction_constant(ti, tj, k1, k2);
        }
}

Rat PropagationTable::coefficient(EdgeId e_in, EdgeId e_out, long k, long l) const {
    if (k == 0) return l == 0 ? Rat(1) : Rat(0);
    if (k < 0 || k > k_max_ || l < 0 || l > l_max_)
        throw SpecError("propagation coefficient index out of table range");
    return c_.at({slot(e_in), slot(e_out)})[std::size_t(k - 1)].at(std::size_t(l));
}

Rat PropagationTable::constant_term(EdgeId e1, EdgeId e2, long k1, long k2) const {
    if (k1 == 0 || k2 == 0) return Rat(0);
    if (k1 < 0 || k1 > k_max_ || k2 < 0 || k2 > k_max_)
        throw SpecError("constant term index out of table range");
    return k_.at({slot(e1), slot(e2)})[std::size_t(k1 - 1)][std::size_t(k2 - 1)];
}

IdentityReport check_propagation_identities(const TrivalentGraph& g, const VertexChart& charts,
                                            long k_bound) {
    IdentityReport report;
    auto record = [&report](const char* id, VertexId v, EdgeId e1, EdgeId e2,
                            std::vector<long> idx, const Rat& lhs, const Rat& rhs) {
        ++report.checked;
        if (lhs != rhs)
            report.failures.push_back({id, v, {e1, e2}, std::move(idx), false, lhs, rhs});
    };
    for (std::size_t vi = 0; vi < g.num_vertices(); ++vi) {
        VertexId v = VertexId(vi);
        // Table bound: identities with entries <= k_bound use l up to 2*k_bound.
        PropagationTable tab(g, charts, v, 2 * k_bound, 2 * k_bound);
        const auto& inc = g.incident(v);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                EdgeId e1 = inc[i], e2 = inc[j];
                // backwards: sum_{b<k1} C^{e2,e1}_{a,b} C^{e1,e2}_{k1-b,k2-a}
                //            + delta_{a,k2} K^{e1,e2}_{k1,k2} = C^{e1,e2}_{k1,k2}
                for (long k1 = 1; k1 <= k_bound; ++k1)
                    for (long k2 = 1; k2 <= k_bound; ++k2)
                        for (long a = 1; a <= k2; ++a) {
                            Rat lhs(0);
                            for (long b = 0; b < k1; ++b)
                                lhs += tab.coefficient(e2, e1, a, b) *
                                       tab.coefficient(e1, e2, k1 - b, k2 - a);
                            if (a == k2) lhs += tab.constant_term(e1, e2, k1, k2);
                            record("backwards", v, e1, e2, {k1, k2, a}, lhs,
                                   tab.coefficient(e1, e2, k1, k2));
                        }
                // forward: sum_{b<=k2} C^{e1,e2}_{a,b} C^{e1,e2}_{k1-a,k2-b} = C^{e1,e2}_{k1,k2}
                for (long k1 = 2; k1 <= k_bound; ++k1)
                    for (long k2 = 0; k2 <= k_bound; ++k2)
                        for (long a = 1; a < k1; ++a) {
                            Rat lhs(0);
                            for (long b = 0; b <= k2; ++b)
                                lhs += tab.coefficient(e1, e2, a, b) *
                                       tab.coefficient(e1, e2, k1 - a, k2 - b);
                            record("forward", v, e1, e2, {k1, k2, a}, lhs,
                                   tab.coefficient(e1, e2, k1, k2));
                        }
                // output bounce: sum_{b<k1} C^{e2,e1}_{a,b} K^{e1,e2}_{k1-b,k2-a} = K^{e1,e2}_{k1,k2}
                for (long k1 = 1; k1 <= k_bound; ++k1)
                    for (long k2 = 2; k2 <= k_bound; ++k2)
                        for (long a = 1; a < k2; ++a) {
                            Rat lhs(0);
                            for (long b = 0; b < k1; ++b)
                                lhs += tab.coefficient(e2, e1, a, b) *
                                       tab.constant_term(e1, e2, k1 - b, k2 - a);
                            record("output_bounce", v, e1, e2, {k1, k2, a}, lhs,
                                   tab.constant_term(e1, e2, k1, k2));
                        }
                // tripod: e3 = the remaining edge at v
                EdgeId e3 = -1;
                for (int s = 0; s < 3; ++s)
                    if (s != i && s != j) e3 = inc[s];
                for (long k1 = 1; k1 <= k_bound; ++k1)
                    for (long k2 = 1; k2 <= k_bound; ++k2)
                        for (long k3 = 0; k3 <= k_bound; ++k3) {
                            Rat lhs(0);
                            for (long a = 0; a < k2; ++a)
                                lhs += tab.coefficient(e1, e2, k1, a) *
                                       tab.coefficient(e2, e3, k2 - a, k3);
                            for (long b = 0; b < k1; ++b)
                                lhs += tab.coefficient(e2, e1, k2, b) *
                                       tab.coefficient(e1, e3, k1 - b, k3);
                            if (k3 == 0) lhs += tab.constant_term(e1, e2, k1, k2);
                            Rat rhs(0);
                            for (long c = 0; c <= k3; ++c)
                                rhs += tab.coefficient(e1, e3, k1, c) *
                                       tab.coefficient(e2, e3, k2, k3 - c);
                            record("tripod", v, e1, e2, {k1, k2, k3}, lhs, rhs);
                        }
            }
    }
    return report;
}

}  // namespace mc
