#include "mirrorcurve/hpl.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace mc {

namespace {

ExtRat weighted_min_val(const NovikovMatrix& m, const std::vector<Rat>& rw,
                        const std::vector<Rat>& cw) {
    ExtRat out = ExtRat::infinity();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).is_zero()) out = ExtRat::min(out, m.at(i, j).val() + (rw[i] - cw[j]));
    return out;
}

void check_zero_mod(std::vector<std::string>& issues, const NovikovMatrix& m,
                    const std::vector<Rat>& rw, const std::vector<Rat>& cw, const Rat& lambda,
                    const char* what) {
    ExtRat v = weighted_min_val(m, rw, cw);
    if (v < ExtRat::of(lambda)) {
        std::ostringstream os;
        os << what << " fails mod T^" << rat_to_string(lambda) << " (defect " << v.str() << ")";
        issues.push_back(os.str());
    }
}

}  // namespace

std::vector<std::string> Contraction::verify(const Rat& lambda) const {
    std::vector<std::string> issues;
    const auto& wb = big.weight;
    const auto& ws = small.weight;
    NovikovMatrix id_s = NovikovMatrix::identity(small.size());
    NovikovMatrix id_b = NovikovMatrix::identity(big.size());
    check_zero_mod(issues, proj * incl - id_s, ws, ws, lambda, "p i = 1");
    check_zero_mod(issues, id_b - incl * proj - (d_big * homotopy + homotopy * d_big), wb, wb,
                   lambda, "1 - i p = d h + h d");
    check_zero_mod(issues, homotopy * homotopy, wb, wb, lambda, "h h = 0");
    check_zero_mod(issues, proj * homotopy, ws, wb, lambda, "p h = 0");
    check_zero_mod(issues, homotopy * incl, wb, ws, lambda, "h i = 0");
    check_zero_mod(issues, d_big * incl - incl * d_small, wb, ws, lambda, "i chain map");
    check_zero_mod(issues, d_small * proj - proj * d_big, ws, wb, lambda, "p chain map");
    check_zero_mod(issues, d_big * d_big, wb, wb, lambda, "d^2 = 0");
    return issues;
}

Contraction contract_by_elimination(const GradedBasis& basis, const NovikovMatrix& d,
                                    const Rat& lambda) {
    const std::size_t n = basis.size();
    if (d.rows() != n || d.cols() != n) throw SpecError("differential shape mismatch");
    NovikovMatrix dd = d;
    NovikovMatrix incl = NovikovMatrix::identity(n);
    NovikovMatrix proj = NovikovMatrix::identity(n);
    NovikovMatrix h(n, n);
    std::vector<bool> gone(n, false);
    const ExtRat inv_prec = ExtRat::of(4 * lambda);

    for (;;) {
        // pivot of minimal weighted valuation among surviving entries
        bool found = false;
        std::size_t pa = 0, pb = 0;
        ExtRat best = ExtRat::infinity();
        for (std::size_t a = 0; a < n; ++a) {
            if (gone[a]) continue;
            for (std::size_t b = 0; b < n; ++b) {
                if (gone[b] || dd.at(b, a).is_zero()) continue;
                ExtRat v = dd.at(b, a).val() + (basis.weight[b] - basis.weight[a]);
                if (v < best) {
                    best = v;
                    pa = a;
                    pb = b;
                    found = true;
                }
            }
        }
        if (!found || !(best < ExtRat::of(lambda))) break;

        Novikov c = dd.at(pb, pa);
        Novikov cinv = c.inverse(inv_prec);
        gone[pa] = gone[pb] = true;

        // one-step contraction split off span(a, b); compose with the running maps
        // i1(x) = x - (d_{b,x}/c) a,  p1(a) = 0,  p1(b) = -(1/c) sum_r d_{r,a} r,
        // h1(b) = (1/c) a.
        NovikovMatrix i1 = NovikovMatrix::identity(n);
        NovikovMatrix p1 = NovikovMatrix::identity(n);
        NovikovMatrix h1(n, n);
        for (std::size_t x = 0; x < n; ++x) {
            if (x == pa || x == pb) continue;
            if (!dd.at(pb, x).is_zero()) i1.at(pa, x) = -(dd.at(pb, x) * cinv);
        }
        p1.at(pa, pa) = Novikov::zero();
        p1.at(pb, pb) = Novikov::zero();
        for (std::size_t r = 0; r < n; ++r) {
            if (r == pa || r == pb) continue;
            if (!dd.at(r, pa).is_zero()) p1.at(r, pb) = -(cinv * dd.at(r, pa));
        }
        h1.at(pa, pb) = cinv;

        // compose: h <- h + incl h1 proj ; incl <- incl i1 ; proj <- p1 proj ; d' = p1 d i1
        h = h + incl * h1 * proj;
        incl = incl * i1;
        proj = p1 * proj;
        dd = p1 * dd * i1;
        dd.truncate(4 * lambda);
        incl.truncate(4 * lambda);
        proj.truncate(4 * lambda);
        h.truncate(4 * lambda);
    }

    Contraction out;
    out.big = basis;
    out.d_big = d;
    for (std::size_t x = 0; x < n; ++x)
        if (!gone[x]) out.small_to_big.push_back(x);
    for (std::size_t x : out.small_to_big)
        out.small.add(basis.degree[x], basis.name[x], basis.weight[x]);
    const std::size_t m = out.small_to_big.size();
    out.d_small = NovikovMatrix(m, m);
    out.incl = NovikovMatrix(n, m);
    out.proj = NovikovMatrix(m, n);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i)
            out.d_small.at(i, j) = dd.at(out.small_to_big[i], out.small_to_big[j]);
        for (std::size_t i = 0; i < n; ++i) out.incl.at(i, j) = incl.at(i, out.small_to_big[j]);
        for (std::size_t i = 0; i < n; ++i) out.proj.at(j, i) = proj.at(out.small_to_big[j], i);
    }
    out.homotopy = h;
    return out;
}

PerturbedContraction perturb_contraction(const Contraction& c, const NovikovMatrix& delta,
                                         const Rat& lambda) {
    const std::size_t n = c.big.size();
    if (delta.rows() != n || delta.cols() != n) throw SpecError("perturbation shape mismatch");
    const auto& w = c.big.weight;

    NovikovMatrix dtot = c.d_big + delta;
    if (!(weighted_min_val(dtot * dtot, w, w) >= ExtRat::of(lambda)))
        throw NotSquareZero("(d + delta)^2 != 0 mod T^lambda");

    NovikovMatrix hd = c.homotopy * delta;
    // strict weighted valuation gain on every basis vector
    Rat eps = lambda;
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
        ExtRat col = ExtRat::infinity();
        for (std::size_t i = 0; i < n; ++i)
            if (!hd.at(i, j).is_zero()) col = ExtRat::min(col, hd.at(i, j).val() + (w[i] - w[j]));
        if (col.is_inf()) continue;
        any = true;
        if (!(col > ExtRat::of(Rat(0))))
            throw NotNilpotent("h delta does not increase valuation on " + c.big.name[j]);
        eps = rat_min(eps, col.value());
    }
    if (!any) eps = lambda;

    // Neumann series sum (-h delta)^j, truncated once the gain exceeds lambda
    NovikovMatrix geo = NovikovMatrix::identity(n);
    NovikovMatrix pw = NovikovMatrix::identity(n);
    long steps = rat_ceil(lambda / eps) + 1;
    for (long s = 0; s < steps; ++s) {
        pw = pw * hd;
        pw.truncate(2 * lambda);
        bool zero = true;
        for (std::size_t i = 0; i < n && zero; ++i)
            for (std::size_t j = 0; j < n && zero; ++j)
                if (!pw.at(i, j).is_zero()) zero = false;
        if (zero) break;
        if (s % 2 == 0)
            geo = geo - pw;
        else
            geo = geo + pw;
    }

    PerturbedContraction out;
    out.epsilon = eps;
    NovikovMatrix di = delta * geo;  // delta (1 + h delta)^{-1}
    out.d_small = c.d_small + c.proj * di * c.incl;
    out.incl = geo * c.incl;
    // (1 + delta h)^{-1} = 1 - delta (1 + h delta)^{-1} h
    NovikovMatrix right = NovikovMatrix::identity(n) - di * c.homotopy;
    out.proj = c.proj * right;
    out.homotopy = geo * c.homotopy;
    out.d_small.truncate(lambda);
    out.incl.truncate(2 * lambda);
    out.proj.truncate(2 * lambda);
    out.homotopy.truncate(2 * lambda);
    return out;
}

void BarOps::add(const std::vector<int>& in, int out, const Novikov& c) {
    if (c.is_zero()) return;
    if (in.empty()) throw SpecError("no arity-0 operations");
    if (ops_.size() < in.size()) ops_.resize(in.size());
    auto& slot = ops_[in.size() - 1][in][out];
    slot += c;
    if (slot.is_zero()) ops_[in.size() - 1][in].erase(out);
}

const SparseVec* BarOps::get(const std::vector<int>& in) const {
    if (in.empty() || ops_.size() < in.size()) return nullptr;
    auto it = ops_[in.size() - 1].find(in);
    if (it == ops_[in.size() - 1].end()) return nullptr;
    return &it->second;
}

const std::map<std::vector<int>, SparseVec>& BarOps::ops_view(std::size_t arity) const {
    static const std::map<std::vector<int>, SparseVec> empty;
    if (arity == 0 || ops_.size() < arity) return empty;
    return ops_[arity - 1];
}

BarOps BarOps::from_dg(const GradedBasis& basis, const NovikovMatrix& d, const Mu2& mu2) {
    BarOps ops(basis);
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (!d.at(i, j).is_zero()) ops.add({int(j)}, int(i), -d.at(i, j));
    for (const auto& [in, outs] : mu2) {
        Rat sign = (basis.degree[std::size_t(in.first)] % 2 == 0) ? Rat(1) : Rat(-1);
        for (const auto& [out, c] : outs) ops.add({in.first, in.second}, out, sign * c);
    }
    return ops;
}

bool BarOps::dg_only() const {
    for (std::size_t k = 2; k < ops_.size(); ++k)
        if (!ops_[k].empty()) return false;
    return true;
}

std::map<std::vector<int>, Novikov> BarOps::coderivation(
    const std::map<std::vector<int>, Novikov>& tensor) const {
    std::map<std::vector<int>, Novikov> out;
    for (const auto& [tuple, coeff] : tensor) {
        const std::size_t n = tuple.size();
        Rat prefix_sign(1);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t k = 1; a + k <= n && k <= ops_.size(); ++k) {
                std::vector<int> in(tuple.begin() + long(a), tuple.begin() + long(a + k));
                const SparseVec* img = get(in);
                if (!img) continue;
                for (const auto& [y, c] : *img) {
                    std::vector<int> res;
                    res.reserve(n - k + 1);
                    res.insert(res.end(), tuple.begin(), tuple.begin() + long(a));
                    res.push_back(y);
                    res.insert(res.end(), tuple.begin() + long(a + k), tuple.end());
                    auto& slot = out[res];
                    slot += (prefix_sign * coeff) * c;
                    if (slot.is_zero()) out.erase(res);
                }
            }
            // Koszul pass over x_a for the next position (operator has odd degree)
            if ((basis_->degree[std::size_t(tuple[a])] - 1) % 2 != 0) prefix_sign = -prefix_sign;
        }
    }
    return out;
}

AInfinityDefect verify_ainfinity(const BarOps& ops, int n_max, const std::vector<int>& generating) {
    std::vector<int> gens = generating;
    if (gens.empty())
        for (std::size_t i = 0; i < ops.basis().size(); ++i) gens.push_back(int(i));

    AInfinityDefect result;
    // If no operations of arity >= 3 exist, relations of arity >= 4 are
    // compositions involving an operation of arity >= 3 and vanish identically.
    int effective = ops.dg_only() ? std::min(n_max, 3) : n_max;

    std::vector<int> tuple;
    auto evaluate = [&](const std::vector<int>& t) {
        std::map<std::vector<int>, Novikov> tensor{{t, Novikov::one()}};
        auto img = ops.coderivation(tensor);
        auto img2 = ops.coderivation(img);
        ++result.relations_checked;
        for (const auto& [tt, c] : img2) {
            if (c.is_zero()) continue;
            Rat w(0);
            for (int x : tt) w += ops.basis().weight[std::size_t(x)];
            ExtRat v = c.val() + w;
            // relative to the input tuple's weight
            for (int x : t) v = v - ops.basis().weight[std::size_t(x)] + Rat(0);
            if (v < result.min_defect) {
                result.min_defect = v;
                result.worst_tuple = t;
            }
        }
    };
    // Iterate all tuples of length 1..effective over the generating set.
    std::function<void(std::size_t)> rec = [&](std::size_t len) {
        if (tuple.size() == len) {
            evaluate(tuple);
            return;
        }
        for (int gidx : gens) {
            tuple.push_back(gidx);
            rec(len);
            tuple.pop_back();
        }
    };
    for (int n = 1; n <= effective; ++n) rec(std::size_t(n));
    return result;
}

TransferredStructure transfer_ainfinity(const Contraction& c, const BarOps& mu_big, int n_max,
                                        const Rat& lambda) {
    const std::size_t nbig = c.big.size();
    const auto& wbig = c.big.weight;

    // delta as bar operations: arity 1 is -(full d - naive d); arities >= 2 as given.
    BarOps delta(c.big);
    {
        // arity-1 components of mu_big are -full_d; subtract -naive_d
        for (std::size_t j = 0; j < nbig; ++j) {
            std::vector<int> in{int(j)};
            SparseVec full;
            if (const SparseVec* v = mu_big.get(in)) full = *v;
            for (std::size_t i = 0; i < nbig; ++i) {
                Novikov want = -c.d_big.at(i, j);
                Novikov have;
                if (auto it = full.find(int(i)); it != full.end()) have = it->second;
                Novikov diff = have - want;
                if (!diff.is_zero()) delta.add(in, int(i), diff);
            }
        }
        // copy arities >= 2
        for (std::size_t k = 2; k <= std::size_t(mu_big.max_arity()); ++k) {
            // re-add through the public surface
            for (const auto& [in, outs] : mu_big.ops_view(k))
                for (const auto& [out, cc] : outs) delta.add(in, out, cc);
        }
    }

    // working precision for tensor coefficients: prune by weighted valuation
    const Rat wcut = 2 * lambda;
    auto prune = [&](std::map<std::vector<int>, Novikov>& tensor,
                     const Rat& in_weight) {
        for (auto it = tensor.begin(); it != tensor.end();) {
            Rat w(0);
            for (int x : it->first) w += wbig[std::size_t(x)];
            ExtRat v = it->second.val() + (w - in_weight);
            if (!(v < ExtRat::of(wcut)))
                it = tensor.erase(it);
            else
                ++it;
        }
    };

    // h'' on a sparse tensor: sum over positions of 1^a (x) h (x) (ip)^b, with
    // the Koszul pass sign for the degree -1 operator.
    NovikovMatrix ip = c.incl * c.proj;
    auto h_tensor = [&](const std::map<std::vector<int>, Novikov>& tensor) {
        std::map<std::vector<int>, Novikov> out;
        for (const auto& [tuple, coeff] : tensor) {
            const std::size_t n = tuple.size();
            Rat prefix(1);
            for (std::size_t a = 0; a < n; ++a) {
                // h at position a, ip on positions > a
                // expand the product of columns
                std::map<std::vector<int>, Novikov> partial{{{}, prefix * coeff}};
                auto extend = [&](const NovikovMatrix& mcol, int j) {
                    std::map<std::vector<int>, Novikov> nxt;
                    for (const auto& [pt, pc] : partial)
                        for (std::size_t i = 0; i < nbig; ++i) {
                            if (mcol.at(i, std::size_t(j)).is_zero()) continue;
                            auto t2 = pt;
                            t2.push_back(int(i));
                            auto& slot = nxt[t2];
                            slot += pc * mcol.at(i, std::size_t(j));
                            if (slot.is_zero()) nxt.erase(t2);
                        }
                    partial = std::move(nxt);
                };
                for (std::size_t x = 0; x < a; ++x) {
                    // identity on the prefix
                    std::map<std::vector<int>, Novikov> nxt;
                    for (const auto& [pt, pc] : partial) {
                        auto t2 = pt;
                        t2.push_back(tuple[x]);
                        nxt[t2] = pc;
                    }
                    partial = std::move(nxt);
                }
                extend(c.homotopy, tuple[a]);
                for (std::size_t x = a + 1; x < n; ++x) extend(ip, tuple[x]);
                for (const auto& [pt, pc] : partial) {
                    if (pc.is_zero()) continue;
                    auto& slot = out[pt];
                    slot += pc;
                    if (slot.is_zero()) out.erase(pt);
                }
                if ((c.big.degree[std::size_t(tuple[a])] - 1) % 2 != 0) prefix = -prefix;
            }
        }
        return out;
    };

    TransferredStructure result(c.small);
    const std::size_t nsmall = c.small.size();

    // epsilon for termination: weighted gain of h''delta is at least the gain
    // of h delta^1 and of delta^1 itself; certify on the matrices.
    NovikovMatrix delta1(nbig, nbig);
    for (std::size_t j = 0; j < nbig; ++j) {
        if (const SparseVec* v = delta.get({int(j)}))
            for (const auto& [i, cc] : *v) delta1.at(std::size_t(i), j) = cc;
    }
    Rat eps = lambda;
    {
        NovikovMatrix hd = c.homotopy * delta1;
        for (const NovikovMatrix* m : {&hd, &delta1}) {
            ExtRat v = weighted_min_val(*m, wbig, wbig);
            if (!v.is_inf()) {
                if (!(v > ExtRat::of(Rat(0))))
                    throw NotNilpotent("arity-1 perturbation does not gain valuation");
                eps = rat_min(eps, v.value());
            }
        }
    }
    long max_steps = 2 * rat_ceil(lambda / eps) + long(n_max) + 2;

    std::vector<int> tuple;
    std::function<void(int)> rec = [&](int len) {
        if (int(tuple.size()) == len) {
            // i' on the tuple
            std::map<std::vector<int>, Novikov> tensor{{{}, Novikov::one()}};
            Rat in_weight(0);
            for (int y : tuple) in_weight += c.small.weight[std::size_t(y)];
            for (int y : tuple) {
                std::map<std::vector<int>, Novikov> nxt;
                for (const auto& [pt, pc] : tensor)
                    for (std::size_t i = 0; i < nbig; ++i) {
                        if (c.incl.at(i, std::size_t(y)).is_zero()) continue;
                        auto t2 = pt;
                        t2.push_back(int(i));
                        auto& slot = nxt[t2];
                        slot += pc * c.incl.at(i, std::size_t(y));
                        if (slot.is_zero()) nxt.erase(t2);
                    }
                tensor = std::move(nxt);
            }
            // Neumann series: S = sum (-h'' delta)^s (i' tuple)
            std::map<std::vector<int>, Novikov> series = tensor;
            std::map<std::vector<int>, Novikov> power = tensor;
            for (long s = 0; s < max_steps; ++s) {
                auto hd = h_tensor(delta.coderivation(power));
                for (auto& [t, cc] : hd) cc = -cc;
                prune(hd, in_weight);
                if (hd.empty()) break;
                for (const auto& [t, cc] : hd) {
                    auto& slot = series[t];
                    slot += cc;
                    if (slot.is_zero()) series.erase(t);
                }
                power = std::move(hd);
                if (s + 1 == max_steps)
                    throw NotNilpotent("tensor Neumann series failed to terminate");
            }
            // itilde: arity-1 component of the series
            SparseVec lin;
            for (const auto& [t, cc] : series)
                if (t.size() == 1) lin[t[0]] += cc;
            for (auto it = lin.begin(); it != lin.end();)
                it = it->second.is_zero() ? lin.erase(it) : std::next(it);
            result.itilde[tuple] = lin;
            // mu_small: p of the arity-1 component of delta(series), plus d_small
            auto ds = delta.coderivation(series);
            SparseVec out1;
            for (const auto& [t, cc] : ds)
                if (t.size() == 1) out1[t[0]] += cc;
            for (const auto& [i, cc] : out1) {
                if (cc.is_zero()) continue;
                for (std::size_t r = 0; r < nsmall; ++r) {
                    if (c.proj.at(r, std::size_t(i)).is_zero()) continue;
                    Novikov v = (c.proj.at(r, std::size_t(i)) * cc).truncated(lambda);
                    if (!v.is_zero()) result.small_ops.add(tuple, int(r), v);
                }
            }
            if (tuple.size() == 1) {
                for (std::size_t r = 0; r < nsmall; ++r) {
                    Novikov v = -c.d_small.at(r, std::size_t(tuple[0]));
                    if (!v.is_zero()) result.small_ops.add(tuple, int(r), v.truncated(lambda));
                }
            }
            return;
        }
        for (std::size_t y = 0; y < nsmall; ++y) {
            tuple.push_back(int(y));
            rec(len);
            tuple.pop_back();
        }
    };
    for (int n = 1; n <= n_max; ++n) rec(n);
    return result;
}

}  // namespace mc
