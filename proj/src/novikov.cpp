#include "mirrorcurve/novikov.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mc {

Novikov::Novikov(const Rat& constant) {
    if (constant != 0) {
        terms_.push_back({Rat(0), constant});
        terms_.back().second.canonicalize();
    }
}

Novikov Novikov::monomial(const Rat& exponent, const Rat& coeff) {
    Novikov n;
    if (coeff != 0) {
        n.terms_.push_back({exponent, coeff});
        n.terms_.back().first.canonicalize();
        n.terms_.back().second.canonicalize();
    }
    return n;
}

Novikov Novikov::from_terms(std::vector<Term> terms, ExtRat prec) {
    Novikov n;
    n.terms_ = std::move(terms);
    n.prec_ = std::move(prec);
    n.normalize();
    return n;
}

void Novikov::normalize() {
    // mpq equality requires canonical form; inputs built as p/q may not be
    for (auto& t : terms_) {
        t.first.canonicalize();
        t.second.canonicalize();
    }
    if (!prec_.is_inf()) prec_.v->canonicalize();
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!prec_.is_inf() && t.first >= prec_.value()) continue;
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(t);
        if (!out.empty() && out.back().second == 0) out.pop_back();
    }
    terms_ = std::move(out);
}

const Rat& Novikov::lead_exponent() const {
    if (terms_.empty()) throw ZeroDivision("lead_exponent of zero element");
    return terms_.front().first;
}

const Rat& Novikov::lead_coeff() const {
    if (terms_.empty()) throw ZeroDivision("lead_coeff of zero element");
    return terms_.front().second;
}

Rat Novikov::coeff_at(const Rat& exponent) const {
    for (const auto& t : terms_) {
        if (t.first == exponent) return t.second;
        if (t.first > exponent) break;
    }
    return Rat(0);
}

Novikov Novikov::truncated(const Rat& p) const { return truncated(ExtRat::of(p)); }

Novikov Novikov::truncated(const ExtRat& p) const {
    Novikov n = *this;
    n.prec_ = ExtRat::min(prec_, p);
    n.normalize();
    return n;
}

Novikov Novikov::operator-() const {
    Novikov n = *this;
    for (auto& t : n.terms_) t.second = -t.second;
    return n;
}

Novikov operator+(const Novikov& a, const Novikov& b) {
    Novikov n;
    n.prec_ = ExtRat::min(a.prec_, b.prec_);
    n.terms_.reserve(a.terms_.size() + b.terms_.size());
    n.terms_ = a.terms_;
    n.terms_.insert(n.terms_.end(), b.terms_.begin(), b.terms_.end());
    n.normalize();
    return n;
}

Novikov operator-(const Novikov& a, const Novikov& b) { return a + (-b); }

Novikov operator*(const Novikov& a, const Novikov& b) {
    // Precision of the product: min(prec_a + val_b, prec_b + val_a).
    ExtRat prec = ExtRat::min(a.prec_ + b.val(), b.prec_ + a.val());
    std::vector<Novikov::Term> terms;
    terms.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
        for (const auto& tb : b.terms_) {
            Rat e = ta.first + tb.first;
            if (!prec.is_inf() && e >= prec.value()) continue;
            terms.emplace_back(std::move(e), ta.second * tb.second);
        }
    return Novikov::from_terms(std::move(terms), prec);
}

Novikov operator*(const Rat& c, const Novikov& a) {
    Novikov n = a;
    if (c == 0) {
        n.terms_.clear();
        return n;
    }
    for (auto& t : n.terms_) t.second *= c;
    return n;
}

Novikov Novikov::inverse(const ExtRat& target_prec) const {
    if (terms_.empty()) throw ZeroDivision("inverse of zero (mod precision)");
    const Rat v = lead_exponent();
    const Rat c = lead_coeff();
    // a = c T^v (1 + r), val(r) > 0
    ExtRat self_prec = prec_.is_inf() ? ExtRat::infinity() : ExtRat::of(prec_.value() - 2 * v);
    ExtRat prec = ExtRat::min(self_prec, target_prec);
    Novikov lead_inv = Novikov::monomial(-v, Rat(1) / c);
    if (terms_.size() == 1) {
        Novikov out = lead_inv;
        out.prec_ = prec;
        out.normalize();
        return out;
    }
    if (prec.is_inf())
        throw PrecisionRequired("inverse of a non-monomial exact element needs a target precision");

    Novikov r = (lead_inv * (*this)).truncated(prec.value() + v) - Novikov::one();
    // r has positive valuation; geometric series sum (-r)^j.
    Novikov geom = Novikov::one();
    Novikov power = Novikov::one();
    const Rat rv = r.val().value();
    for (Rat gained(0); gained < prec.value() + v; gained += rv) {
        power = (power * (-r)).truncated(prec.value() + v);
        if (power.is_zero()) break;
        geom += power;
    }
    Novikov out = (geom * lead_inv).truncated(prec);
    out.prec_ = prec;
    out.normalize();
    return out;
}

Novikov Novikov::pow(long n, const ExtRat& target_prec) const {
    if (n == 0) {
        Novikov out = Novikov::one();
        out.prec_ = ExtRat::min(target_prec, ExtRat::infinity());
        return out;
    }
    if (n < 0) return inverse(target_prec).pow(-n, target_prec);
    Novikov base = *this;
    Novikov acc = Novikov::one();
    long m = n;
    while (m > 0) {
        if (m & 1) acc = acc * base;
        base = base * base;
        m >>= 1;
    }
    if (!target_prec.is_inf()) acc = acc.truncated(target_prec);
    return acc;
}

ExtRat agreement_valuation(const Novikov& a, const Novikov& b) { return (a - b).val(); }

std::string Novikov::str() const {
    if (terms_.empty()) return prec_.is_inf() ? "0" : "O(T^" + prec_.str() + ")";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rat_to_string(t.second);
        if (t.first != 0) os << "*T^" << rat_to_string(t.first);
    }
    if (!prec_.is_inf()) os << " + O(T^" << prec_.str() << ")";
    return os.str();
}

}  // namespace mc
