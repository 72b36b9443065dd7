#include "mirrorcurve/mobius.hpp"

namespace mc {

template <>
Rat Mobius<Rat>::apply_affine(const Rat& t) const {
    Rat den = c * t + d;
    if (den == 0) throw ZeroDivision("Mobius evaluation hits a pole");
    return (a * t + b) / den;
}

template <>
Novikov Mobius<Novikov>::apply_affine(const Novikov& t) const {
    Novikov den = c * t + d;
    return (a * t + b) * den.inverse();
}

MobiusN normalize_valuation(const MobiusN& m) {
    ExtRat v = ExtRat::infinity();
    for (const Novikov* e : {&m.a, &m.b, &m.c, &m.d})
        if (!e->is_zero()) v = ExtRat::min(v, e->val());
    if (v.is_inf() || v.value() == 0) return m;
    Novikov shift = Novikov::t_power(-v.value());
    return {m.a * shift, m.b * shift, m.c * shift, m.d * shift};
}

Novikov proj_power(const std::array<Novikov, 2>& x, long n, const ExtRat& prec) {
    const Novikov& num = x[0];
    const Novikov& den = x[1];
    if (n == 0) return Novikov::one();
    if (n > 0) {
        if (den.is_zero()) throw ZeroDivision("positive power of the point at infinity");
        return (num * den.inverse(prec)).pow(n, prec);
    }
    if (num.is_zero()) {
        if (den.is_zero()) throw ZeroDivision("indeterminate projective point");
        return Novikov::zero();  // infinity^n for n < 0
    }
    return (den * num.inverse(prec)).pow(-n, prec);
}

}  // namespace mc
