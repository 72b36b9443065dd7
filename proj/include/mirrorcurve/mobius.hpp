#pragma once

#include <array>

#include "mirrorcurve/novikov.hpp"

namespace mc {

/// 2x2 matrix acting projectively: t -> (a t + b) / (c t + d). Composition is
/// matrix product; inversion is the adjugate (maps are identified up to scalar,
/// so no division is ever needed).
template <class S>
struct Mobius {
    S a, b, c, d;

    static Mobius identity() { return {S(1), S(0), S(0), S(1)}; }

    Mobius compose(const Mobius& rhs) const {  // (*this) o rhs as maps
        return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
                c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
    }
    Mobius adjugate() const { return {d, -b, -c, a}; }
    S det() const { return a * d - b * c; }

    /// Image of the projective point [x : y].
    std::array<S, 2> apply_proj(const S& x, const S& y) const {
        return {a * x + b * y, c * x + d * y};
    }
    std::array<S, 2> apply_zero() const { return {b, d}; }      // image of t = 0
    std::array<S, 2> apply_infinity() const { return {a, c}; }  // image of t = infinity

    S apply_affine(const S& t) const;  // requires invertible denominator
};

using MobiusQ = Mobius<Rat>;
using MobiusN = Mobius<Novikov>;

inline Rat scalar_one(Rat*) { return Rat(1); }

inline MobiusN to_novikov(const MobiusQ& m) {
    return {Novikov(m.a), Novikov(m.b), Novikov(m.c), Novikov(m.d)};
}

/// Divide all entries by T^(min valuation); exact, keeps entries in O_K.
MobiusN normalize_valuation(const MobiusN& m);

/// x^n for a projective value x = [num : den], as an affine Novikov element.
/// n may be negative. Zero denominator (the point at infinity) gives 0 for
/// negative n and throws for positive n.
Novikov proj_power(const std::array<Novikov, 2>& x, long n, const ExtRat& prec);

}  // namespace mc
