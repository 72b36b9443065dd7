#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace mc {

using Rat = mpq_class;
using Int = mpz_class;

/// Parse "p/q" or "p". Throws std::invalid_argument on malformed input or q == 0.
Rat rat_from_string(const std::string& s);

/// Canonical "p/q" (or "p" when the denominator is 1).
std::string rat_to_string(const Rat& r);

/// binom(n, k) with the convention that it vanishes unless 0 <= k <= n.
Int binomial(long n, long k);

long rat_floor(const Rat& r);
long rat_ceil(const Rat& r);

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a > b ? a : b; }

/// Extended rational: a value or +infinity. Used for valuations and precisions,
/// where "infinite" means exact / identically zero.
struct ExtRat {
    std::optional<Rat> v;  // nullopt = +infinity

    static ExtRat infinity() { return ExtRat{std::nullopt}; }
    static ExtRat of(const Rat& r) {
        ExtRat e{r};
        e.v->canonicalize();
        return e;
    }

    bool is_inf() const { return !v.has_value(); }
    const Rat& value() const { return *v; }

    friend bool operator<(const ExtRat& a, const ExtRat& b) {
        if (a.is_inf()) return false;
        if (b.is_inf()) return true;
        return *a.v < *b.v;
    }
    friend bool operator==(const ExtRat& a, const ExtRat& b) {
        if (a.is_inf() || b.is_inf()) return a.is_inf() && b.is_inf();
        return *a.v == *b.v;
    }
    friend bool operator<=(const ExtRat& a, const ExtRat& b) { return a < b || a == b; }
    friend bool operator>=(const ExtRat& a, const ExtRat& b) { return b <= a; }
    friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }

    friend ExtRat operator+(const ExtRat& a, const ExtRat& b) {
        if (a.is_inf() || b.is_inf()) return infinity();
        return of(*a.v + *b.v);
    }
    friend ExtRat operator+(const ExtRat& a, const Rat& b) {
        if (a.is_inf()) return infinity();
        return of(*a.v + b);
    }
    friend ExtRat operator-(const ExtRat& a, const Rat& b) {
        if (a.is_inf()) return infinity();
        return of(*a.v - b);
    }
    static ExtRat min(const ExtRat& a, const ExtRat& b) { return a < b ? a : b; }

    std::string str() const { return is_inf() ? "inf" : rat_to_string(*v); }
};

}  // namespace mc
