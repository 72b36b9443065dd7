#pragma once

#include <utility>
#include <vector>

#include "mirrorcurve/errors.hpp"
#include "mirrorcurve/rational.hpp"

namespace mc {

/// Truncated element of the Novikov field: a finite sum sum_i c_i T^{a_i} with
/// rational exponents and coefficients, known modulo T^prec. prec = infinity
/// marks an exact (untruncated) element. Canonical form is maintained by every
/// operation: exponents strictly increasing, no zero coefficients, every
/// exponent < prec.
class Novikov {
  public:
    using Term = std::pair<Rat, Rat>;  // (exponent, coefficient)

    Novikov() = default;
    explicit Novikov(const Rat& constant);

    static Novikov zero() { return Novikov(); }
    static Novikov one() { return Novikov(Rat(1)); }
    static Novikov monomial(const Rat& exponent, const Rat& coeff);
    /// T^a
    static Novikov t_power(const Rat& exponent) { return monomial(exponent, Rat(1)); }
    static Novikov from_terms(std::vector<Term> terms, ExtRat prec = ExtRat::infinity());

    const std::vector<Term>& terms() const { return terms_; }
    const ExtRat& precision() const { return prec_; }
    bool is_exact() const { return prec_.is_inf(); }
    bool is_zero() const { return terms_.empty(); }

    /// Valuation; for a (truncated) zero this is the precision, i.e. the first
    /// exponent at which the element could differ from 0.
    ExtRat val() const { return terms_.empty() ? prec_ : ExtRat::of(terms_.front().first); }

    const Rat& lead_exponent() const;
    const Rat& lead_coeff() const;
    Rat coeff_at(const Rat& exponent) const;  // 0 if absent

    /// Same element, re-truncated to min(prec, p).
    Novikov truncated(const Rat& p) const;
    Novikov truncated(const ExtRat& p) const;

    Novikov operator-() const;
    friend Novikov operator+(const Novikov& a, const Novikov& b);
    friend Novikov operator-(const Novikov& a, const Novikov& b);
    friend Novikov operator*(const Novikov& a, const Novikov& b);
    Novikov& operator+=(const Novikov& b) { return *this = *this + b; }
    Novikov& operator-=(const Novikov& b) { return *this = *this - b; }
    Novikov& operator*=(const Novikov& b) { return *this = *this * b; }

    friend Novikov operator*(const Rat& c, const Novikov& a);

    /// Multiplicative inverse. For non-monomial exact inputs a target precision
    /// is required (the inverse is an infinite series). For an input known mod
    /// T^P with valuation v, the result is correct mod T^(P - 2v), further
    /// capped at target_prec when given.
    Novikov inverse(const ExtRat& target_prec = ExtRat::infinity()) const;

    Novikov pow(long n, const ExtRat& target_prec = ExtRat::infinity()) const;

    /// Equality of term sequences (canonical form). Precision tags are not part
    /// of the value; use precision() to compare those.
    friend bool operator==(const Novikov& a, const Novikov& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Novikov& a, const Novikov& b) { return !(a == b); }

    std::string str() const;

  private:
    std::vector<Term> terms_;
    ExtRat prec_ = ExtRat::infinity();

    void normalize();
    friend class NovikovMatrix;
};

inline Novikov operator*(const Novikov& a, const Rat& c) { return c * a; }

/// val(a - b), i.e. the order to which the two elements agree.
ExtRat agreement_valuation(const Novikov& a, const Novikov& b);

}  // namespace mc
