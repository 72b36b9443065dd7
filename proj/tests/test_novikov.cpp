#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mirrorcurve/novikov.hpp"
#include "mirrorcurve/novikov_linalg.hpp"
#include "test_util.hpp"

using namespace mc;
using mc::testutil::nov;

TEST_CASE("additive inverse cancels") {
    Novikov a = Novikov::t_power(Rat(1, 2));
    CHECK((a + (-a)).is_zero());
}

TEST_CASE("term merge with truncation") {
    Novikov a = nov("1 + T^1");
    Novikov b = nov("2*T^1 + 1*T^2");
    Novikov sum = (a + b).truncated(Rat(2));
    CHECK(sum == nov("1 + 3*T^1"));
}

TEST_CASE("exponents sorted") {
    Novikov s = Novikov::t_power(Rat(1, 2)) + Novikov::t_power(Rat(1, 3));
    REQUIRE(s.terms().size() == 2);
    CHECK(s.terms()[0].first == Rat(1, 3));
    CHECK(s.terms()[1].first == Rat(1, 2));
}

TEST_CASE("product expansion with truncation") {
    Novikov a = nov("2*T^1/2 + 1*T^1");
    Novikov b = nov("3*T^1/2");
    Novikov p = (a * b).truncated(Rat(2));
    CHECK(p == nov("6*T^1 + 3*T^3/2"));
}

TEST_CASE("unit and annihilation by truncation") {
    Novikov x = nov("5 + 7*T^2/3");
    CHECK(x * Novikov::one() == x);
    Novikov y = (Novikov::t_power(Rat(3, 2)) * Novikov::t_power(Rat(3, 4))).truncated(Rat(2));
    CHECK(y.is_zero());
    CHECK(y.precision() == ExtRat::of(Rat(2)));
}

TEST_CASE("geometric series inverse") {
    Novikov a = nov("1 + -1*T^1");
    Novikov inv = a.inverse(ExtRat::of(Rat(3)));
    CHECK(inv == nov("1 + 1*T^1 + 1*T^2"));
    CHECK(inv.precision() == ExtRat::of(Rat(3)));
    // two-sided inverse to the stated precision
    CHECK((a * inv - Novikov::one()).truncated(Rat(3)).is_zero());
    CHECK((inv * a - Novikov::one()).truncated(Rat(3)).is_zero());
}

TEST_CASE("monomial inverses are exact") {
    Novikov t = Novikov::t_power(Rat(1));
    CHECK(t.inverse() == Novikov::t_power(Rat(-1)));
    CHECK(t.inverse().is_exact());
    CHECK(Novikov(Rat(2)).inverse() == Novikov(Rat(1, 2)));
}

TEST_CASE("inverse precision drops by twice the valuation") {
    Novikov a = (Novikov::t_power(Rat(1)) + Novikov::t_power(Rat(2))).truncated(Rat(5));
    Novikov inv = a.inverse();
    CHECK(inv.precision() == ExtRat::of(Rat(3)));
    CHECK((a * inv - Novikov::one()).val() >= ExtRat::of(Rat(3)));
}

TEST_CASE("valuation properties on random elements") {
    std::mt19937 rng(7);
    auto random_nov = [&rng]() {
        std::uniform_int_distribution<int> nterms(1, 4), num(-5, 5), den(1, 4);
        std::vector<Novikov::Term> ts;
        for (int i = 0; i < nterms(rng); ++i) {
            Rat e(num(rng), den(rng));
            Rat c(num(rng) == 0 ? 1 : num(rng), den(rng));
            ts.push_back({e, c});
        }
        return Novikov::from_terms(std::move(ts));
    };
    for (int trial = 0; trial < 200; ++trial) {
        Novikov a = random_nov(), b = random_nov();
        if (a.is_zero() || b.is_zero()) continue;
        CHECK((a * b).val() == a.val() + b.val());
        CHECK(!((a + b).val() < ExtRat::min(a.val(), b.val())));
    }
}

TEST_CASE("valuation rank: identity and zero") {
    NovikovMatrix id = NovikovMatrix::identity(3);
    auto r = valuation_rank(id, Rat(10));
    CHECK(r.rank == 3);
    for (const Rat& v : r.pivot_valuations) CHECK(v == 0);

    NovikovMatrix z(2, 3);
    CHECK(valuation_rank(z, Rat(10)).rank == 0);
}

TEST_CASE("valuation rank: dependent rows detected") {
    // [[T, 1], [T^2, T]] has determinant T*T - 1*T^2 = 0, so the rank is 1:
    // the second row is T times the first. Oracle: eliminate with the minimal-
    // valuation pivot (the 1 in position (0,1)); the second row becomes
    // (T^2 - T*T, T - T*1) = (0, 0).
    NovikovMatrix m(2, 2);
    m.at(0, 0) = Novikov::t_power(Rat(1));
    m.at(0, 1) = Novikov::one();
    m.at(1, 0) = Novikov::t_power(Rat(2));
    m.at(1, 1) = Novikov::t_power(Rat(1));
    CHECK((m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0)).is_zero());
    auto r = valuation_rank(m, Rat(3), nullptr, nullptr, true);
    CHECK(r.rank == 1);
    CHECK(r.pivot_valuations[0] == 0);
    REQUIRE(r.kernel.size() == 1);
    auto img = m.apply(r.kernel[0]);
    for (const auto& x : img) CHECK(!(x.val() < ExtRat::of(Rat(3))));
}

TEST_CASE("rank invariant under permutation and unit scaling") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coef(-3, 3), expnum(0, 4);
    for (int trial = 0; trial < 50; ++trial) {
        NovikovMatrix m(3, 4);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                int c = coef(rng);
                if (c != 0) m.at(i, j) = Novikov::monomial(Rat(expnum(rng), 2), Rat(c));
            }
        auto base = valuation_rank(m, Rat(10));

        NovikovMatrix perm(3, 4);  // swap rows 0,2 and columns 1,3
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                std::size_t pi = (i == 0) ? 2 : (i == 2 ? 0 : i);
                std::size_t pj = (j == 1) ? 3 : (j == 3 ? 1 : j);
                perm.at(pi, pj) = m.at(i, j);
            }
        CHECK(valuation_rank(perm, Rat(10)).rank == base.rank);

        NovikovMatrix scaled = m;  // multiply row 1 by a unit
        Novikov unit = nov("1 + 2*T^1/2");
        for (std::size_t j = 0; j < 4; ++j) scaled.at(1, j) = scaled.at(1, j) * unit;
        CHECK(valuation_rank(scaled, Rat(10)).rank == base.rank);
    }
}

TEST_CASE("serialization order for reports") {
    Novikov a = nov("1/2*T^-1 + 3 + -2*T^5/3");
    auto ts = a.terms();
    REQUIRE(ts.size() == 3);
    CHECK(ts[0].first == Rat(-1));
    CHECK(ts[2].second == Rat(-2));
}
