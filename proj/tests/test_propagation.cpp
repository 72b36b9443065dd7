#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mirrorcurve/propagation.hpp"
#include "test_util.hpp"

using namespace mc;
using mc::testutil::theta_graph;

namespace {
MobiusQ T0() { return VertexChart::standard_chart(Marked::Zero); }
MobiusQ T1() { return VertexChart::standard_chart(Marked::One); }
MobiusQ Tinf() { return VertexChart::standard_chart(Marked::Inf); }
}  // namespace

TEST_CASE("expansion of t_0^{-1} in t_1 is 1 - t_1") {
    auto s = expand_inverse_power(T0(), T1(), 1, 6);
    CHECK(s.at(0) == 1);
    CHECK(s.at(1) == -1);
    for (std::size_t i = 2; i <= 6; ++i) CHECK(s.at(i) == 0);
}

TEST_CASE("expansion of t_0^{-1} in t_inf is -(t + t^2 + ...)") {
    auto s = expand_inverse_power(T0(), Tinf(), 1, 6);
    CHECK(s.at(0) == 0);
    for (std::size_t i = 1; i <= 6; ++i) CHECK(s.at(i) == -1);
}

TEST_CASE("expansion of t_0^{-2} in t_1 is 1 - 2t + t^2") {
    auto s = expand_inverse_power(T0(), T1(), 2, 6);
    CHECK(s.at(0) == 1);
    CHECK(s.at(1) == -2);
    CHECK(s.at(2) == 1);
    CHECK(s.at(3) == 0);
}

TEST_CASE("closed forms match the stated values") {
    CHECK(closed_form_coefficient(Marked::Zero, Marked::One, 1, 1) == -1);
    CHECK(closed_form_coefficient(Marked::Zero, Marked::Inf, 1, 0) == 0);
    CHECK(closed_form_coefficient(Marked::One, Marked::Zero, 1, 0) == 0);
}

TEST_CASE("closed form equals direct expansion for all default chart pairs") {
    // all six ordered pairs, 1 <= k_in <= 12, 0 <= k_out <= 12, exactly
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            auto ti = VertexChart::standard_chart(Marked(i));
            auto tj = VertexChart::standard_chart(Marked(j));
            for (long k = 1; k <= 12; ++k) {
                auto s = expand_inverse_power(ti, tj, k, 12);
                for (long l = 0; l <= 12; ++l)
                    CHECK(s.at(std::size_t(l)) == closed_form_coefficient(Marked(i), Marked(j), k, l));
            }
        }
}

TEST_CASE("series multiplicativity: expansion(t^-a) * expansion(t^-(k-a)) = expansion(t^-k)") {
    for (long k = 2; k <= 6; ++k)
        for (long a = 1; a < k; ++a) {
            auto left = expand_inverse_power(T0(), T1(), a, 10) *
                        expand_inverse_power(T0(), T1(), k - a, 10);
            auto full = expand_inverse_power(T0(), T1(), k, 10);
            for (std::size_t i = 0; i <= 10; ++i) CHECK(left.at(i) == full.at(i));
        }
}

TEST_CASE("constant term of t_0^{-1} t_1^{-1}") {
    // symbolic oracle: t_0 t_1 = z * (z-1)/z = z - 1, so
    // t_0^{-1} t_1^{-1} = 1/(z-1) = t_1^{-1} - 1; the constant term is -1.
    CHECK(partial_fraction_constant(T0(), T1(), 1, 1) == -1);
}

TEST_CASE("constant term is symmetric") {
    for (long k1 = 1; k1 <= 4; ++k1)
        for (long k2 = 1; k2 <= 4; ++k2)
            CHECK(partial_fraction_constant(T0(), T1(), k1, k2) ==
                  partial_fraction_constant(T1(), T0(), k2, k1));
}

TEST_CASE("tripod at k3 = 0 forces K_{1,1}") {
    // LHS = C^{01}_{1,0} C^{1,inf}_{1,0} + C^{10}_{1,0} C^{0,inf}_{1,0} + K_{1,1}
    // RHS = C^{0,inf}_{1,0} C^{1,inf}_{1,0}
    Rat lhs_c = closed_form_coefficient(Marked::Zero, Marked::One, 1, 0) *
                    closed_form_coefficient(Marked::One, Marked::Inf, 1, 0) +
                closed_form_coefficient(Marked::One, Marked::Zero, 1, 0) *
                    closed_form_coefficient(Marked::Zero, Marked::Inf, 1, 0);
    Rat rhs = closed_form_coefficient(Marked::Zero, Marked::Inf, 1, 0) *
              closed_form_coefficient(Marked::One, Marked::Inf, 1, 0);
    Rat k11 = partial_fraction_constant(T0(), T1(), 1, 1);
    CHECK(lhs_c + k11 == rhs);
    CHECK(k11 == -1);
}

TEST_CASE("table values are integers for default charts") {
    auto g = theta_graph();
    auto charts = VertexChart::defaults(g);
    PropagationTable tab(g, charts, 0, 6, 6);
    const auto& inc = g.incident(0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            for (long k = 1; k <= 6; ++k)
                for (long l = 0; l <= 6; ++l) {
                    Rat c = tab.coefficient(inc[i], inc[j], k, l);
                    CHECK(c.get_den() == 1);
                }
            for (long k1 = 1; k1 <= 6; ++k1)
                for (long k2 = 1; k2 <= 6; ++k2) CHECK(tab.constant_term(inc[i], inc[j], k1, k2).get_den() == 1);
        }
}

TEST_CASE("constant term matches closed forms through the table") {
    auto g = theta_graph();
    auto charts = VertexChart::defaults(g);
    PropagationTable tab(g, charts, 0, 4, 8);
    const auto& inc = g.incident(0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            Marked mi = charts.marked_of(0, inc[i]);
            Marked mj = charts.marked_of(0, inc[j]);
            for (long k = 1; k <= 4; ++k)
                for (long l = 0; l <= 8; ++l)
                    CHECK(tab.coefficient(inc[i], inc[j], k, l) == closed_form_coefficient(mi, mj, k, l));
        }
}

TEST_CASE("backwards identity exercises the K branch at a = k2") {
    auto g = theta_graph();
    auto charts = VertexChart::defaults(g);
    PropagationTable tab(g, charts, 0, 8, 8);
    const auto& inc = g.incident(0);
    long k1 = 2, k2 = 3, a = 3;
    Rat lhs(0);
    for (long b = 0; b < k1; ++b)
        lhs += tab.coefficient(inc[1], inc[0], a, b) * tab.coefficient(inc[0], inc[1], k1 - b, k2 - a);
    lhs += tab.constant_term(inc[0], inc[1], k1, k2);
    CHECK(lhs == tab.coefficient(inc[0], inc[1], k1, k2));
}

TEST_CASE("all four identities pass at k_bound 5 on theta and K4 with shuffled charts") {
    auto g = theta_graph(Rat(1), Rat(2), Rat(3, 2));
    auto charts = VertexChart::defaults(g);
    charts.set_marked(g, 1, g.edge_index("e2"), Marked::Zero);  // non-default assignment
    auto rep = check_propagation_identities(g, charts, 5);
    CHECK(rep.all_pass());
    CHECK(rep.checked > 0);

    auto k4 = mc::testutil::k4_graph();
    auto ch4 = VertexChart::defaults(k4);
    auto rep4 = check_propagation_identities(k4, ch4, 4);
    CHECK(rep4.all_pass());
}
