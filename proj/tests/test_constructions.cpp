#include <doctest.h>

#include "atomlab/constructions.hpp"
#include "atomlab/error.hpp"
#include "atomlab/graphs.hpp"

using namespace atomlab;

namespace
{
    auto id(const RaAtomStructure & s, const std::string & name) -> AtomId
    {
        auto a = s.find(name);
        REQUIRE(a.has_value());
        return *a;
    }

    auto order(OrderKind k, int t) -> LinearOrderSpec
    {
        LinearOrderSpec o;
        o.kind = k;
        o.t = t;
        return o;
    }
}

TEST_CASE("monk atom counts and clauses")
{
    auto m = monk_ra(complete_graph(3), 3);
    CHECK(m.size() == 10);
    for (AtomId a = 0; a < 10; ++a)
        CHECK(m.converse(a) == a);
    // (vertex, colour) = 1 + vertex * 3 + colour
    CHECK(m.consistent(1, 5, 9));
    auto single = monk_ra(SimpleGraph(1), 3);
    CHECK_FALSE(single.consistent(1, 1, 1));
    CHECK_THROWS_AS(monk_ra(complete_graph(2), 1), UsageError);
}

TEST_CASE("monk: no monochromatic triple over an independent set")
{
    for (const auto & g : {cycle_graph(5), disjoint_cliques({3, 3}), band_graph(6, 2)}) {
        const int C = 3;
        auto m = monk_ra(g, C);
        const int V = g.vertices();
        for (int x = 0; x < V; ++x)
            for (int y = 0; y < V; ++y)
                for (int z = 0; z < V; ++z) {
                    bool independent = !g.adjacent(x, y) && !g.adjacent(y, z) && !g.adjacent(x, z);
                    for (int c = 0; c < C; ++c) {
                        bool cons = m.consistent(1 + x * C + c, 1 + y * C + c, 1 + z * C + c);
                        CHECK(cons == !independent);
                    }
                }
        CHECK(validate_atom_structure(m).ok());
    }
}

TEST_CASE("rainbow atom count and red match rule")
{
    auto r = rainbow_ra(order(OrderKind::reversed_naturals, 3), order(OrderKind::naturals, 2), 2);
    CHECK(r.size() == 11);
    CHECK(validate_atom_structure(r).ok());

    // three red indices so that r_12 and r_02 exist
    auto s = rainbow_ra(order(OrderKind::reversed_naturals, 2), order(OrderKind::naturals, 3), 1);
    CHECK(s.consistent(id(s, "r0_01"), id(s, "r0_12"), id(s, "r0_02")));
    CHECK_FALSE(s.consistent(id(s, "r0_01"), id(s, "r0_12"), id(s, "r0_01")));
}

TEST_CASE("rainbow green rules")
{
    auto s = rainbow_ra(order(OrderKind::reversed_naturals, 3), order(OrderKind::naturals, 3), 1);
    // all green is forbidden
    CHECK_FALSE(s.consistent(id(s, "g0"), id(s, "g1"), id(s, "g2")));
    // two greens and white: only distinct greens
    CHECK(s.consistent(id(s, "g0"), id(s, "g1"), id(s, "w")));
    CHECK_FALSE(s.consistent(id(s, "g1"), id(s, "g1"), id(s, "w")));
    // greens 0 > 1 in the reversed order; the red pair must reverse too
    CHECK(s.consistent(id(s, "g0"), id(s, "g1"), id(s, "r0_01")));
    CHECK_FALSE(s.consistent(id(s, "g0"), id(s, "g0"), id(s, "r0_01")));
}

TEST_CASE("evenly distributed")
{
    CHECK(evenly_distributed(0, 1, 2));
    CHECK_FALSE(evenly_distributed(0, 1, 3));
    CHECK(evenly_distributed(2, 2, 2));
    CHECK(evenly_distributed(4, 0, 2));
}

TEST_CASE("safe")
{
    auto m = monk_ra(complete_graph(3), 3);
    CHECK(safe({}, {1, 2}, {3}, m));
    // one colour over a single vertex: ((0,0),(0,0),(0,0)) needs an edge inside {0}
    CHECK_FALSE(safe({1}, {1}, {1}, m));
    CHECK(safe({4}, {1}, {7}, m) == m.consistent(1, 7, 4));
    CHECK(safe({4}, {1}, {7}, m));
}

TEST_CASE("every builder validates")
{
    for (const auto & g : {complete_graph(2), complete_graph(3), cycle_graph(5), disjoint_cliques({3, 3})})
        for (int c : {3, 4})
            CHECK(validate_atom_structure(monk_ra(g, c)).ok());
    for (int G = 1; G <= 4; ++G)
        for (int R = 1; R <= 3; ++R)
            for (int t = 1; t <= 2; ++t)
                CHECK(validate_atom_structure(rainbow_ra(order(OrderKind::reversed_naturals, G),
                                                         order(OrderKind::naturals, R), t))
                          .ok());
}

TEST_CASE("rule documents rebuild the structure")
{
    auto m = monk_ra(cycle_graph(5), 3);
    auto m2 = structure_from_rule(m.rule_doc());
    CHECK(m2.triples() == m.triples());
    auto r = rainbow_ra(order(OrderKind::reversed_naturals, 2), order(OrderKind::naturals, 2), 2);
    CHECK(structure_from_rule(r.rule_doc()).triples() == r.triples());
    CHECK_THROWS_AS(structure_from_rule({{"rule", "nope"}, {"params", nlohmann::json::object()}}), StructuralError);
}
