#include <doctest.h>

#include "atomlab/cyl_core.hpp"
#include "atomlab/error.hpp"

#include <set>

using namespace atomlab;

namespace
{
    auto g0(int t) -> Colour { return {ColourKind::green0, t, 0}; }
    auto g(int j) -> Colour { return {ColourKind::green, j, 0}; }
    auto w(int i) -> Colour { return {ColourKind::white, i, 0}; }
    auto r(int k, int l) -> Colour { return {ColourKind::red, k, l}; }

    // base 0,1 and apex 2, tint t; yellow on the base with shade mask
    auto cone_graph(const Palette & p, int t, std::uint64_t mask) -> ColouredGraph
    {
        ColouredGraph G(3);
        G.set(0, 1, w(0));
        G.set(0, 2, g0(t));
        G.set(1, 2, g(1));
        G.yellow[{0, 1}] = mask;
        (void)p;
        return G;
    }
}

TEST_CASE("colour names round-trip")
{
    for (auto c : {g0(0), g0(-3), g(1), w(0), w(1), r(0, 2), Colour{ColourKind::shade_red, 0, 0}})
        CHECK(Colour::parse(c.name()) == c);
    CHECK(r(1, 2).reversed() == r(2, 1));
    CHECK_THROWS_AS(Colour::parse("blue"), StructuralError);
}

TEST_CASE("one-white palette atoms")
{
    auto rc = rainbow_ca_atoms(one_white_palette());
    // one atom per restricted-growth surjection 3 -> k nodes, all edges white
    CHECK(rc.structure.size() == 5);
    for (std::size_t a = 0; a < rc.graphs.size(); ++a) {
        const auto & G = rc.graphs[a];
        for (int x = 0; x < G.nodes; ++x)
            for (int y = 0; y < G.nodes; ++y)
                if (x != y)
                    CHECK(*G.label(x, y) == w(0));
    }
    std::set<std::vector<int>> pats(rc.surjection.begin(), rc.surjection.end());
    CHECK(pats.size() == 5);
}

TEST_CASE("rainbow frame soundness")
{
    for (auto p : {one_white_palette(), rainbow_palette(3, 2, 2), rainbow_palette(3, 3, 2)}) {
        auto rc = rainbow_ca_atoms(p);
        const auto & f = rc.structure;
        const auto A = static_cast<AtomId>(f.size());
        REQUIRE(f.has_transpositions());
        for (AtomId a = 0; a < A; ++a) {
            for (int i = 0; i < 3; ++i)
                CHECK(f.same(i, a, a));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(f.transpose(i, j, f.transpose(i, j, a)) == a);
            CHECK(f.diagonal(0, 1).contains(a) == (rc.surjection[a][0] == rc.surjection[a][1]));
            CHECK(coloured_graph_check(rc.graphs[a], p).empty());
        }
        CHECK(ca_axiom_check(f, Signature::CA).ok());
    }
    CHECK_THROWS_AS(rainbow_ca_atoms(rainbow_palette(3, 3, 3), 10), BudgetExceeded);
}

TEST_CASE("forbidden triples")
{
    // g0^-2 and g0^-1 meet at node 0; red from 1 to 2 must follow the tint order
    ColouredGraph G(3);
    G.set(0, 1, g0(-2));
    G.set(0, 2, g0(-1));
    G.set(1, 2, r(1, 2));
    CHECK_FALSE(forbidden_triangle(G, 0, 1, 2));
    G.set(1, 2, r(2, 1));
    CHECK(forbidden_triangle(G, 0, 1, 2));
    G.set(1, 2, g(1));
    CHECK(forbidden_triangle(G, 0, 1, 2));
    G.set(1, 2, w(0));
    CHECK(forbidden_triangle(G, 0, 1, 2));

    ColouredGraph H(3);
    H.set(0, 1, g(1));
    H.set(0, 2, g(1));
    H.set(1, 2, w(1));
    CHECK(forbidden_triangle(H, 0, 1, 2));
    H.set(1, 2, w(0));
    CHECK_FALSE(forbidden_triangle(H, 0, 1, 2));

    ColouredGraph R(3);
    R.set(0, 1, r(0, 1));
    R.set(1, 2, r(1, 2));
    R.set(0, 2, r(0, 2));
    CHECK_FALSE(forbidden_triangle(R, 0, 1, 2));
    R.set(0, 2, r(0, 1));
    CHECK(forbidden_triangle(R, 0, 1, 2));
}

TEST_CASE("cones")
{
    auto p = rainbow_palette(3, 2, 2);
    ColouredGraph none(3);
    none.set(0, 1, w(0));
    none.set(0, 2, w(0));
    none.set(1, 2, r(0, 1));
    CHECK(find_cones(none, 3).empty());

    const std::uint64_t all = (1U << p.tints.size()) - 1;
    auto c = cone_graph(p, 0, all);
    auto hits = find_cones(c, 3);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0] == Cone{{0, 1}, 2, 0});
    CHECK(coloured_graph_check(c, p).empty());

    auto bad = cone_graph(p, 0, all & ~(std::uint64_t{1} << p.tint_index(0)));
    auto vs = coloured_graph_check(bad, p);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].law == "cone");

    ColouredGraph two(4);
    two.set(0, 1, w(0));
    two.set(0, 2, g0(0));
    two.set(1, 2, g(1));
    two.set(0, 3, g0(-1));
    two.set(1, 3, g(1));
    two.set(2, 3, r(1, 0));
    auto h2 = find_cones(two, 3);
    REQUIRE(h2.size() == 2);
    CHECK(h2[0].tint == 0);
    CHECK(h2[1].tint == -1);

    ColouredGraph alien(2);
    alien.set(0, 1, r(7, 8));
    CHECK_THROWS_AS(coloured_graph_check(alien, p), StructuralError);
}

TEST_CASE("palette documents")
{
    auto p = rainbow_palette(3, 3, 2);
    CHECK(p.tints == std::vector<int>{-2, -1, 0});
    auto q = Palette::from_json(p.to_json());
    CHECK(q.colours() == p.colours());
    ColouredGraph G(3);
    G.set(0, 1, w(0));
    G.set(0, 2, g0(-1));
    G.set(1, 2, g(1));
    G.yellow[{0, 1}] = 3;
    CHECK(ColouredGraph::from_json(G.to_json(p), p) == G);
}
