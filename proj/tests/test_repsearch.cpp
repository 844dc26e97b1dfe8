#include <doctest.h>

#include "atomlab/constructions.hpp"
#include "atomlab/cyl_core.hpp"
#include "atomlab/error.hpp"
#include "atomlab/games.hpp"
#include "atomlab/graphs.hpp"
#include "atomlab/repsearch.hpp"

#include "game_family.hpp"

using namespace atomlab;

namespace
{
    auto one_atom() -> RaAtomStructure { return RaAtomStructure::from_triples({"1'"}, {0}, {0}, {{0, 0, 0}}); }

    auto pair_atoms() -> RaAtomStructure
    {
        return RaAtomStructure::from_triples({"1'", "a"}, {0}, {0, 1},
                                             {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1}});
    }

    // Every edge relabelled to every other atom, converse kept in step.
    auto edge_mutations(const RaAtomStructure & s, const RaRepresentation & r) -> std::vector<RaRepresentation>
    {
        std::vector<RaRepresentation> out;
        for (int x = 0; x < r.base; ++x)
            for (int y = x; y < r.base; ++y)
                for (AtomId b = 0; b < static_cast<AtomId>(s.size()); ++b) {
                    if (b == r.at(x, y))
                        continue;
                    auto m = r;
                    m.label[x * r.base + y] = b;
                    m.label[y * r.base + x] = s.converse(b);
                    if (x == y && s.converse(b) != b)
                        continue;
                    out.push_back(m);
                }
        return out;
    }
}

TEST_CASE("one-atom structure: the single loop")
{
    auto s = one_atom();
    auto r = find_square_representation(s);
    REQUIRE(r.rep.has_value());
    CHECK(r.rep->base == 1);
    CHECK(r.rep->label == std::vector<AtomId>{0});
    CHECK(verify_representation(s, *r.rep).ok);
    CHECK(r.refusal.empty());
}

TEST_CASE("{1', a} on base 3")
{
    auto s = pair_atoms();
    auto r = find_square_representation(s);
    REQUIRE(r.rep.has_value());
    CHECK(r.rep->base == 3);
    CHECK(r.exhausted_up_to == 2);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            CHECK(r.rep->at(x, y) == (x == y ? 0 : 1));
    CHECK(verify_representation(s, *r.rep).ok);

    auto muts = edge_mutations(s, *r.rep);
    CHECK(muts.size() == 6);
    for (const auto & m : muts) {
        auto c = verify_representation(s, m);
        CHECK_FALSE(c.ok);
        CHECK_FALSE(c.violation.empty());
    }
    // one-sided flip breaks the converse law
    auto flip = *r.rep;
    flip.label[1] = 0;
    auto c = verify_representation(s, flip);
    CHECK_FALSE(c.ok);
    CHECK(c.witness.size() >= 2);
}

TEST_CASE("monk on one vertex")
{
    // two colours: a 2-colouring of K5 without monochromatic triangles exists, not of K6
    auto m2 = monk_ra(SimpleGraph(1), 2);
    RepSearchOptions o;
    o.max_base = 6;
    auto r = find_square_representation(m2, o);
    REQUIRE(r.rep.has_value());
    CHECK(r.rep->base == 5);
    CHECK(verify_representation(m2, *r.rep).ok);
    // no monochromatic triangle anywhere
    for (int x = 0; x < 5; ++x)
        for (int y = x + 1; y < 5; ++y)
            for (int z = y + 1; z < 5; ++z)
                CHECK_FALSE((r.rep->at(x, y) == r.rep->at(y, z) && r.rep->at(y, z) == r.rep->at(x, z)));

    // a flipped edge that closes a monochromatic triangle is reported with it
    for (const auto & m : edge_mutations(m2, *r.rep)) {
        auto c = verify_representation(m2, m);
        if (c.ok || c.violation.find("triangle") == std::string::npos)
            continue;
        REQUIRE(c.witness.size() == 3);
        auto [x, y, z] = std::tuple{c.witness[0], c.witness[1], c.witness[2]};
        CHECK_FALSE(m2.consistent(m.at(x, y), m.at(y, z), m.at(x, z)));
    }

    auto m3 = monk_ra(SimpleGraph(1), 3);
    o.max_base = 5;
    auto r3 = find_square_representation(m3, o);
    CHECK_FALSE(r3.rep.has_value());
    CHECK(r3.exhausted_up_to == 5);
    CHECK_FALSE(r3.budget_hit);
}

TEST_CASE("verify rejects malformed representations")
{
    auto s = pair_atoms();
    RaRepresentation wrong{3, {0, 1, 1}};
    CHECK_THROWS_AS(verify_representation(s, wrong), StructuralError);
    RaRepresentation unused{1, {0}};
    CHECK_FALSE(verify_representation(s, unused).ok);
    RaRepresentation loop{2, {1, 1, 1, 0}};
    CHECK_FALSE(verify_representation(s, loop).ok);
}

TEST_CASE("padding")
{
    auto s = pair_atoms();
    auto r = *find_square_representation(s).rep;
    for (int p = 0; p < 3; ++p) {
        auto big = pad_representation(s, r, p);
        REQUIRE(big.has_value());
        CHECK(big->base == 4);
        CHECK(verify_representation(s, *big).ok);
    }
    // a duplicated point needs a non-identity atom between the copies
    auto one = one_atom();
    CHECK_FALSE(pad_representation(one, *find_square_representation(one).rep, 0).has_value());
}

TEST_CASE("serial and parallel searches agree")
{
    for (const auto & s : {one_atom(), pair_atoms(), monk_ra(SimpleGraph(1), 2), monk_ra(complete_graph(2), 2)}) {
        RepSearchOptions a, b;
        a.max_base = b.max_base = 6;
        b.exec = Exec::parallel;
        auto ra = find_square_representation(s, a);
        auto rb = find_square_representation(s, b);
        CHECK(ra.rep == rb.rep);
        if (ra.rep)
            CHECK(verify_representation(s, *ra.rep).ok);
    }
}

TEST_CASE("CA representations")
{
    auto f = family::set_frame(2);
    RepSearchOptions o;
    o.max_base = 4;
    auto r = find_ca_representation(f, o);
    REQUIRE(r.rep.has_value());
    CHECK(r.rep->base == 2);
    CHECK(verify_representation(f, *r.rep).ok);
    // each single tuple relabelled breaks it
    for (std::size_t t = 0; t < r.rep->label.size(); ++t)
        for (AtomId b = 0; b < static_cast<AtomId>(f.size()); ++b) {
            if (b == r.rep->label[t])
                continue;
            auto m = *r.rep;
            m.label[t] = b;
            CHECK_FALSE(verify_representation(f, m).ok);
        }

    // matrices over {1', a}
    auto two = pair_atoms();
    auto mf = matrix_structure(two, basic_matrices(two, 3));
    auto rm = find_ca_representation(mf, o);
    REQUIRE(rm.rep.has_value());
    CHECK(rm.rep->base == 3);
    CHECK(verify_representation(mf, *rm.rep).ok);

    CaRepresentation bad{3, 2, {0, 1}};
    CHECK_THROWS_AS(verify_representation(f, bad), StructuralError);
}

TEST_CASE("refusal on a broken diagonal")
{
    auto d = family::set_frame(2).data();
    d.diag[0][1] = AtomSet(d.names.size());
    auto f = CaAtomStructure::from_data(d);
    auto r = find_ca_representation(f);
    CHECK_FALSE(r.rep.has_value());
    CHECK_FALSE(r.refusal.empty());
    CHECK(r.nodes == 0);
    CHECK(r.to_json().at("refusal") == r.refusal);
}

TEST_CASE("no-rep results are cached")
{
    auto f = family::seeded_member(2).frame;
    RepSearchOptions o;
    o.max_base = 3;
    auto first = find_ca_representation(f, o);
    auto second = find_ca_representation(f, o);
    CHECK_FALSE(second.rep.has_value());
    CHECK(second.exhausted_up_to == first.exhausted_up_to);
    CHECK(second.nodes == 0);
    CHECK(structure_hash(f) == structure_hash(family::seeded_member(2).frame));
    CHECK(structure_hash(f) != structure_hash(family::set_frame(2)));
}

TEST_CASE("a CA representation means exists wins G")
{
    RepSearchOptions o;
    o.max_base = 4;
    std::size_t found = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto f = family::seeded_member(seed).frame;
        auto r = find_ca_representation(f, o);
        if (!r.rep)
            continue;
        ++found;
        CHECK(verify_representation(f, *r.rep).ok);
        for (int k = 1; k <= 3; ++k) {
            GameSpec g;
            g.rounds = k;
            CHECK(solve_game(f, g).winner == Player::exists);
        }
    }
    CHECK(found >= 5);
}

TEST_CASE("representation documents")
{
    auto r = *find_square_representation(pair_atoms()).rep;
    CHECK(RaRepresentation::from_json(r.to_json()) == r);
    auto c = *find_ca_representation(family::set_frame(2)).rep;
    CHECK(CaRepresentation::from_json(c.to_json()) == c);
    CHECK_THROWS_AS(RaRepresentation::from_json(c.to_json()), StructuralError);
}
