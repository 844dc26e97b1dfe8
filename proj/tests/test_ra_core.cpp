#include <doctest.h>

#include <algorithm>

#include "atomlab/constructions.hpp"
#include "atomlab/error.hpp"
#include "atomlab/graphs.hpp"
#include "atomlab/ra_core.hpp"

using namespace atomlab;

namespace
{
    auto one_atom() -> RaAtomStructure { return RaAtomStructure::from_triples({"1'"}, {0}, {0}, {{0, 0, 0}}); }

    // Plain triple scan, shares nothing with the library's kernels.
    auto scan_compose(const RaAtomStructure & s, const AtomSet & x, const AtomSet & y) -> AtomSet
    {
        AtomSet out(s.size());
        for (AtomId a : x.to_vector())
            for (AtomId b : y.to_vector())
                for (AtomId c = 0; c < static_cast<AtomId>(s.size()); ++c)
                    if (s.consistent(a, b, c))
                        out.insert(c);
        return out;
    }

    auto planted_k2() -> RaAtomStructure
    {
        auto m = monk_ra(complete_graph(2), 3);
        auto ts = m.triples();
        // (1', (0,0), (1,0)) breaks the identity law
        ts.push_back({0, 1, 4});
        std::sort(ts.begin(), ts.end());
        return RaAtomStructure::from_triples(m.names(), m.identities(), m.converse_map(), ts);
    }
}

TEST_CASE("one-atom structure validates")
{
    auto r = validate_atom_structure(one_atom());
    CHECK(r.ok());
    CHECK(r.associative());
}

TEST_CASE("monk K3 with 3 colours validates over all triples")
{
    auto m = monk_ra(complete_graph(3), 3);
    CHECK(m.size() == 10);
    for (auto exec : {Exec::serial, Exec::parallel}) {
        ValidateOptions o;
        o.exec = exec;
        CHECK(validate_atom_structure(m, o).ok());
    }
}

TEST_CASE("planted identity defect is reported with its witness")
{
    auto s = planted_k2();
    for (auto exec : {Exec::serial, Exec::parallel}) {
        ValidateOptions o;
        o.exec = exec;
        auto r = validate_atom_structure(s, o);
        REQUIRE_FALSE(r.ok());
        bool seen = false;
        for (const auto & v : r.violations)
            seen = seen || (v.law == "identity" && v.witness == std::vector<AtomId>{0, 1, 4});
        CHECK(seen);
    }
    ValidateOptions a, b;
    a.exec = Exec::serial;
    b.exec = Exec::parallel;
    CHECK(validate_atom_structure(s, a).violations == validate_atom_structure(s, b).violations);
}

TEST_CASE("malformed converse is a structural error")
{
    CHECK_THROWS_AS(RaAtomStructure::from_triples({"1'", "a"}, {0}, {0}, {}), StructuralError);
    CHECK_THROWS_AS(RaAtomStructure::from_triples({"1'", "a"}, {0}, {0, 5}, {}), StructuralError);
}

TEST_CASE("compose_atoms examples")
{
    auto m = monk_ra(complete_graph(2), 3);
    // (u,c) = 1 + c, (v,c) = 4 + c
    CHECK(compose_atoms(m, 0, 2).to_vector() == std::vector<AtomId>{2});
    CHECK(compose_atoms(m, 1, 1).to_vector() == std::vector<AtomId>{0, 2, 3, 4, 5, 6});
    auto single = monk_ra(SimpleGraph(1), 3);
    CHECK_FALSE(single.consistent(1, 1, 1));
    CHECK_THROWS_AS(compose_atoms(m, 0, 99), StructuralError);
}

TEST_CASE("cycle law at operation level")
{
    for (const auto & s : {monk_ra(complete_graph(3), 3), monk_ra(cycle_graph(5), 2), one_atom()}) {
        const auto A = static_cast<AtomId>(s.size());
        for (AtomId a = 0; a < A; ++a)
            for (AtomId b = 0; b < A; ++b)
                for (AtomId c = 0; c < A; ++c)
                    CHECK(compose_atoms(s, a, b).contains(c) == compose_atoms(s, s.converse(a), c).contains(b));
    }
}

TEST_CASE("complex algebra")
{
    auto one = complex_algebra(one_atom());
    CHECK(one.compose(one.identity(), one.identity()) == one.identity());

    auto m = monk_ra(complete_graph(3), 3);
    auto C = complex_algebra(m);
    CHECK(C.compose(C.top(), C.top()) == C.top());
    CHECK(C.compose(C.atom(3), C.bottom()).empty());
    for (AtomId a = 0; a < 10; ++a)
        for (AtomId b = 0; b < 10; ++b)
            CHECK(C.compose(C.atom(a), C.atom(b)) == scan_compose(m, C.atom(a), C.atom(b)));
    // complete additivity on a few unions
    auto x = C.atom(1) | C.atom(5);
    auto y = C.atom(2) | C.atom(7) | C.atom(0);
    CHECK(C.compose(x, y) == scan_compose(m, x, y));
    CHECK(C.carrier_size() == 1024);
}

TEST_CASE("complex algebra budget")
{
    auto big = monk_ra(complete_graph(6), 3);
    CHECK_THROWS_AS(complex_algebra(big), BudgetExceeded);
    ComplexOptions o;
    o.lazy = true;
    auto C = complex_algebra(big, o);
    CHECK_FALSE(C.explicit_carrier());
    CHECK(C.compose(C.identity(), C.atom(4)) == C.atom(4));
}

TEST_CASE("validation is idempotent")
{
    auto s = planted_k2();
    auto r1 = validate_atom_structure(s);
    auto r2 = validate_atom_structure(s);
    CHECK(r1.violations == r2.violations);
    CHECK(r1.associativity_failures == r2.associativity_failures);
}
