#include <doctest.h>

#include "atomlab/constructions.hpp"
#include "atomlab/cyl_core.hpp"
#include "atomlab/error.hpp"
#include "atomlab/graphs.hpp"

#include "game_family.hpp"
#include "oracles.hpp"

#include <set>

using namespace atomlab;

namespace
{
    auto one_atom() -> RaAtomStructure { return RaAtomStructure::from_triples({"1'"}, {0}, {0}, {{0, 0, 0}}); }
}

TEST_CASE("basic matrices of the one-atom structure")
{
    auto mats = basic_matrices(one_atom(), 3);
    REQUIRE(mats.size() == 1);
    CHECK(mats[0].m == std::vector<AtomId>(9, 0));
    CHECK(is_cylindric_basis(mats, 3).holds);
}

TEST_CASE("basic matrix invariants")
{
    auto s = monk_ra(complete_graph(2), 3);
    BasicMatrix bad{3, {0, 1, 2, 4, 0, 3, 2, 3, 0}};  // m_01 = (0,0) but m_10 = (1,0)
    CHECK(basic_matrix_violation(s, bad).has_value());
    BasicMatrix loop{3, {1, 1, 1, 1, 0, 1, 1, 1, 0}};
    CHECK(basic_matrix_violation(s, loop).has_value());

    // triangle check agrees with compose_atoms on every 3x3 candidate
    auto mats = basic_matrices(s, 3);
    std::set<BasicMatrix> in(mats.begin(), mats.end());
    const auto A = static_cast<AtomId>(s.size());
    std::size_t expected = 0;
    for (AtomId a = 1; a < A; ++a)
        for (AtomId b = 1; b < A; ++b)
            for (AtomId c = 1; c < A; ++c) {
                BasicMatrix M{3, {0, a, c, a, 0, b, c, b, 0}};
                bool want = compose_atoms(s, a, b).contains(c) && compose_atoms(s, c, b).contains(a) &&
                            compose_atoms(s, a, c).contains(b);
                CHECK(in.count(M) == static_cast<std::size_t>(want));
                CHECK(!basic_matrix_violation(s, M).has_value() == want);
                expected += want;
            }
    // the rest have an identity off the diagonal
    CHECK(mats.size() >= expected);
    CHECK_THROWS_AS(basic_matrices(monk_ra(complete_graph(3), 3), 3, 10), BudgetExceeded);
}

TEST_CASE("monk K3 matrices form a cylindric basis")
{
    auto s = monk_ra(complete_graph(3), 3);
    auto mats = basic_matrices(s, 3);
    CHECK(mats.size() == 748);
    CHECK(std::is_sorted(mats.begin(), mats.end()));
    CHECK(basic_matrices(s, 3, 4'000'000, Exec::serial) == mats);
    auto fast = is_cylindric_basis(mats, 3);
    CHECK(fast.holds);
    BasisOptions literal;
    literal.relation = agree_off;
    CHECK(is_cylindric_basis(mats, 3, literal).holds);
    BasisOptions poly;
    poly.require_transpositions = true;
    CHECK(is_cylindric_basis(mats, 3, poly).holds);
}

TEST_CASE("deleting a required amalgam breaks the basis")
{
    auto mats = basic_matrices(monk_ra(complete_graph(3), 3), 3);
    auto required = oracle::required_amalgams(mats);
    CHECK_FALSE(required.empty());
    std::size_t flipped = 0;
    for (std::size_t l = 0; l < mats.size(); ++l) {
        auto m2 = mats;
        m2.erase(m2.begin() + static_cast<std::ptrdiff_t>(l));
        auto r = is_cylindric_basis(m2, 3);
        CHECK(r.holds == !required.count(l));
        if (r.holds)
            continue;
        ++flipped;
        CHECK(oracle::witness_holds(m2, r));
    }
    CHECK(flipped == required.size());
}

TEST_CASE("singleton and transposition failures")
{
    BasicMatrix id{3, std::vector<AtomId>(9, 0)};
    CHECK(is_cylindric_basis({id}, 3).holds);

    auto s = monk_ra(complete_graph(2), 3);
    auto mats = basic_matrices(s, 3);
    BasisOptions poly;
    poly.require_transpositions = true;
    // drop one matrix without dropping its images under node swaps
    auto m2 = mats;
    m2.erase(m2.begin() + 1);
    auto r = is_cylindric_basis(m2, 3, poly);
    CHECK_FALSE(r.holds);
}

TEST_CASE("complex CA operations")
{
    for (const auto & f : {family::set_frame(2), rainbow_ca_atoms(one_white_palette()).structure,
                           matrix_structure(monk_ra(complete_graph(2), 3), basic_matrices(monk_ra(complete_graph(2), 3), 3))}) {
        auto C = complex_ca(f);
        const int n = f.dim();
        for (int i = 0; i < n; ++i) {
            CHECK(C.cyl(i, C.bottom()).empty());
            CHECK(C.diag(i, i) == C.top());
        }
        // closure operator, checked over every subset when small and over atoms otherwise
        const std::size_t A = f.size();
        std::vector<AtomSet> sets;
        if (A <= 10) {
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << A); ++m) {
                AtomSet x(A);
                for (std::size_t a = 0; a < A; ++a)
                    if ((m >> a) & 1U)
                        x.insert(static_cast<AtomId>(a));
                sets.push_back(x);
            }
        }
        else {
            for (std::size_t a = 0; a < A; ++a)
                sets.push_back(C.atom(static_cast<AtomId>(a)));
        }
        for (const auto & x : sets)
            for (int i = 0; i < n; ++i) {
                auto c = C.cyl(i, x);
                CHECK((c & x) == x);
                CHECK(C.cyl(i, c) == c);
            }
        for (int i = 0; i < n; ++i)
            for (std::size_t a = 0; a < std::min<std::size_t>(A, 10); ++a)
                for (std::size_t b = 0; b < std::min<std::size_t>(A, 10); ++b) {
                    auto x = C.atom(static_cast<AtomId>(a));
                    auto y = x | C.atom(static_cast<AtomId>(b));
                    CHECK((C.cyl(i, x) & C.cyl(i, y)) == C.cyl(i, x));  // monotone
                }
        CHECK(ca_axiom_check(f, Signature::CA).ok());
    }
    CHECK_THROWS_AS(complex_ca(family::set_frame(3), 4), BudgetExceeded);
}

TEST_CASE("substitutions on the set frame")
{
    auto f = family::set_frame(2);
    auto C = complex_ca(f);
    // atom (x,y,z) has id 4x + 2y + z
    CHECK(C.swap(0, 1, C.atom(1)) == C.atom(1));
    CHECK(C.swap(0, 2, C.atom(1)) == C.atom(4));
    CHECK(C.swap(0, 2, C.swap(0, 2, C.atom(6))) == C.atom(6));
    for (const auto sig : {Signature::Sc, Signature::PA, Signature::PEA}) {
        auto r = ca_axiom_check(f, sig);
        CHECK(r.ok());
        CHECK(r.commutative());
    }
    CHECK(parse_signature("PEA") == Signature::PEA);
    CHECK(signature_name(Signature::Sc) == "Sc");
    CHECK_THROWS_AS(parse_signature("QEA"), UsageError);
}
