#include <doctest.h>

#include "atomlab/cyl_core.hpp"
#include "atomlab/error.hpp"
#include "atomlab/hirsch.hpp"

using namespace atomlab;

namespace
{
    // Recursion oracle, written out separately from the library.
    auto kappa(std::uint64_t x, std::uint64_t y) -> std::uint64_t
    {
        std::uint64_t k = 0;
        for (std::uint64_t i = 0; i < y; ++i)
            k = 1 + x * k;
        return k;
    }
}

TEST_CASE("kappa, psi and Bin sizes")
{
    CHECK(hirsch_kappa(2, 2) == 3);
    for (std::uint64_t x = 0; x < 5; ++x)
        for (std::uint64_t y = 0; y < 6; ++y)
            CHECK(hirsch_kappa(x, y) == kappa(x, y));
    CHECK(hirsch_psi(3, 1) == 4);
    CHECK(hirsch_psi(4, 1) == kappa(3, 3) + 1);
    for (std::uint64_t n = 2; n < 6; ++n)
        CHECK(hirsch_psi(n, 0) == 1);
    CHECK(hirsch_bin_size(3, 1) == 9);
    CHECK(hirsch_bin_size(3, 0) == 1);
    CHECK_THROWS_AS(hirsch_kappa(1000, 1000), Error);
    CHECK_THROWS_AS(HirschBin(6, 3), BudgetExceeded);
}

TEST_CASE("Bin naming")
{
    HirschBin b(3, 1);
    CHECK(b.size() == 9);
    CHECK(b.name(0) == "Id");
    CHECK(b.name(b.encode(1, 0, 2)) == "a^2(1,0)");
    CHECK(b.find("a^3(0,0)") == b.encode(0, 0, 3));
    CHECK_FALSE(b.find("a^4(0,0)").has_value());
}

TEST_CASE("C(3,3,0) is the one-atom algebra")
{
    auto a = hirsch_algebra({3, 3, 0});
    CHECK(a.size() == 1);
    CHECK(a.matrix(0) == std::vector<int>(9, 0));
    auto C = complex_ca(a.structure());
    CHECK(C.top().count() == 1);
    CHECK(C.bottom().empty());
}

TEST_CASE("F(m,n,r) membership and ordering")
{
    auto a = hirsch_algebra({3, 3, 1});
    CHECK(a.size() == 409);
    for (AtomId f = 0; f < static_cast<AtomId>(a.size()); ++f) {
        auto M = a.matrix(f);
        REQUIRE(a.valid(M));
        REQUIRE(a.find(M) == f);
        for (int x = 0; x < 3; ++x)
            CHECK(M[x * 3 + x] == 0);
    }
    CHECK_THROWS_AS(hirsch_algebra({2, 3, 1}), UsageError);
    HirschOptions small;
    small.budget = 100;
    CHECK_THROWS_AS(hirsch_algebra({3, 3, 1}, small), BudgetExceeded);
}

TEST_CASE("polyadic axioms on C(3,3,1) and C(3,4,1)")
{
    for (auto p : {HirschParams{3, 3, 1}, HirschParams{3, 4, 1}}) {
        auto a = hirsch_algebra(p);
        for (auto sig : {Signature::Sc, Signature::CA, Signature::PA, Signature::PEA}) {
            auto r = ca_axiom_check(a.structure(), sig);
            CHECK(r.ok());
            CHECK(r.commutative());
        }
    }
}

TEST_CASE("planted Forb triples break commutativity")
{
    // every first edge against (a^0(0,0), a^1(0,0)) forbidden
    HirschOptions o;
    for (int l = 1; l < 9; ++l)
        o.extra_forbidden.push_back({l, 1, 2});
    auto a = hirsch_algebra({3, 3, 1}, o);
    auto r = ca_axiom_check(a.structure(), Signature::PEA);
    CHECK_FALSE(r.commutative());
    CHECK(r.commutativity_failures.size() == 3);
}

TEST_CASE("commutativity witness")
{
    auto a = hirsch_algebra({3, 3, 1});
    const auto A = static_cast<AtomId>(a.size());
    auto same_off = [&](const std::vector<int> & h, AtomId f, int x) {
        for (int u = 0; u < 3; ++u)
            for (int v = 0; v < 3; ++v)
                if (u != x && v != x && h[u * 3 + v] != a.entry(f, u, v))
                    return false;
        return true;
    };
    auto w0 = commutativity_witness(a, 5, 5, 0, 1);
    CHECK(w0.found);
    CHECK(w0.h == a.matrix(5));
    std::size_t tried = 0;
    for (AtomId f = 0; f < A; f += 7)
        for (AtomId g = 0; g < A; g += 3)
            for (auto [x, y] : {std::pair{0, 1}, {1, 2}, {2, 0}}) {
                // for m = 3 f ≡_xy g always holds: the only entry avoiding x and y is on the diagonal
                auto w = commutativity_witness(a, f, g, x, y);
                REQUIRE(w.found);
                REQUIRE(a.valid(w.h));
                CHECK(same_off(w.h, f, x));
                CHECK(same_off(w.h, g, y));
                ++tried;
            }
    CHECK(tried > 1000);
}

TEST_CASE("neat reduct")
{
    // m' > n: c_x is not preserved, and both paths find the same failures
    auto mat = neat_reduct_check({3, 3, 1}, 4, NeatPath::materialized);
    auto col = neat_reduct_check({3, 3, 1}, 4, NeatPath::column_profile);
    CHECK(mat.path == "materialized");
    CHECK(col.path == "column-profile");
    CHECK(mat.cylindrifier_failures.size() == 768);
    CHECK(mat.cylindrifier_failures == col.cylindrifier_failures);
    CHECK(mat.injective);
    CHECK(mat.surjective);
    CHECK_THROWS_AS(hirsch_neat_reduct_iso({3, 3, 1}, 4), VerificationError);

    // the restriction map sends each large atom to exactly one small atom
    auto small = hirsch_algebra({3, 3, 1});
    auto large = hirsch_algebra({4, 3, 1});
    std::size_t total = 0;
    for (AtomId f = 0; f < static_cast<AtomId>(small.size()); ++f) {
        auto img = neat_image(small, large, f);
        CHECK_FALSE(img.empty());
        total += img.size();
    }
    CHECK(total == large.size());
}
