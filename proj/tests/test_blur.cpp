#include <doctest.h>

#include "atomlab/constructions.hpp"
#include "atomlab/error.hpp"

#include <tuple>

using namespace atomlab;

namespace
{
    // Blur consistency from the definition: safe(S,Z,W), or E(i,j,k) and P <= Q;R.
    auto oracle(const BlurSpec & spec, const RaAtomStructure & base, const BlurIndex & ix, AtomId a, AtomId b, AtomId c)
        -> bool
    {
        if (a == 0 || b == 0 || c == 0) {
            if (a == 0)
                return b == c;
            if (b == 0)
                return a == c;
            return a == b;
        }
        auto part = [&](AtomId x) {
            int s = ix.slot_of(x);
            return std::make_tuple(ix.index_of(x), ix.slot_block(s), ix.slot_colour(s));
        };
        auto [i, S, P] = part(a);
        auto [j, Z, Q] = part(b);
        auto [k, W, R] = part(c);
        if (safe(spec.J[S], spec.J[Z], spec.J[W], base))
            return true;
        return evenly_distributed(i, j, k) && base.consistent(Q, R, P);
    }
}

TEST_CASE("F(2,1) blur structure")
{
    auto base = f_family_base(6);
    auto spec = f_family_spec(2, 1, 6, 3);
    CHECK(spec.J.size() == 15);
    auto s = blur_structure(spec, base);
    CHECK(s.size() == 91);
    CHECK(validate_atom_structure(s).ok());

    BlurIndex ix(spec);
    const auto A = static_cast<AtomId>(s.size());
    for (AtomId a = 0; a < A; a += 3)
        for (AtomId b = 0; b < A; ++b)
            for (AtomId c = 0; c < A; ++c)
                REQUIRE(s.consistent(a, b, c) == oracle(spec, base, ix, a, b, c));
}

TEST_CASE("blur truncation monotonicity")
{
    auto base = f_family_base(4);
    auto small = f_family_spec(2, 1, 4, 3);
    auto large = f_family_spec(2, 1, 4, 5);
    auto s = blur_structure(small, base);
    auto l = blur_structure(large, base);
    BlurIndex is(small), il(large);
    auto lift = [&](AtomId a) { return a == 0 ? 0 : il.atom(is.index_of(a), is.slot_block(is.slot_of(a)), is.slot_colour(is.slot_of(a))); };
    const auto A = static_cast<AtomId>(s.size());
    for (AtomId a = 0; a < A; ++a)
        for (AtomId b = 0; b < A; ++b)
            for (AtomId c = 0; c < A; ++c)
                REQUIRE(s.consistent(a, b, c) == l.consistent(lift(a), lift(b), lift(c)));
}

TEST_CASE("blur spec errors")
{
    auto base = f_family_base(4);
    BlurSpec bad;
    bad.I = {1, 2, 3, 4};
    bad.J = {{1, 2}, {}, {3, 4}};
    CHECK_THROWS_AS(check_blur_spec(bad, base), UsageError);
    bad.J = {{1, 2}};
    CHECK_THROWS_AS(check_blur_spec(bad, base), UsageError);
    bad.J = {};
    CHECK_THROWS_AS(blur_structure(bad, base), UsageError);
}

TEST_CASE("complex blur conditions")
{
    auto base = f_family_base(6);
    auto spec = f_family_spec(2, 1, 6, 3);
    auto at = [](const std::vector<BlurConditionResult> & rs, int c) {
        for (const auto & r : rs)
            if (r.condition == c)
                return r.holds;
        FAIL("condition missing");
        return false;
    };
    auto n3 = check_complex_blur(spec, base, 3);
    CHECK(at(n3, 1));
    CHECK(at(n3, 2));
    CHECK(at(n3, 3));
    CHECK(at(n3, 4));
    // (5) needs blurs of size 2n-1; F(2,1) has size 2
    CHECK_FALSE(at(n3, 5));
    auto n2 = check_complex_blur(spec, base, 2);
    for (int c = 1; c <= 5; ++c)
        CHECK(at(n2, c));

    auto with_empty = spec;
    with_empty.J.push_back({});
    CHECK_FALSE(at(check_complex_blur(with_empty, base, 2), 1));
}

TEST_CASE("cofinite term algebra: boolean part")
{
    TermAlgebraBlur T(f_family_spec(2, 1, 4, 8), f_family_base(4));
    auto X = T.block(0);
    CHECK(T.join(X, T.complement(X)) == T.top());
    CHECK(T.meet(X, T.complement(X)) == T.bottom());
    CHECK(T.complement(T.complement(X)) == X);
    auto s = T.singleton(1, 0, 1);
    CHECK(T.contains(s, 1, 0, 1));
    CHECK_FALSE(T.contains(s, 2, 0, 1));
    CHECK(T.contains(T.complement(s), 2, 0, 1));
}

TEST_CASE("singleton composition reduces to the truncation")
{
    TermAlgebraBlur T(f_family_spec(2, 1, 4, 16), f_family_base(4));
    const auto & ix = T.index();
    const auto & tr = T.truncation();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (std::size_t s1 = 0; s1 < ix.slots(); s1 += 2)
                for (std::size_t s2 = 0; s2 < ix.slots(); s2 += 3) {
                    int w1 = ix.slot_block(static_cast<int>(s1)), w2 = ix.slot_block(static_cast<int>(s2));
                    AtomId p1 = ix.slot_colour(static_cast<int>(s1)), p2 = ix.slot_colour(static_cast<int>(s2));
                    auto x = T.singleton(i, w1, p1), y = T.singleton(j, w2, p2);
                    auto got = T.restrict(T.compose(x, y), 8);
                    auto want = compose_atoms(tr, ix.atom(i, w1, p1), ix.atom(j, w2, p2));
                    AtomSet win(tr.size());
                    for (AtomId c : want.to_vector())
                        if (c == 0 || ix.index_of(c) < 8)
                            win.insert(c);
                    REQUIRE(got == win);
                }
}

TEST_CASE("generator cross-check at t=24 and H^P join")
{
    TermAlgebraBlur T(f_family_spec(2, 1, 6, 24), f_family_base(6));
    auto cc = T.cross_check_generators();
    CHECK(cc.pairs > 0);
    CHECK(cc.mismatches == 0);
    auto jc = T.hp_join_check();
    CHECK(jc.triples > 0);
    CHECK(jc.missing == 0);
    CHECK(jc.extra == 0);
}
