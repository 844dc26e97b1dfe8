#include <doctest.h>

#include "atomlab/constructions.hpp"
#include "atomlab/error.hpp"
#include "atomlab/games.hpp"

#include "game_family.hpp"

using namespace atomlab;

namespace
{
    auto atom_named(const CaAtomStructure & f, const std::string & name) -> AtomId
    {
        for (std::size_t a = 0; a < f.size(); ++a)
            if (f.name(static_cast<AtomId>(a)) == name)
                return static_cast<AtomId>(a);
        FAIL("no atom " << name);
        return -1;
    }

    // Network on `nodes` sending node nodes[q] to point pts[q] of a set frame.
    auto point_network(const CaAtomStructure & f, std::vector<int> nodes, std::vector<int> pts) -> Network
    {
        Network N;
        N.n = 3;
        N.nodes = std::move(nodes);
        const int p = N.size();
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b)
                for (int c = 0; c < p; ++c)
                    N.label.push_back(
                        atom_named(f, std::to_string(pts[a]) + std::to_string(pts[b]) + std::to_string(pts[c])));
        return N;
    }

    auto neat(const CaAtomStructure & f, const HyperSpec & s, const Network & a) -> HyperNetwork
    {
        auto H = hyper_relabel(f, s, {}, a, {});
        REQUIRE(H.has_value());
        return *H;
    }
}

TEST_CASE("one-atom structure: exists wins H")
{
    auto s = RaAtomStructure::from_triples({"1'"}, {0}, {0}, {{0, 0, 0}});
    auto f = matrix_structure(s, basic_matrices(s, 3));
    HyperSpec hs;
    hs.rounds = 3;
    auto r = solve_hypergame(f, hs);
    CHECK(r.winner == Player::exists);
    CHECK(replay_hyper_certificate(f, r.certificate).ok);
}

TEST_CASE("H with cylindrifier moves only matches G")
{
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto f = family::seeded_member(seed).frame;
        for (int k = 1; k <= 3; ++k) {
            HyperSpec hs;
            hs.rounds = k;
            hs.transformations = false;
            hs.amalgamations = false;
            GameSpec g;
            g.rounds = k;
            auto h = solve_hypergame(f, hs);
            CHECK(h.winner == solve_game(f, g).winner);
            CHECK(replay_hyper_certificate(f, h.certificate).ok);
        }
    }
}

TEST_CASE("full H game on small frames")
{
    for (std::uint64_t seed : {0, 4}) {
        auto f = family::seeded_member(seed).frame;
        HyperSpec hs;
        hs.rounds = 2;
        auto h = solve_hypergame(f, hs);
        GameSpec g;
        g.rounds = 2;
        // more moves for forall can only help him
        if (solve_game(f, g).winner == Player::forall)
            CHECK(h.winner == Player::forall);
        CHECK(replay_hyper_certificate(f, h.certificate).ok);
    }
}

TEST_CASE("amalgamation with incompatible overlap")
{
    // two cubes sharing point 1: M lives in {0,1}^3 and N in {1,2}^3, and no point tuple mixes 0 and 2
    auto f = family::cube_frame(3, {{0, 1}, {1, 2}});
    HyperSpec hs;
    hs.rounds = 1;
    auto M = neat(f, hs, point_network(f, {0, 1}, {0, 1}));
    auto N = neat(f, hs, point_network(f, {1, 2}, {1, 2}));
    CHECK(network_amalgams(f, M.a, N.a).empty());
    auto moves = hyper_moves(f, hs, {M, N});
    bool offered = false;
    for (const auto & mv : moves)
        if (mv.kind == HyperMoveKind::amalgamation && mv.net == 0 && mv.net2 == 1) {
            offered = true;
            CHECK(hyper_responses(f, hs, {M, N}, mv).empty());
        }
    CHECK(offered);
    auto r = solve_hypergame(f, hs, {M, N});
    CHECK(r.winner == Player::forall);
}

TEST_CASE("amalgamation needs shared nodes")
{
    auto f = family::set_frame(2);
    HyperSpec hs;
    auto M = neat(f, hs, point_network(f, {0, 1}, {0, 1}));
    auto N = neat(f, hs, point_network(f, {2, 3}, {0, 1}));
    for (const auto & mv : hyper_moves(f, hs, {M, N}))
        CHECK_FALSE((mv.kind == HyperMoveKind::amalgamation && mv.net != mv.net2));
}

TEST_CASE("amalgamation keeps forall's edges")
{
    auto f = family::set_frame(2);
    HyperSpec hs;
    auto M = neat(f, hs, point_network(f, {0, 1}, {0, 1}));
    auto N = neat(f, hs, point_network(f, {1, 2}, {1, 0}));
    M.owner[{0, 1}] = Player::forall;
    N.owner[{1, 2}] = Player::exists;
    std::vector<HyperNetwork> hist{M, N};
    bool seen = false;
    for (const auto & mv : hyper_moves(f, hs, hist)) {
        if (mv.kind != HyperMoveKind::amalgamation || mv.net != 0 || mv.net2 != 1)
            continue;
        for (const auto & L : hyper_responses(f, hs, hist, mv)) {
            seen = true;
            CHECK(L.a.nodes == std::vector<int>{0, 1, 2});
            CHECK(L.owner.at({0, 1}) == Player::forall);
            CHECK(L.owner.at({1, 2}) == Player::exists);
            CHECK_FALSE(hypernetwork_violation(f, L, hs.lambda).has_value());
        }
    }
    CHECK(seen);
}

TEST_CASE("hyperedge classification")
{
    auto f = family::set_frame(2);
    HyperSpec hs;
    // every node on point 0: one similarity class, so every hyperedge is short
    auto same = neat(f, hs, point_network(f, {0, 1, 2}, {0, 0, 0}));
    CHECK(hyper_similar(f, same.a, 0, 2));
    for (const auto & e : hyperedge_classify(f, same))
        CHECK(e.is_short);
    CHECK(same.h.empty());

    // two points give two classes; a hyperedge meets at most 2 <= n of them
    auto two = neat(f, hs, point_network(f, {0, 1, 2, 3}, {0, 1, 0, 1}));
    CHECK(hyper_similar(f, two.a, 0, 2));
    CHECK_FALSE(hyper_similar(f, two.a, 0, 1));
    for (const auto & e : hyperedge_classify(f, two))
        CHECK(e.is_short);
    CHECK(hyperedge_short(f, two.a, {0, 1, 2, 3}));
    CHECK(HyperNetwork::from_json(two.to_json()) == two);

    // a long hyperedge needs more than 3 classes
    auto f3 = family::set_frame(4);
    auto four = neat(f3, hs, point_network(f3, {0, 1, 2, 3}, {0, 1, 2, 3}));
    CHECK_FALSE(hyperedge_short(f3, four.a, {0, 1, 2, 3}));
    bool long_seen = false;
    for (const auto & e : hyperedge_classify(f3, four))
        if (!e.is_short) {
            long_seen = true;
            CHECK(e.label != hs.lambda);
        }
    CHECK(long_seen);
    CHECK_FALSE(hypernetwork_violation(f3, four, hs.lambda).has_value());
}
