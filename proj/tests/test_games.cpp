#include <doctest.h>

#include "atomlab/constructions.hpp"
#include "atomlab/error.hpp"
#include "atomlab/games.hpp"

#include "game_family.hpp"

using namespace atomlab;

namespace
{
    auto one_atom_frame() -> CaAtomStructure
    {
        auto s = RaAtomStructure::from_triples({"1'"}, {0}, {0}, {{0, 0, 0}});
        return matrix_structure(s, basic_matrices(s, 3));
    }

    auto spec(GameKind k, int rounds, int pebbles = 0) -> GameSpec
    {
        GameSpec g;
        g.kind = k;
        g.rounds = rounds;
        g.pebbles = pebbles;
        return g;
    }

    // exists answers with her first legal reply
    auto first_reply(const CaAtomStructure & f, const GameSpec & g) -> ExistsStrategy
    {
        return [&f, g](const Network * board, const Move & mv) -> std::optional<Network> {
            auto rs = responses(f, g, board, mv);
            if (rs.empty())
                return std::nullopt;
            return rs.front();
        };
    }

    // forall plays his first listed move
    auto first_move(const CaAtomStructure & f, const GameSpec & g) -> ForallScript
    {
        return [&f, g](const Network * board, int) -> std::optional<Move> {
            auto ms = legal_moves(f, g, board);
            if (ms.empty())
                return std::nullopt;
            return ms.front();
        };
    }
}

TEST_CASE("one-atom structure: exists wins G")
{
    auto f = one_atom_frame();
    REQUIRE(f.size() == 1);
    auto r = solve_game(f, spec(GameKind::G, 5));
    CHECK(r.winner == Player::exists);
    CHECK(replay_certificate(f, r.certificate).ok);
}

TEST_CASE("set frame on base 2: exists wins G at k=5")
{
    auto f = family::set_frame(2);
    CHECK(f.size() == 8);
    auto r = solve_game(f, spec(GameKind::G, 5));
    CHECK(r.winner == Player::exists);
    CHECK(replay_certificate(f, r.certificate).ok);
}

TEST_CASE("merged classes lose a cylindrifier witness: forall wins at k=2")
{
    auto f = family::seeded_member(4).frame;
    auto r1 = solve_game(f, spec(GameKind::G, 1));
    CHECK(r1.winner == Player::exists);
    auto r = solve_game(f, spec(GameKind::G, 2));
    REQUIRE(r.winner == Player::forall);
    CHECK(r.certificate.at("rounds") == 2);
    CHECK(replay_certificate(f, r.certificate).ok);

    // a tampered certificate does not replay
    auto bad = r.certificate;
    bad["root"]["atom"] = static_cast<int>(f.size()) + 3;
    CHECK_FALSE(replay_certificate(f, bad).ok);
    CHECK_FALSE(replay_certificate(f, nlohmann::json::object()).ok);
}

TEST_CASE("solver agrees with the naive evaluator on the family")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto m = family::seeded_member(seed);
        CAPTURE(m.name);
        CAPTURE(seed);
        CHECK(m.frame.size() <= 12);
        Player prev_g = Player::exists;
        for (int k = 1; k <= 3; ++k) {
            for (auto kind : {GameKind::G, GameKind::F}) {
                auto g = spec(kind, k, kind == GameKind::F ? 3 + static_cast<int>(seed % 2) : 0);
                auto r = solve_game(m.frame, g);
                CHECK(r.winner == naive_winner(m.frame, g));
                auto rep = replay_certificate(m.frame, r.certificate);
                CHECK(rep.ok);
                if (kind == GameKind::G) {
                    // monotone in rounds
                    if (prev_g == Player::forall)
                        CHECK(r.winner == Player::forall);
                    prev_g = r.winner;
                }
            }
        }
    }
}

TEST_CASE("F(m) outcomes are antitone in m for exists")
{
    for (std::uint64_t seed : {0, 2, 3, 4}) {
        auto f = family::seeded_member(seed).frame;
        for (int k = 2; k <= 3; ++k) {
            auto big = solve_game(f, spec(GameKind::F, k, 4));
            auto small = solve_game(f, spec(GameKind::F, k, 3));
            if (big.winner == Player::exists)
                CHECK(small.winner == Player::exists);
        }
    }
}

TEST_CASE("serial and parallel solver agree")
{
    for (std::uint64_t seed : {0, 4, 7}) {
        auto f = family::seeded_member(seed).frame;
        auto g = spec(GameKind::G, 3);
        auto p = solve_game(f, g);
        g.exec = Exec::serial;
        auto s = solve_game(f, g);
        CHECK(p.winner == s.winner);
        CHECK(p.certificate == s.certificate);
    }
}

TEST_CASE("moves and replies")
{
    auto f = family::set_frame(2);
    auto g = spec(GameKind::G, 3);
    auto init = legal_moves(f, g, nullptr);
    CHECK(init.size() == f.size());
    for (std::size_t a = 0; a < init.size(); ++a) {
        CHECK(init[a].initial);
        CHECK(init[a].atom == static_cast<AtomId>(a));
    }
    auto rs = responses(f, g, nullptr, init[1]);
    REQUIRE_FALSE(rs.empty());
    for (const auto & N : rs) {
        CHECK_FALSE(network_violation(f, N).has_value());
        CHECK_FALSE(check::network_ok(f, N).has_value());
        CHECK_FALSE(check::reply_violation(f, g, nullptr, init[1], N).has_value());
    }
    // every cylindrifier reply adds node k and agrees with the board
    const auto & board = rs.front();
    for (const auto & mv : legal_moves(f, g, &board)) {
        CHECK_FALSE(mv.initial);
        for (const auto & N : responses(f, g, &board, mv)) {
            CHECK(N.has(mv.k));
            CHECK(N.size() == board.size() + 1);
            CHECK_FALSE(check::reply_violation(f, g, &board, mv, N).has_value());
        }
    }
    CHECK(Move::from_json(init[2].to_json()) == init[2]);
}

TEST_CASE("network conditions")
{
    auto f = family::set_frame(2);
    // one node: every tuple is (0,0,0), which must lie below every diagonal
    Network N{3, {0}, {0}};
    CHECK_FALSE(network_violation(f, N).has_value());
    Network bad{3, {0}, {1}};
    CHECK(network_violation(f, bad).has_value());
    CHECK(check::network_ok(f, bad).has_value());
    CHECK(Network::from_json(N.to_json()) == N);
}

TEST_CASE("canonical form is invariant under renaming")
{
    auto f = family::set_frame(2);
    auto g = spec(GameKind::G, 3);
    auto rs = responses(f, g, nullptr, legal_moves(f, g, nullptr)[6]);
    for (const auto & N : rs) {
        if (N.size() < 2)
            continue;
        // swap the names of nodes 0 and 1
        Network M = N;
        const int p = N.size();
        for (std::size_t t = 0; t < N.label.size(); ++t) {
            std::vector<int> tup(3);
            std::size_t r = t;
            for (int c = 2; c >= 0; --c) {
                tup[c] = static_cast<int>(r % p);
                r /= p;
            }
            for (int & x : tup)
                x = x == 0 ? 1 : x == 1 ? 0 : x;
            M.label[(tup[0] * p + tup[1]) * p + tup[2]] = N.label[t];
        }
        CHECK(canonical_network(M).first == canonical_network(N).first);
        CHECK(network_violation(f, M).has_value() == network_violation(f, N).has_value());
    }
}

TEST_CASE("scripted play")
{
    auto f = family::seeded_member(4).frame;
    auto g = spec(GameKind::G, 3);
    auto lose = solve_game(f, g);
    REQUIRE(lose.winner == Player::forall);
    auto t = run_scripted(f, g, first_reply(f, g), forall_from_certificate(lose.certificate));
    CHECK(t.winner == Player::forall);

    auto h = family::set_frame(2);
    auto win = solve_game(h, g);
    REQUIRE(win.winner == Player::exists);
    auto t2 = run_scripted(h, g, exists_from_certificate(win.certificate), first_move(h, g));
    CHECK(t2.winner == Player::exists);
    CHECK(t2.rounds_played == 3);
    CHECK_THROWS_AS(forall_from_certificate(win.certificate), UsageError);

    // an illegal reply is reported
    ExistsStrategy cheat = [](const Network *, const Move &) -> std::optional<Network> {
        return Network{3, {0}, {7}};
    };
    CHECK_THROWS_AS(run_scripted(h, g, cheat, first_move(h, g)), VerificationError);
}

TEST_CASE("budget")
{
    auto f = family::set_frame(2);
    auto g = spec(GameKind::G, 5);
    g.state_budget = 2;
    CHECK_THROWS_AS(solve_game(f, g), BudgetExceeded);
    auto h = spec(GameKind::G, 5);
    h.node_budget = 4;
    CHECK_THROWS_AS(solve_game(f, h), BudgetExceeded);
}
