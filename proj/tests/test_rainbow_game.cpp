#include <doctest.h>

#include "atomlab/error.hpp"
#include "atomlab/games.hpp"

using namespace atomlab;

TEST_CASE("rho map keeps order and gaps")
{
    RhoMap rm(1000, 4, {-3, -2, -1, 0});
    CHECK(rm.gap(1) == 27);
    CHECK(rm.gap(4) == 1);
    for (int r = 1; r <= 4; ++r) {
        REQUIRE(rm.extend(-(r - 1), r));
        CHECK(rm.invariant_ok(r));
    }
    CHECK(rm.gaps_maintained());
    // after round r any two range points differ by at least 3^(4-r); check the last round directly
    int prev = -1;
    for (auto [t, v] : rm.map()) {
        if (prev >= 0)
            CHECK(v - prev >= 1);
        prev = v;
    }
    CHECK(rm.at(-3) < rm.at(-2));
    CHECK(rm.at(-1) < rm.at(0));
    CHECK_THROWS_AS(rm.extend(-7, 2), UsageError);
}

TEST_CASE("rho map gaps on a wide range")
{
    RhoMap rm(1000, 4, {-3, -2, -1, 0});
    rm.extend(0, 1);
    rm.extend(-1, 2);
    CHECK(rm.at(0) - rm.at(-1) >= 9);
    rm.extend(-2, 3);
    CHECK(rm.at(-1) - rm.at(-2) >= 3);
    CHECK(rm.invariant_ok(3));
}

TEST_CASE("rho map refuses when no value fits")
{
    RhoMap rm(2, 4, {-2, -1, 0});
    CHECK(rm.extend(0, 1));
    CHECK(rm.extend(-1, 2));
    CHECK_FALSE(rm.extend(-2, 3));
    CHECK(rm.map().size() == 2);
    CHECK(rm.invariant_ok(-1));
}

TEST_CASE("exists' replies to the cone script")
{
    auto p = rainbow_palette(3, 4, 6);
    ExistsRainbowStrategy e(p, 4);
    auto board = rainbow_opening(p);
    CHECK(coloured_graph_check(board, p).empty());
    e.start(board);
    auto b2 = e.respond(board, cone_script_move(p, 2), 2);
    REQUIRE(b2.has_value());
    CHECK(coloured_graph_check(*b2, p).empty());
    // apexes 2 (tint 0) and 3 (tint -1) share the base: red from 3 to 2 follows rho
    const auto & rho = e.rho();
    REQUIRE(rho.has(0));
    REQUIRE(rho.has(-1));
    CHECK(rho.at(-1) < rho.at(0));
    CHECK(*b2->label(3, 2) == Colour{ColourKind::red, rho.at(-1), rho.at(0)});
    CHECK(*b2->label(2, 3) == Colour{ColourKind::red, rho.at(0), rho.at(-1)});
}

TEST_CASE("exists never uses green and reds only join apexes")
{
    auto p = rainbow_palette(3, 4, 6);
    auto tr = run_rainbow_script(p, 4, 4);
    CHECK(tr.winner == Player::exists);
    CHECK(tr.rounds_played == 4);
    const auto & last = tr.boards.back();
    CHECK(coloured_graph_check(last, p).empty());
    // nodes 0,1 form the base; every later node is an apex placed by forall
    for (int x = 2; x < last.nodes; ++x)
        for (int y = 2; y < last.nodes; ++y)
            if (x != y) {
                const auto & c = *last.label(x, y);
                CHECK_FALSE(c.is_green());
                CHECK(c.kind == ColourKind::red);
            }
    CHECK(*last.label(0, 1) == Colour{ColourKind::white, 0, 0});
    CHECK(find_cones(last, 3).size() == 4);
}

TEST_CASE("forall's cone script wins on truncations")
{
    int prev = 0;
    for (int R = 1; R <= 4; ++R) {
        auto p = rainbow_palette(3, R + 2, R);
        auto tr = run_rainbow_script(p, R + 2, R + 2);
        CHECK(tr.winner == Player::forall);
        CHECK(tr.losing_round == R + 1);
        CHECK_FALSE(tr.diagnostic.empty());
        for (const auto & b : tr.boards)
            CHECK(coloured_graph_check(b, p).empty());
        if (R <= 3) {
            auto d = rainbow_cone_dynamics(p, R + 2);
            CHECK(d.forall_wins);
            CHECK(d.rounds == R + 1);
            CHECK(d.rounds > prev);
            prev = d.rounds;
        }
    }
}

TEST_CASE("full yellow enumeration agrees")
{
    auto p = rainbow_palette(3, 4, 2);
    auto fixed = rainbow_cone_dynamics(p, 4);
    auto all = rainbow_cone_dynamics(p, 4, true);
    CHECK(fixed.forall_wins == all.forall_wins);
    CHECK(fixed.rounds == all.rounds);
}

TEST_CASE("plenty of reds: exists survives")
{
    auto p = rainbow_palette(3, 4, 6);
    CHECK_FALSE(rainbow_cone_dynamics(p, 4).forall_wins);
    CHECK_THROWS_AS(cone_script_move(p, 1), UsageError);
    CHECK_THROWS_AS(cone_script_move(p, 6), UsageError);
    auto tr = run_rainbow_script(p, 4, 4);
    auto j = tr.to_json(p);
    CHECK(j.at("winner") == "exists");
}
