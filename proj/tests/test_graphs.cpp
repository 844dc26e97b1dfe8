#include <doctest.h>

#include "atomlab/graphs.hpp"

#include <algorithm>
#include <numeric>

using namespace atomlab;

namespace
{
    auto clique_number(const SimpleGraph & g) -> int
    {
        const int n = g.vertices();
        int best = n > 0 ? 1 : 0;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            int k = __builtin_popcount(mask);
            if (k <= best)
                continue;
            bool clique = true;
            for (int u = 0; u < n && clique; ++u)
                for (int v = u + 1; v < n && clique; ++v)
                    if ((mask >> u & 1) && (mask >> v & 1) && !g.adjacent(u, v))
                        clique = false;
            if (clique)
                best = k;
        }
        return best;
    }

    auto has_cycle(const SimpleGraph & g) -> bool
    {
        std::vector<int> parent(g.vertices());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto [u, v] : g.edges()) {
            int a = find(u), b = find(v);
            if (a == b)
                return true;
            parent[a] = b;
        }
        return false;
    }

    auto proper(const SimpleGraph & g, const std::vector<int> & col) -> bool
    {
        for (auto [u, v] : g.edges())
            if (col[u] == col[v])
                return false;
        return true;
    }
}

TEST_CASE("generators")
{
    CHECK(complete_graph(4).edge_count() == 6);
    auto b = band_graph(5, 2);
    CHECK(b.edges() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    CHECK(disjoint_cliques({3, 3}).edge_count() == 6);
    CHECK(cycle_graph(5).edge_count() == 5);
    CHECK(seeded_random_graph(9, 0.4, 7) == seeded_random_graph(9, 0.4, 7));
}

TEST_CASE("chromatic numbers")
{
    CHECK(chromatic_number(complete_graph(4)).chi == 4);
    CHECK(chromatic_number(cycle_graph(5)).chi == 3);
    CHECK(chromatic_number(band_graph(6, 3)).chi == 3);
    CHECK(chromatic_number(disjoint_cliques({3, 3})).chi == 3);
    auto big = complete_graph(25);
    CHECK(chromatic_number(big).exceeded);
}

TEST_CASE("girth")
{
    CHECK(girth(complete_graph(3)) == 3);
    CHECK(girth(cycle_graph(5)) == 5);
    CHECK_FALSE(girth(path_graph(6)).has_value());
}

TEST_CASE("chromatic number against clique number and witness colouring")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto g = seeded_random_graph(8 + static_cast<int>(seed % 5), 0.45, seed);
        auto r = chromatic_number(g);
        REQUIRE_FALSE(r.exceeded);
        CHECK(r.chi >= clique_number(g));
        CHECK(proper(g, r.colouring));
        CHECK(*std::max_element(r.colouring.begin(), r.colouring.end()) == r.chi - 1);
    }
}

TEST_CASE("girth is infinite exactly on forests")
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto g = seeded_random_graph(7, 0.2 + 0.01 * static_cast<double>(seed), seed);
        CHECK(girth(g).has_value() == has_cycle(g));
    }
}
