#pragma once

// Seeded family of small frames for the game cross-checks.

#include "atomlab/constructions.hpp"
#include "atomlab/cyl_core.hpp"
#include "atomlab/graphs.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace family
{
    using namespace atomlab;

    // Subframe on `keep`. Substitution maps survive only when `keep` is closed under them.
    inline auto restrict_frame(const CaAtomStructure & f, std::vector<AtomId> keep) -> CaAtomStructure
    {
        std::sort(keep.begin(), keep.end());
        const int n = f.dim();
        const int k = static_cast<int>(keep.size());
        std::vector<AtomId> at(f.size(), -1);
        for (int a = 0; a < k; ++a)
            at[keep[a]] = a;
        const auto & src = f.data();
        CaAtomStructure::Data d;
        d.n = n;
        for (AtomId a : keep)
            d.names.push_back(f.name(a));
        d.cls.assign(n, std::vector<int>(k));
        for (int i = 0; i < n; ++i) {
            std::map<int, int> dense;
            for (int a = 0; a < k; ++a)
                d.cls[i][a] = dense.emplace(f.cls(i, keep[a]), static_cast<int>(dense.size())).first->second;
        }
        d.diag.assign(n, std::vector<AtomSet>(n, AtomSet(k)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < k; ++a)
                    if (f.diagonal(i, j).contains(keep[a]))
                        d.diag[i][j].insert(a);
        auto closed_map = [&](const std::vector<std::vector<std::vector<AtomId>>> & m) {
            std::vector<std::vector<std::vector<AtomId>>> out(n, std::vector<std::vector<AtomId>>(n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (m[i][j].empty())
                        continue;
                    for (AtomId a : keep) {
                        AtomId b = m[i][j][a];
                        if (at[b] < 0)
                            return decltype(out){};
                        out[i][j].push_back(at[b]);
                    }
                }
            return out;
        };
        if (f.has_transpositions())
            d.transposition = closed_map(src.transposition);
        if (f.has_replacements())
            d.replacement = closed_map(src.replacement);
        return CaAtomStructure::from_data(std::move(d));
    }

    // Frame of all maps 3 -> u, as a cylindric set algebra atom structure.
    inline auto set_frame(int u) -> CaAtomStructure
    {
        std::vector<std::array<int, 3>> all;
        for (int x = 0; x < u; ++x)
            for (int y = 0; y < u; ++y)
                for (int z = 0; z < u; ++z)
                    all.push_back({x, y, z});
        const int k = static_cast<int>(all.size());
        auto id = [&](std::array<int, 3> t) { return static_cast<AtomId>((t[0] * u + t[1]) * u + t[2]); };
        CaAtomStructure::Data d;
        d.n = 3;
        for (auto & t : all)
            d.names.push_back(std::to_string(t[0]) + std::to_string(t[1]) + std::to_string(t[2]));
        d.cls.assign(3, std::vector<int>(k));
        for (int i = 0; i < 3; ++i)
            for (int a = 0; a < k; ++a) {
                auto t = all[a];
                t[i] = 0;
                d.cls[i][a] = id(t);
            }
        for (int i = 0; i < 3; ++i) {
            std::map<int, int> dense;
            for (int a = 0; a < k; ++a)
                d.cls[i][a] = dense.emplace(d.cls[i][a], static_cast<int>(dense.size())).first->second;
        }
        d.diag.assign(3, std::vector<AtomSet>(3, AtomSet(k)));
        d.transposition.assign(3, std::vector<std::vector<AtomId>>(3));
        d.replacement.assign(3, std::vector<std::vector<AtomId>>(3));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int a = 0; a < k; ++a) {
                    if (all[a][i] == all[a][j])
                        d.diag[i][j].insert(a);
                    if (i < j) {
                        auto t = all[a];
                        std::swap(t[i], t[j]);
                        d.transposition[i][j].push_back(id(t));
                    }
                    if (i != j) {
                        auto t = all[a];
                        t[i] = t[j];
                        d.replacement[i][j].push_back(id(t));
                    }
                }
        return CaAtomStructure::from_data(std::move(d));
    }

    // Union of cubes X^3 for the given point sets, as a subframe of the set frame on u points.
    inline auto cube_frame(int u, const std::vector<std::vector<int>> & cubes) -> CaAtomStructure
    {
        std::vector<AtomId> keep;
        for (const auto & X : cubes)
            for (int x : X)
                for (int y : X)
                    for (int z : X)
                        keep.push_back(static_cast<AtomId>((x * u + y) * u + z));
        std::sort(keep.begin(), keep.end());
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
        return restrict_frame(set_frame(u), keep);
    }

    // Merges two ≡_i classes.
    inline auto coarsen(const CaAtomStructure & f, int i, int c1, int c2) -> CaAtomStructure
    {
        auto d = f.data();
        if (c1 == c2)
            return f;
        for (auto & c : d.cls[i])
            if (c == std::max(c1, c2))
                c = std::min(c1, c2);
        std::map<int, int> dense;
        for (auto & c : d.cls[i])
            c = dense.emplace(c, static_cast<int>(dense.size())).first->second;
        return CaAtomStructure::from_data(std::move(d));
    }

    struct Member
    {
        std::string name;
        CaAtomStructure frame;
    };

    // Seeds cycle through four sources; at most 12 atoms each.
    inline auto seeded_member(std::uint64_t seed) -> Member
    {
        std::mt19937_64 rng(seed * 7919 + 17);
        auto coarse = [&](CaAtomStructure f) {
            int i = static_cast<int>(rng() % f.dim());
            int c = f.class_count(i);
            return coarsen(f, i, static_cast<int>(rng() % c), static_cast<int>(rng() % c));
        };
        switch (seed % 4) {
            case 0:
                return seed % 8 == 0 ? Member{"set2", set_frame(2)} : Member{"set2-coarse", coarse(set_frame(2))};
            case 1: {
                std::vector<std::vector<int>> cubes{{0, 1}};
                for (int x = 2; x < 4; ++x)
                    if (rng() % 2)
                        cubes.push_back({x});
                return {"cubes", cube_frame(4, cubes)};
            }
            case 2: {
                auto f = cube_frame(3, {{0, 1}, {2}});
                return {"cubes-coarse", coarse(f)};
            }
            default: {
                auto f = rainbow_ca_atoms(one_white_palette()).structure;
                return seed % 8 == 3 ? Member{"one-white", f} : Member{"one-white-coarse", coarse(f)};
            }
        }
    }
}
