#include "atomlab/cyl_core.hpp"

#include "atomlab/error.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace atomlab
{
    auto Colour::name() const -> std::string
    {
        switch (kind) {
        case ColourKind::green0:
            return "g0^" + std::to_string(a);
        case ColourKind::green:
            return "g" + std::to_string(a);
        case ColourKind::white:
            return "w" + std::to_string(a);
        case ColourKind::red:
            return "r" + std::to_string(a) + "_" + std::to_string(b);
        case ColourKind::shade_red:
            return "rho";
        }
        return "?";
    }

    auto Colour::parse(const std::string & s) -> Colour
    {
        auto num = [&](const std::string & t) -> int {
            std::size_t pos = 0;
            int v = 0;
            try {
                v = std::stoi(t, &pos);
            }
            catch (const std::exception &) {
                pos = std::string::npos;
            }
            if (t.empty() || pos != t.size())
                throw StructuralError("unknown colour symbol '" + s + "'");
            return v;
        };
        if (s == "rho")
            return {ColourKind::shade_red, 0, 0};
        if (s.rfind("g0^", 0) == 0)
            return {ColourKind::green0, num(s.substr(3)), 0};
        if (s.size() >= 2 && s[0] == 'g')
            return {ColourKind::green, num(s.substr(1)), 0};
        if (s.size() >= 2 && s[0] == 'w')
            return {ColourKind::white, num(s.substr(1)), 0};
        if (s.size() >= 4 && s[0] == 'r') {
            auto u = s.find('_');
            if (u != std::string::npos)
                return {ColourKind::red, num(s.substr(1, u - 1)), num(s.substr(u + 1))};
        }
        throw StructuralError("unknown colour symbol '" + s + "'");
    }

    auto Palette::colours() const -> std::vector<Colour>
    {
        std::vector<Colour> r;
        for (int t : tints)
            r.push_back({ColourKind::green0, t, 0});
        if (plain_greens)
            for (int j = 1; j <= n - 2; ++j)
                r.push_back({ColourKind::green, j, 0});
        for (int w : whites)
            r.push_back({ColourKind::white, w, 0});
        for (int k = 0; k < reds; ++k)
            for (int l = 0; l < reds; ++l)
                if (k != l)
                    r.push_back({ColourKind::red, k, l});
        if (shade_red)
            r.push_back({ColourKind::shade_red, 0, 0});
        return r;
    }

    auto Palette::has(const Colour & c) const -> bool
    {
        switch (c.kind) {
        case ColourKind::green0:
            return tint_index(c.a) >= 0;
        case ColourKind::green:
            return plain_greens && c.a >= 1 && c.a <= n - 2;
        case ColourKind::white:
            return std::find(whites.begin(), whites.end(), c.a) != whites.end();
        case ColourKind::red:
            return c.a != c.b && c.a >= 0 && c.b >= 0 && c.a < reds && c.b < reds;
        case ColourKind::shade_red:
            return shade_red;
        }
        return false;
    }

    auto Palette::tint_index(int tint) const -> int
    {
        auto it = std::find(tints.begin(), tints.end(), tint);
        return it == tints.end() ? -1 : static_cast<int>(it - tints.begin());
    }

    auto Palette::to_json() const -> nlohmann::json
    {
        return {{"n", n}, {"tints", tints}, {"plain_greens", plain_greens}, {"whites", whites},
                {"reds", reds}, {"shade_red", shade_red}};
    }

    auto Palette::from_json(const nlohmann::json & j) -> Palette
    {
        try {
            Palette p;
            p.n = j.at("n").get<int>();
            p.tints = j.at("tints").get<std::vector<int>>();
            p.plain_greens = j.value("plain_greens", true);
            p.whites = j.at("whites").get<std::vector<int>>();
            p.reds = j.at("reds").get<int>();
            p.shade_red = j.value("shade_red", false);
            if (p.n < 2 || p.reds < 0 || p.tints.size() > 64)
                throw StructuralError("palette out of range");
            if (!std::is_sorted(p.tints.begin(), p.tints.end()) ||
                std::adjacent_find(p.tints.begin(), p.tints.end()) != p.tints.end())
                throw StructuralError("palette tints must be strictly ascending");
            return p;
        }
        catch (const nlohmann::json::exception & e) {
            throw StructuralError(std::string("bad palette document: ") + e.what());
        }
    }

    auto one_white_palette(int n) -> Palette
    {
        Palette p;
        p.n = n;
        p.plain_greens = false;
        p.whites = {0};
        return p;
    }

    auto rainbow_palette(int n, int tints, int reds) -> Palette
    {
        if (n < 2 || tints < 0 || tints > 64 || reds < 0)
            throw UsageError("rainbow palette needs n >= 2, 0 <= tints <= 64, reds >= 0");
        Palette p;
        p.n = n;
        for (int t = tints - 1; t >= 0; --t)
            p.tints.push_back(-t);
        p.whites.clear();
        for (int i = 0; i <= n - 2; ++i)
            p.whites.push_back(i);
        p.reds = reds;
        return p;
    }

    void ColouredGraph::set(int x, int y, Colour c)
    {
        edge[x * nodes + y] = c;
        edge[y * nodes + x] = c.reversed();
    }

    namespace
    {
        auto mask_to_tints(std::uint64_t mask, const Palette & p) -> std::vector<int>
        {
            std::vector<int> r;
            for (std::size_t i = 0; i < p.tints.size(); ++i)
                if ((mask >> i) & 1U)
                    r.push_back(p.tints[i]);
            return r;
        }
    }

    auto ColouredGraph::to_json(const Palette & p) const -> nlohmann::json
    {
        nlohmann::json m = nlohmann::json::array();
        for (int x = 0; x < nodes; ++x) {
            nlohmann::json row = nlohmann::json::array();
            for (int y = 0; y < nodes; ++y) {
                const auto & e = label(x, y);
                row.push_back(e ? nlohmann::json(e->name()) : nlohmann::json(nullptr));
            }
            m.push_back(row);
        }
        nlohmann::json ys = nlohmann::json::array();
        for (const auto & [tuple, mask] : yellow)
            ys.push_back({{"tuple", tuple}, {"shade", mask_to_tints(mask, p)}});
        return {{"nodes", nodes}, {"edges", m}, {"yellow", ys}};
    }

    auto ColouredGraph::from_json(const nlohmann::json & j, const Palette & p) -> ColouredGraph
    {
        try {
            ColouredGraph g(j.at("nodes").get<int>());
            if (g.nodes < 0)
                throw StructuralError("negative node count");
            const auto & m = j.at("edges");
            if (m.size() != static_cast<std::size_t>(g.nodes))
                throw StructuralError("edge matrix has the wrong shape");
            for (int x = 0; x < g.nodes; ++x) {
                if (m[x].size() != static_cast<std::size_t>(g.nodes))
                    throw StructuralError("edge matrix has the wrong shape");
                for (int y = 0; y < g.nodes; ++y)
                    if (!m[x][y].is_null())
                        g.edge[x * g.nodes + y] = Colour::parse(m[x][y].get<std::string>());
            }
            for (const auto & y : j.value("yellow", nlohmann::json::array())) {
                std::uint64_t mask = 0;
                for (int t : y.at("shade").get<std::vector<int>>()) {
                    int i = p.tint_index(t);
                    if (i < 0)
                        throw StructuralError("yellow shade names tint " + std::to_string(t) + " outside the palette");
                    mask |= std::uint64_t{1} << i;
                }
                auto tuple = y.at("tuple").get<std::vector<int>>();
                for (int v : tuple)
                    if (v < 0 || v >= g.nodes)
                        throw StructuralError("yellow tuple node out of range");
                std::sort(tuple.begin(), tuple.end());
                g.yellow[tuple] = mask;
            }
            return g;
        }
        catch (const nlohmann::json::exception & e) {
            throw StructuralError(std::string("bad coloured graph document: ") + e.what());
        }
    }

    namespace
    {
        // Red r_kl on the edge u -> v gives u index k and v index l.
        auto red_ok(const Colour & xy, const Colour & yz, const Colour & xz) -> bool
        {
            return xy.a == xz.a && xy.b == yz.a && yz.b == xz.b;
        }

        // Green0 tints i at u and j at v (seen from the shared node), red r_kl from u to v.
        auto green_red_ok(int i, int j, const Colour & r) -> bool
        {
            if (i < j)
                return r.a < r.b;
            if (i > j)
                return r.a > r.b;
            return r.a == r.b;
        }

        auto forbidden_oriented(const Colour & xy, const Colour & yz, const Colour & xz) -> bool
        {
            const Colour * e[3] = {&xy, &yz, &xz};
            int greens = 0;
            for (auto * c : e)
                greens += c->is_green();
            if (greens == 3)
                return true;
            if (xy.kind == ColourKind::red && yz.kind == ColourKind::red && xz.kind == ColourKind::red)
                return !red_ok(xy, yz, xz);
            if (greens != 2)
                return false;
            // Rotate so that the two greens meet at a shared node c, with edges c-u and c-v
            // and the third edge u -> v. Orientation: (x,y,z) with xy, yz, xz.
            // Shared node y: greens xy and yz, third x -> z.
            // Shared node x: greens xy and xz, third y -> z.
            // Shared node z: greens xz and yz, third x -> y.
            struct View
            {
                Colour cu, cv, uv;
            };
            View v;
            if (xy.is_green() && yz.is_green())
                v = {xy, yz, xz};
            else if (xy.is_green() && xz.is_green())
                v = {xy, xz, yz};
            else
                v = {xz, yz, xy};
            if (v.cu.kind == ColourKind::green0 && v.cv.kind == ColourKind::green0) {
                if (v.uv.kind == ColourKind::white && v.uv.a == 0)
                    return true;
                if (v.uv.kind == ColourKind::red)
                    return !green_red_ok(v.cu.a, v.cv.a, v.uv);
                return false;
            }
            if (v.cu.kind == ColourKind::green && v.cv.kind == ColourKind::green && v.cu.a == v.cv.a)
                return v.uv.kind == ColourKind::white && v.uv.a == v.cu.a;
            return false;
        }

        template <typename F>
        void for_each_subset(int nodes, int size, F && f)
        {
            std::vector<int> s(size);
            std::function<void(int, int)> rec = [&](int at, int from) {
                if (at == size) {
                    f(s);
                    return;
                }
                for (int v = from; v < nodes; ++v) {
                    s[at] = v;
                    rec(at + 1, v + 1);
                }
            };
            rec(0, 0);
        }

        auto green_free(const ColouredGraph & g, const std::vector<int> & s) -> bool
        {
            for (std::size_t a = 0; a < s.size(); ++a)
                for (std::size_t b = a + 1; b < s.size(); ++b) {
                    const auto & e = g.label(s[a], s[b]);
                    if (e && e->is_green())
                        return false;
                }
            return true;
        }
    }

    auto forbidden_triangle(const ColouredGraph & g, int x, int y, int z) -> bool
    {
        const auto & a = g.label(x, y);
        const auto & b = g.label(y, z);
        const auto & c = g.label(x, z);
        if (!a || !b || !c)
            return false;
        return forbidden_oriented(*a, *b, *c);
    }

    auto find_cones(const ColouredGraph & g, int n) -> std::vector<Cone>
    {
        std::vector<Cone> out;
        if (n < 2)
            return out;
        for (int z = 0; z < g.nodes; ++z) {
            std::vector<int> base(n - 1);
            std::function<void(int)> rec = [&](int j) {
                if (j == n - 1) {
                    if (!green_free(g, base))
                        return;
                    out.push_back({base, z, g.label(base[0], z)->a});
                    return;
                }
                for (int x = 0; x < g.nodes; ++x) {
                    if (x == z || std::find(base.begin(), base.begin() + j, x) != base.begin() + j)
                        continue;
                    const auto & e = g.label(x, z);
                    if (!e)
                        continue;
                    bool fits = j == 0 ? e->kind == ColourKind::green0 : (e->kind == ColourKind::green && e->a == j);
                    if (!fits)
                        continue;
                    base[j] = x;
                    rec(j + 1);
                }
            };
            rec(0);
        }
        std::sort(out.begin(), out.end(), [](const Cone & a, const Cone & b) {
            return std::tie(a.apex, a.base, a.tint) < std::tie(b.apex, b.base, b.tint);
        });
        return out;
    }

    auto coloured_graph_check(const ColouredGraph & g, const Palette & p) -> std::vector<Violation>
    {
        std::vector<Violation> out;
        const int k = g.nodes;
        for (const auto & e : g.edge)
            if (e && !p.has(*e))
                throw StructuralError("colour " + e->name() + " is not in the palette");
        for (int x = 0; x < k; ++x) {
            if (g.label(x, x))
                out.push_back({"loop", {x}});
            for (int y = x + 1; y < k; ++y) {
                const auto & a = g.label(x, y);
                const auto & b = g.label(y, x);
                if (!a || !b)
                    out.push_back({"incomplete", {x, y}});
                else if (*b != a->reversed())
                    out.push_back({"converse", {x, y}});
            }
        }
        if (!out.empty())
            return out;
        for (int x = 0; x < k; ++x)
            for (int y = x + 1; y < k; ++y)
                for (int z = y + 1; z < k; ++z)
                    if (forbidden_triangle(g, x, y, z))
                        out.push_back({"forbidden-triple", {x, y, z}});
        const std::uint64_t all = p.tints.size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p.tints.size()) - 1;
        for (const auto & [tuple, mask] : g.yellow) {
            bool shaped = static_cast<int>(tuple.size()) == p.n - 1 && std::is_sorted(tuple.begin(), tuple.end()) &&
                          std::adjacent_find(tuple.begin(), tuple.end()) == tuple.end();
            for (int v : tuple)
                shaped = shaped && v >= 0 && v < k;
            if (!shaped) {
                out.push_back({"yellow-shape", tuple});
                continue;
            }
            if (mask & ~all)
                out.push_back({"yellow-shade", tuple});
            if (!green_free(g, tuple))
                out.push_back({"extra-yellow", tuple});
        }
        for_each_subset(k, p.n - 1, [&](const std::vector<int> & s) {
            if (green_free(g, s) && !g.yellow.count(s))
                out.push_back({"missing-yellow", s});
        });
        for (const auto & c : find_cones(g, p.n)) {
            auto key = c.base;
            std::sort(key.begin(), key.end());
            auto it = g.yellow.find(key);
            int ti = p.tint_index(c.tint);
            if (it != g.yellow.end() && (ti < 0 || !((it->second >> ti) & 1U))) {
                auto w = c.base;
                w.push_back(c.apex);
                out.push_back({"cone", w});
            }
        }
        return out;
    }

    namespace
    {
        const std::vector<std::vector<int>> patterns3 = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {0, 1, 2}};

        auto relabel(std::vector<int> f) -> std::pair<std::vector<int>, std::vector<int>>
        {
            // Returns (restricted-growth pattern, old node of each new node).
            std::vector<int> old;
            for (int & v : f) {
                auto it = std::find(old.begin(), old.end(), v);
                if (it == old.end()) {
                    old.push_back(v);
                    v = static_cast<int>(old.size()) - 1;
                }
                else {
                    v = static_cast<int>(it - old.begin());
                }
            }
            return {f, old};
        }

        auto induced(const ColouredGraph & g, const std::vector<int> & old) -> ColouredGraph
        {
            ColouredGraph h(static_cast<int>(old.size()));
            for (int x = 0; x < h.nodes; ++x)
                for (int y = 0; y < h.nodes; ++y)
                    h.edge[x * h.nodes + y] = g.label(old[x], old[y]);
            for (const auto & [tuple, mask] : g.yellow) {
                std::vector<int> t;
                for (int v : tuple) {
                    auto it = std::find(old.begin(), old.end(), v);
                    if (it == old.end())
                        break;
                    t.push_back(static_cast<int>(it - old.begin()));
                }
                if (t.size() == tuple.size()) {
                    std::sort(t.begin(), t.end());
                    h.yellow[t] = mask;
                }
            }
            return h;
        }

        auto atom_name(const std::vector<int> & f, const ColouredGraph & g) -> std::string
        {
            std::string s;
            for (int v : f)
                s += static_cast<char>('0' + v);
            s += ':';
            bool first = true;
            for (int x = 0; x < g.nodes; ++x)
                for (int y = x + 1; y < g.nodes; ++y) {
                    if (!first)
                        s += ',';
                    first = false;
                    s += g.label(x, y)->name();
                    auto it = g.yellow.find({x, y});
                    if (it != g.yellow.end())
                        s += "{" + std::to_string(it->second) + "}";
                }
            return s;
        }

        struct AtomKey
        {
            std::vector<int> f;
            std::vector<std::optional<Colour>> edge;
            std::map<std::vector<int>, std::uint64_t> yellow;
            friend auto operator<=>(const AtomKey &, const AtomKey &) = default;
        };
    }

    auto rainbow_ca_atoms(const Palette & p, std::size_t budget) -> RainbowCa
    {
        if (p.n != 3)
            throw UsageError("rainbow CA atoms are implemented for n = 3 only");
        if (p.tints.size() > 16)
            throw UsageError("at most 16 tints");
        std::vector<Colour> cols;
        for (const auto & c : p.colours())
            if (c.kind != ColourKind::shade_red)
                cols.push_back(c);
        const std::uint64_t shades = std::uint64_t{1} << p.tints.size();

        RainbowCa out;
        std::map<AtomKey, AtomId> index;
        auto add = [&](const std::vector<int> & f, const ColouredGraph & g) {
            if (out.graphs.size() >= budget)
                throw BudgetExceeded("rainbow CA atom budget exceeded", out.graphs.size() + 1);
            index.emplace(AtomKey{f, g.edge, g.yellow}, static_cast<AtomId>(out.graphs.size()));
            out.surjection.push_back(f);
            out.graphs.push_back(g);
        };

        for (const auto & f : patterns3) {
            const int k = *std::max_element(f.begin(), f.end()) + 1;
            std::vector<std::pair<int, int>> pairs;
            for (int x = 0; x < k; ++x)
                for (int y = x + 1; y < k; ++y)
                    pairs.push_back({x, y});
            ColouredGraph g(k);
            std::function<void(std::size_t)> edges = [&](std::size_t e) {
                if (e < pairs.size()) {
                    for (const auto & c : cols) {
                        g.set(pairs[e].first, pairs[e].second, c);
                        bool bad = false;
                        // triangles closed by this edge
                        if (pairs[e].second == 2 && pairs[e].first == 1)
                            bad = forbidden_triangle(g, 0, 1, 2);
                        if (!bad)
                            edges(e + 1);
                    }
                    g.edge[pairs[e].first * k + pairs[e].second].reset();
                    g.edge[pairs[e].second * k + pairs[e].first].reset();
                    return;
                }
                std::vector<std::vector<int>> free;
                for (auto [x, y] : pairs)
                    if (!g.label(x, y)->is_green())
                        free.push_back({x, y});
                std::function<void(std::size_t)> shade = [&](std::size_t i) {
                    if (i == free.size()) {
                        if (coloured_graph_check(g, p).empty())
                            add(f, g);
                        return;
                    }
                    for (std::uint64_t m = 0; m < shades; ++m) {
                        g.yellow[free[i]] = m;
                        shade(i + 1);
                    }
                    g.yellow.erase(free[i]);
                };
                shade(0);
            };
            edges(0);
        }

        const int n = 3;
        const std::size_t N = out.graphs.size();
        auto lookup = [&](const std::vector<int> & f, const ColouredGraph & g) -> AtomId {
            auto [pat, old] = relabel(f);
            auto h = induced(g, old);
            auto it = index.find(AtomKey{pat, h.edge, h.yellow});
            if (it == index.end())
                throw VerificationError("rainbow CA frame is not closed under substitution");
            return it->second;
        };

        CaAtomStructure::Data d;
        d.n = n;
        for (std::size_t a = 0; a < N; ++a)
            d.names.push_back(atom_name(out.surjection[a], out.graphs[a]));
        d.cls.assign(n, std::vector<int>(N));
        for (int i = 0; i < n; ++i) {
            int j = (i + 1) % n, k = (i + 2) % n;
            if (j > k)
                std::swap(j, k);
            using Key = std::tuple<bool, std::optional<Colour>, std::int64_t>;
            std::map<Key, int> ids;
            for (std::size_t a = 0; a < N; ++a) {
                const auto & f = out.surjection[a];
                const auto & g = out.graphs[a];
                Key key{f[j] == f[k], std::nullopt, -1};
                if (f[j] != f[k]) {
                    std::get<1>(key) = g.label(f[j], f[k]);
                    auto t = std::vector<int>{std::min(f[j], f[k]), std::max(f[j], f[k])};
                    auto it = g.yellow.find(t);
                    std::get<2>(key) = it == g.yellow.end() ? -1 : static_cast<std::int64_t>(it->second);
                }
                auto [it, fresh] = ids.emplace(key, 0);
                if (fresh)
                    it->second = static_cast<int>(ids.size()) - 1;
                d.cls[i][a] = it->second;
            }
            // class ids in order of first appearance
            std::map<int, int> dense;
            for (auto & c : d.cls[i]) {
                auto [it, fresh] = dense.emplace(c, static_cast<int>(dense.size()));
                c = it->second;
            }
        }
        d.diag.assign(n, std::vector<AtomSet>(n, AtomSet(N)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (std::size_t a = 0; a < N; ++a)
                    if (out.surjection[a][i] == out.surjection[a][j])
                        d.diag[i][j].insert(static_cast<AtomId>(a));
        d.transposition.assign(n, std::vector<std::vector<AtomId>>(n));
        d.replacement.assign(n, std::vector<std::vector<AtomId>>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j)
                    continue;
                if (i < j)
                    d.transposition[i][j].resize(N);
                d.replacement[i][j].resize(N);
                for (std::size_t a = 0; a < N; ++a) {
                    const auto & f = out.surjection[a];
                    if (i < j) {
                        auto t = f;
                        std::swap(t[i], t[j]);
                        d.transposition[i][j][a] = lookup(t, out.graphs[a]);
                    }
                    auto r = f;
                    r[i] = f[j];
                    d.replacement[i][j][a] = lookup(r, out.graphs[a]);
                }
            }
        d.doc = {{"rule", "rainbow-ca"}, {"params", {{"palette", p.to_json()}}}};
        out.structure = CaAtomStructure::from_data(std::move(d));
        return out;
    }
}
