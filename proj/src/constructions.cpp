#include "atomlab/constructions.hpp"

#include "atomlab/error.hpp"

#include <algorithm>
#include <sstream>

namespace atomlab
{
    namespace
    {
        auto graph_doc(const SimpleGraph & g) -> nlohmann::json
        {
            nlohmann::json edges = nlohmann::json::array();
            for (auto [u, v] : g.edges())
                edges.push_back({u, v});
            return {{"vertices", g.vertices()}, {"edges", edges}};
        }

        auto order_name(OrderKind k) -> std::string
        {
            switch (k) {
            case OrderKind::naturals:
                return "naturals";
            case OrderKind::reversed_naturals:
                return "reversed-naturals";
            case OrderKind::finite_chain:
                return "finite-chain";
            }
            return "finite-chain";
        }

        auto order_from(const nlohmann::json & j) -> LinearOrderSpec
        {
            LinearOrderSpec o;
            auto k = j.at("kind").get<std::string>();
            if (k == "naturals")
                o.kind = OrderKind::naturals;
            else if (k == "reversed-naturals")
                o.kind = OrderKind::reversed_naturals;
            else if (k == "finite-chain")
                o.kind = OrderKind::finite_chain;
            else
                throw StructuralError("unknown order kind " + k);
            o.t = j.at("t").get<int>();
            return o;
        }
    }

    auto monk_ra(const SimpleGraph & g, int colours) -> RaAtomStructure
    {
        if (colours < 2)
            throw UsageError("monk_ra needs at least 2 colours");
        const int v = g.vertices();
        if (v < 1)
            throw UsageError("monk_ra needs a nonempty graph");
        std::vector<std::string> names{"1'"};
        for (int x = 0; x < v; ++x)
            for (int c = 0; c < colours; ++c)
                names.push_back("(" + std::to_string(x) + "," + std::to_string(c) + ")");
        const auto n = names.size();
        std::vector<AtomId> conv(n);
        for (std::size_t a = 0; a < n; ++a)
            conv[a] = static_cast<AtomId>(a);
        auto rule = [g, colours](AtomId a, AtomId b, AtomId c) {
            if (a == 0 || b == 0 || c == 0) {
                if (a == 0)
                    return b == c;
                if (b == 0)
                    return a == c;
                return a == b;
            }
            const int va = (a - 1) / colours, ca = (a - 1) % colours;
            const int vb = (b - 1) / colours, cb = (b - 1) % colours;
            const int vc = (c - 1) / colours, cc = (c - 1) % colours;
            if (ca != cb || cb != cc)
                return true;
            return g.adjacent(va, vb) || g.adjacent(vb, vc) || g.adjacent(va, vc);
        };
        nlohmann::json doc = {{"rule", "monk"}, {"params", {{"graph", graph_doc(g)}, {"colours", colours}}}};
        return RaAtomStructure::from_rule(std::move(names), {0}, std::move(conv), rule, std::move(doc));
    }

    auto rainbow_ra(const LinearOrderSpec & greens, const LinearOrderSpec & reds, int copies) -> RaAtomStructure
    {
        greens.check();
        reds.check();
        if (copies < 1)
            throw UsageError("rainbow_ra needs at least one red copy");
        const int G = greens.size(), R = reds.size();

        // Atom layout: 0 = 1', 1..G greens, G+1 white, then reds by (j, k, s) with j <= k.
        struct Red
        {
            int j, k, s;
        };
        std::vector<std::string> names{"1'"};
        for (int i = 0; i < G; ++i)
            names.push_back("g" + std::to_string(i));
        names.push_back("w");
        std::vector<Red> red_of;
        for (int j = 0; j < R; ++j)
            for (int k = j; k < R; ++k)
                for (int s = 0; s < copies; ++s) {
                    red_of.push_back({j, k, s});
                    names.push_back("r" + std::to_string(s) + "_" + std::to_string(j) + std::to_string(k));
                }
        const auto n = names.size();
        std::vector<AtomId> conv(n);
        for (std::size_t a = 0; a < n; ++a)
            conv[a] = static_cast<AtomId>(a);

        const int white = G + 1, red0 = G + 2;
        auto is_green = [G](AtomId a) { return a >= 1 && a <= G; };
        auto is_red = [red0](AtomId a) { return a >= red0; };

        // Order-preserving partial function {(i,k),(j,l)} from greens to reds.
        auto op_pair = [greens, reds](int i, int k, int j, int l) {
            if (i == j)
                return k == l;
            if (greens.less(i, j))
                return reds.less(k, l);
            return reds.less(l, k);
        };

        auto rule = [=](AtomId a, AtomId b, AtomId c) {
            if (a == 0 || b == 0 || c == 0) {
                if (a == 0)
                    return b == c;
                if (b == 0)
                    return a == c;
                return a == b;
            }
            AtomId t[3] = {a, b, c};
            std::sort(t, t + 3);
            const int greens_in = is_green(t[0]) + is_green(t[1]) + is_green(t[2]);
            if (greens_in == 3)
                return false;
            if (greens_in == 2) {
                const int gi = t[0] - 1, gj = t[1] - 1;
                if (t[2] == white)
                    return gi != gj;
                if (is_red(t[2])) {
                    auto r = red_of[t[2] - red0];
                    return op_pair(gi, r.j, gj, r.k) || op_pair(gi, r.k, gj, r.j);
                }
                return true;
            }
            if (is_red(a) && is_red(b) && is_red(c)) {
                // Triangle x-y (a), y-z (b), x-z (c): some node indexing realises all three pairs.
                auto ra = red_of[a - red0], rb = red_of[b - red0], rc = red_of[c - red0];
                for (int flip = 0; flip < 2; ++flip) {
                    int x = flip ? ra.k : ra.j, y = flip ? ra.j : ra.k;
                    int z;
                    if (rb.j == y)
                        z = rb.k;
                    else if (rb.k == y)
                        z = rb.j;
                    else
                        continue;
                    if ((rc.j == x && rc.k == z) || (rc.j == z && rc.k == x))
                        return true;
                }
                return false;
            }
            return true;
        };
        nlohmann::json doc = {{"rule", "rainbow"},
                              {"params",
                               {{"greens", {{"kind", order_name(greens.kind)}, {"t", greens.t}}},
                                {"reds", {{"kind", order_name(reds.kind)}, {"t", reds.t}}},
                                {"copies", copies}}}};
        return RaAtomStructure::from_rule(std::move(names), {0}, std::move(conv), rule, std::move(doc));
    }

    auto evenly_distributed(long long i, long long j, long long k) -> bool
    {
        return 2 * i == j + k || 2 * j == i + k || 2 * k == i + j;
    }

    auto safe(const std::vector<AtomId> & U, const std::vector<AtomId> & V, const std::vector<AtomId> & W,
              const RaAtomStructure & base) -> bool
    {
        for (auto a : U)
            for (auto b : V)
                for (auto c : W)
                    if (!base.consistent(b, c, a))
                        return false;
        return true;
    }

    auto f_family_base(int i_size) -> RaAtomStructure
    {
        if (i_size < 2)
            throw UsageError("F(l,mu) base needs at least 2 atoms in I");
        // monk_ra(K_1, |I|): only monochromatic triangles are forbidden.
        auto m = monk_ra(SimpleGraph(1), i_size);
        std::vector<AtomId> conv(m.converse_map());
        auto rule = [m](AtomId a, AtomId b, AtomId c) { return m.consistent(a, b, c); };
        nlohmann::json doc = {{"rule", "maddux"}, {"params", {{"size", i_size}}}};
        return RaAtomStructure::from_rule(m.names(), m.identities(), conv, rule, std::move(doc));
    }

    auto f_family_spec(int l, int mu, int i_size, int t) -> BlurSpec
    {
        if (l < 1 || mu < 1 || i_size < l)
            throw UsageError("F(l,mu) needs 1 <= l <= |I| and mu >= 1");
        BlurSpec spec;
        spec.t = t;
        for (int p = 1; p <= i_size; ++p)
            spec.I.push_back(p);
        std::vector<int> pick(l);
        // Lexicographic l-subsets of I, each repeated mu times.
        for (int i = 0; i < l; ++i)
            pick[i] = i;
        while (true) {
            for (int c = 0; c < mu; ++c) {
                std::vector<AtomId> w;
                for (auto x : pick)
                    w.push_back(spec.I[x]);
                spec.J.push_back(w);
            }
            int i = l - 1;
            while (i >= 0 && pick[i] == i_size - l + i)
                --i;
            if (i < 0)
                break;
            ++pick[i];
            for (int q = i + 1; q < l; ++q)
                pick[q] = pick[q - 1] + 1;
        }
        return spec;
    }

    BlurIndex::BlurIndex(const BlurSpec & spec) : spec_(spec)
    {
        for (int w = 0; w < static_cast<int>(spec.J.size()); ++w) {
            auto members = spec.J[w];
            std::sort(members.begin(), members.end());
            members.erase(std::unique(members.begin(), members.end()), members.end());
            for (auto p : members) {
                slot_of_[{w, p}] = static_cast<int>(slots_.size());
                slots_.emplace_back(w, p);
            }
        }
    }

    auto BlurIndex::slot(int w, AtomId p) const -> int
    {
        auto it = slot_of_.find({w, p});
        if (it == slot_of_.end())
            throw StructuralError("colour " + std::to_string(p) + " is not in blur " + std::to_string(w));
        return it->second;
    }

    void check_blur_spec(const BlurSpec & spec, const RaAtomStructure & base)
    {
        if (spec.t < 3)
            throw UsageError("blur truncation t must be >= 3");
        if (spec.J.empty())
            throw UsageError("blur family J is empty");
        AtomSet covered(base.size()), iset(base.size());
        for (auto p : spec.I) {
            if (p < 0 || static_cast<std::size_t>(p) >= base.size() || base.is_identity(p))
                throw UsageError("I must consist of non-identity atoms of the base");
            iset.insert(p);
        }
        for (const auto & w : spec.J) {
            if (w.empty())
                throw UsageError("blur family J contains an empty blur");
            for (auto p : w) {
                if (p < 0 || static_cast<std::size_t>(p) >= base.size() || !iset.contains(p))
                    throw UsageError("blur member " + std::to_string(p) + " is not in I");
                covered.insert(p);
            }
        }
        if (covered != iset)
            throw UsageError("blur family J does not cover I");
        for (std::size_t a = 0; a < base.size(); ++a)
            if (base.converse(static_cast<AtomId>(a)) != static_cast<AtomId>(a))
                throw UsageError("blur base must have only self-converse atoms");
    }

    namespace
    {
        auto safe_table(const BlurSpec & spec, const RaAtomStructure & base) -> std::vector<std::vector<std::vector<char>>>
        {
            const auto m = spec.J.size();
            std::vector<std::vector<std::vector<char>>> t(m, std::vector<std::vector<char>>(m, std::vector<char>(m)));
            for (std::size_t s = 0; s < m; ++s)
                for (std::size_t z = 0; z < m; ++z)
                    for (std::size_t w = 0; w < m; ++w)
                        t[s][z][w] = safe(spec.J[s], spec.J[z], spec.J[w], base);
            return t;
        }
    }

    auto blur_structure(const BlurSpec & spec, const RaAtomStructure & base) -> RaAtomStructure
    {
        check_blur_spec(spec, base);
        BlurIndex idx(spec);
        const auto n = idx.size();
        std::vector<std::string> names{"Id"};
        for (int i = 0; i < spec.t; ++i)
            for (std::size_t s = 0; s < idx.slots(); ++s)
                names.push_back("a" + std::to_string(i) + "^{" + std::to_string(idx.slot_colour(static_cast<int>(s)))
                                + "," + std::to_string(idx.slot_block(static_cast<int>(s))) + "}");
        std::vector<AtomId> conv(n);
        for (std::size_t a = 0; a < n; ++a)
            conv[a] = static_cast<AtomId>(a);

        auto safes = safe_table(spec, base);
        const int slots = static_cast<int>(idx.slots());
        std::vector<int> block(slots);
        std::vector<AtomId> colour(slots);
        for (int s = 0; s < slots; ++s) {
            block[s] = idx.slot_block(s);
            colour[s] = idx.slot_colour(s);
        }
        const int t = spec.t;
        auto fill = [safes, block, colour, slots, t, base](AtomId a, AtomId b, std::uint64_t * row) {
            auto set = [row](long long c) { row[c >> 6] |= std::uint64_t{1} << (c & 63); };
            if (a == 0 || b == 0) {
                set(a == 0 ? b : a);
                return;
            }
            if (a == b)
                set(0);
            const int sa = (a - 1) % slots, sb = (b - 1) % slots;
            const long long i = (a - 1) / slots, j = (b - 1) / slots;
            long long ks[3];
            int nk = 0;
            for (long long k : {2 * i - j, 2 * j - i, (i + j) % 2 == 0 ? (i + j) / 2 : -1})
                if (k >= 0 && k < t)
                    ks[nk++] = k;
            for (int sc = 0; sc < slots; ++sc) {
                if (safes[block[sa]][block[sb]][block[sc]]) {
                    for (long long k = 0; k < t; ++k)
                        set(1 + k * slots + sc);
                }
                else if (base.consistent(colour[sa], colour[sb], colour[sc])) {
                    for (int q = 0; q < nk; ++q)
                        set(1 + ks[q] * slots + sc);
                }
            }
        };
        auto rule = [safes = std::move(safes), block, colour, slots, base](AtomId a, AtomId b, AtomId c) {
            if (a == 0 || b == 0 || c == 0) {
                if (a == 0)
                    return b == c;
                if (b == 0)
                    return a == c;
                return a == b;
            }
            const int sa = (a - 1) % slots, sb = (b - 1) % slots, sc = (c - 1) % slots;
            if (safes[block[sa]][block[sb]][block[sc]])
                return true;
            const int i = (a - 1) / slots, j = (b - 1) / slots, k = (c - 1) / slots;
            return evenly_distributed(i, j, k) && base.consistent(colour[sa], colour[sb], colour[sc]);
        };
        nlohmann::json doc = {{"rule", "blur"},
                              {"params", {{"I", spec.I}, {"J", spec.J}, {"t", spec.t}, {"base", nullptr}}}};
        if (!base.rule_doc().is_null())
            doc["params"]["base"] = base.rule_doc();
        return RaAtomStructure::from_rule(std::move(names), {0}, std::move(conv), rule, std::move(doc), fill);
    }

    auto blur_partition_h(const BlurSpec & spec, AtomId p) -> AtomSet
    {
        BlurIndex idx(spec);
        AtomSet r(idx.size());
        for (int i = 0; i < spec.t; ++i)
            for (std::size_t s = 0; s < idx.slots(); ++s)
                if (idx.slot_colour(static_cast<int>(s)) == p)
                    r.insert(1 + i * static_cast<int>(idx.slots()) + static_cast<int>(s));
        return r;
    }

    auto blur_partition_e(const BlurSpec & spec, int w) -> AtomSet
    {
        BlurIndex idx(spec);
        AtomSet r(idx.size());
        for (int i = 0; i < spec.t; ++i)
            for (std::size_t s = 0; s < idx.slots(); ++s)
                if (idx.slot_block(static_cast<int>(s)) == w)
                    r.insert(1 + i * static_cast<int>(idx.slots()) + static_cast<int>(s));
        return r;
    }

    namespace
    {
        auto list(const std::vector<AtomId> & v) -> std::string
        {
            std::string s = "{";
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + std::to_string(v[i]);
            return s + "}";
        }

        // Odometer over `len` digits in [0, base).
        auto next_tuple(std::vector<int> & v, int base) -> bool
        {
            for (std::size_t i = v.size(); i-- > 0;) {
                if (++v[i] < base)
                    return true;
                v[i] = 0;
            }
            return false;
        }
    }

    auto check_complex_blur(const BlurSpec & spec, const RaAtomStructure & base, int n, std::uint64_t budget)
        -> std::vector<BlurConditionResult>
    {
        std::vector<BlurConditionResult> out;
        const int m = static_cast<int>(spec.J.size());

        {
            BlurConditionResult r{1, true, ""};
            for (int w = 0; w < m; ++w)
                if (spec.J[w].empty()) {
                    r = {1, false, "blur " + std::to_string(w) + " is empty"};
                    break;
                }
            out.push_back(r);
        }
        {
            BlurConditionResult r{2, true, ""};
            std::set<AtomId> cov;
            for (const auto & w : spec.J)
                cov.insert(w.begin(), w.end());
            for (auto p : spec.I)
                if (!cov.count(p)) {
                    r = {2, false, "atom " + std::to_string(p) + " is in no blur"};
                    break;
                }
            out.push_back(r);
        }
        {
            BlurConditionResult r{3, true, ""};
            for (auto p : spec.I) {
                for (int w = 0; w < m && r.holds; ++w) {
                    AtomSet comp(base.size());
                    for (auto q : spec.J[w])
                        base.compose_into(p, q, comp);
                    for (auto x : spec.I)
                        if (!comp.contains(x)) {
                            r = {3, false, "atom " + std::to_string(x) + " not below " + std::to_string(p) + ";W"
                                               + std::to_string(w)};
                            break;
                        }
                }
                if (!r.holds)
                    break;
            }
            out.push_back(r);
        }
        {
            BlurConditionResult r{4, true, ""};
            const int free = 2 * (n - 1);
            long double steps = 1;
            for (int i = 0; i < free + 1; ++i)
                steps *= m;
            if (n < 2 || m == 0) {
                r.witness = "vacuous";
            }
            else if (steps > static_cast<long double>(budget)) {
                r.witness = "skipped";
            }
            else {
                auto safes = safe_table(spec, base);
                std::vector<int> vw(free, 0);  // V_2..V_n then W_2..W_n
                do {
                    bool found = false;
                    for (int t = 0; t < m && !found; ++t) {
                        bool all = true;
                        for (int i = 0; i < n - 1 && all; ++i)
                            all = safes[vw[i]][vw[n - 1 + i]][t];
                        found = all;
                    }
                    if (!found) {
                        std::ostringstream os;
                        os << "no T for V,W =";
                        for (auto x : vw)
                            os << ' ' << list(spec.J[x]);
                        r = {4, false, os.str()};
                        break;
                    }
                } while (next_tuple(vw, m));
            }
            out.push_back(r);
        }
        {
            BlurConditionResult r{5, true, ""};
            const int ni = static_cast<int>(spec.I.size());
            const int free = 2 * (n - 1);
            if (n >= 2 && ni > 0) {
                std::vector<int> pq(free, 0);  // P_2..P_n then Q_2..Q_n
                do {
                    AtomSet meet = AtomSet::full(base.size());
                    for (int i = 0; i < n - 1; ++i)
                        meet &= base.compose(spec.I[pq[i]], spec.I[pq[n - 1 + i]]);
                    for (int w = 0; w < m; ++w) {
                        bool hit = false;
                        for (auto x : spec.J[w])
                            hit = hit || meet.contains(x);
                        if (!hit) {
                            r = {5, false, "blur " + std::to_string(w) + " misses the meet of P_i;Q_i"};
                            break;
                        }
                    }
                    if (!r.holds)
                        break;
                } while (next_tuple(pq, ni));
            }
            out.push_back(r);
        }
        return out;
    }

    auto structure_from_rule(const nlohmann::json & doc) -> RaAtomStructure
    {
        const auto rule = doc.at("rule").get<std::string>();
        const auto & p = doc.at("params");
        if (rule == "monk") {
            const auto & gd = p.at("graph");
            SimpleGraph g(gd.at("vertices").get<int>());
            for (const auto & e : gd.at("edges"))
                g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
            return monk_ra(g, p.at("colours").get<int>());
        }
        if (rule == "rainbow")
            return rainbow_ra(order_from(p.at("greens")), order_from(p.at("reds")), p.at("copies").get<int>());
        if (rule == "maddux")
            return f_family_base(p.at("size").get<int>());
        if (rule == "blur") {
            if (p.at("base").is_null())
                throw StructuralError("blur document lacks a rule-defined base");
            BlurSpec spec;
            spec.I = p.at("I").get<std::vector<AtomId>>();
            spec.J = p.at("J").get<std::vector<std::vector<AtomId>>>();
            spec.t = p.at("t").get<int>();
            return blur_structure(spec, structure_from_rule(p.at("base")));
        }
        throw StructuralError("unknown consistency rule '" + rule + "'");
    }
}
