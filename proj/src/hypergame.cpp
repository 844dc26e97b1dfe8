// The game H on hypernetworks: cylindrifier, transformation and amalgamation moves, with the
// hyperlabels of exists' replies forced by the neatness rule.
#include "atomlab/games.hpp"

#include "atomlab/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_map>

namespace atomlab
{
    namespace
    {
        auto len_bound(const CaAtomStructure & f, int max_len) -> int { return max_len > 0 ? max_len : f.dim() + 1; }

        // Calls fn on every tuple of length len over 0..p-1, lexicographically.
        template <typename Fn>
        void each_tuple(int p, int len, Fn && fn)
        {
            if (p == 0)
                return;
            std::vector<int> t(len, 0);
            while (true) {
                fn(t);
                int i = len - 1;
                while (i >= 0 && ++t[i] == p)
                    t[i--] = 0;
                if (i < 0)
                    return;
            }
        }

        // Class id (least member position) of every node under the closure of ~.
        auto similarity_classes(const CaAtomStructure & f, const Network & N) -> std::vector<int>
        {
            const int n = f.dim();
            const int p = N.size();
            std::vector<int> parent(p);
            std::iota(parent.begin(), parent.end(), 0);
            std::function<int(int)> root = [&](int x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
            if (n >= 2)
                each_tuple(p, n, [&](const std::vector<int> & t) {
                    if (t[0] == t[1])
                        return;
                    std::size_t idx = 0;
                    for (int v : t)
                        idx = idx * p + v;
                    if (f.diagonal(0, 1).contains(N.label[idx])) {
                        int a = root(t[0]), b = root(t[1]);
                        if (a != b)
                            parent[std::max(a, b)] = std::min(a, b);
                    }
                });
            std::vector<int> cls(p);
            for (int x = 0; x < p; ++x)
                cls[x] = root(x);
            return cls;
        }

        auto distinct_count(std::vector<int> v) -> int
        {
            std::sort(v.begin(), v.end());
            return static_cast<int>(std::unique(v.begin(), v.end()) - v.begin());
        }

        auto lookup_label(const HyperNetwork & N, const std::vector<int> & x, int lambda) -> int
        {
            auto it = N.h.find(x);
            return it == N.h.end() ? lambda : it->second;
        }

        auto inside(const Network & N, const std::vector<int> & x) -> bool
        {
            return std::all_of(x.begin(), x.end(), [&](int v) { return N.has(v); });
        }

        auto hyper_less(const HyperNetwork & a, const HyperNetwork & b) -> bool
        {
            if (a.a != b.a)
                return a.a < b.a;
            return a.h < b.h;
        }

        auto kind_name(HyperMoveKind k) -> std::string
        {
            switch (k) {
                case HyperMoveKind::initial:
                    return "initial";
                case HyperMoveKind::cylindrifier:
                    return "cylindrifier";
                case HyperMoveKind::transformation:
                    return "transformation";
                case HyperMoveKind::amalgamation:
                    return "amalgamation";
            }
            return "initial";
        }

        auto graph_spec() -> GameSpec
        {
            GameSpec g;
            g.kind = GameKind::G;
            g.node_budget = 1 << 20;
            g.exec = Exec::serial;
            return g;
        }

        auto all_nodes(const std::vector<HyperNetwork> & history) -> std::vector<int>
        {
            std::set<int> u;
            for (const auto & H : history)
                u.insert(H.a.nodes.begin(), H.a.nodes.end());
            return {u.begin(), u.end()};
        }
    }

    auto HyperNetwork::to_json() const -> nlohmann::json
    {
        nlohmann::json hs = nlohmann::json::array(), os = nlohmann::json::array(), es = nlohmann::json::array();
        for (const auto & [x, l] : h)
            hs.push_back({{"edge", x}, {"label", l}});
        for (const auto & [e, p] : owner)
            os.push_back({{"edge", {e.first, e.second}}, {"owner", player_name(p)}});
        for (const auto & [x, v] : envelope)
            es.push_back({{"edge", x}, {"nodes", v}});
        return {{"network", a.to_json()}, {"hyperedges", hs}, {"owners", os}, {"envelopes", es}};
    }

    auto HyperNetwork::from_json(const nlohmann::json & j) -> HyperNetwork
    {
        try {
            HyperNetwork H;
            H.a = Network::from_json(j.at("network"));
            for (const auto & e : j.at("hyperedges"))
                H.h[e.at("edge").get<std::vector<int>>()] = e.at("label").get<int>();
            for (const auto & e : j.at("owners")) {
                auto xy = e.at("edge").get<std::vector<int>>();
                if (xy.size() != 2)
                    throw StructuralError("owner edge must have two nodes");
                auto who = e.at("owner").get<std::string>();
                if (who != "exists" && who != "forall")
                    throw StructuralError("unknown owner " + who);
                H.owner[{xy[0], xy[1]}] = who == "exists" ? Player::exists : Player::forall;
            }
            for (const auto & e : j.at("envelopes"))
                H.envelope[e.at("edge").get<std::vector<int>>()] = e.at("nodes").get<std::vector<int>>();
            return H;
        }
        catch (const nlohmann::json::exception & e) {
            throw StructuralError(std::string("bad hypernetwork document: ") + e.what());
        }
    }

    auto HyperMove::to_json() const -> nlohmann::json
    {
        nlohmann::json j{{"kind", kind_name(kind)}};
        switch (kind) {
            case HyperMoveKind::initial:
                j["atom"] = atom;
                break;
            case HyperMoveKind::cylindrifier:
                j["net"] = net;
                j["face"] = face;
                j["l"] = l;
                j["k"] = k;
                j["b"] = b;
                break;
            case HyperMoveKind::transformation: {
                j["net"] = net;
                nlohmann::json t = nlohmann::json::array();
                for (auto [x, y] : theta)
                    t.push_back({x, y});
                j["theta"] = t;
                break;
            }
            case HyperMoveKind::amalgamation:
                j["net"] = net;
                j["net2"] = net2;
                break;
        }
        return j;
    }

    auto HyperMove::from_json(const nlohmann::json & j) -> HyperMove
    {
        try {
            HyperMove m;
            auto k = j.at("kind").get<std::string>();
            if (k == "initial") {
                m.kind = HyperMoveKind::initial;
                m.atom = j.at("atom").get<AtomId>();
            }
            else if (k == "cylindrifier") {
                m.kind = HyperMoveKind::cylindrifier;
                m.net = j.at("net").get<int>();
                m.face = j.at("face").get<std::vector<int>>();
                m.l = j.at("l").get<int>();
                m.k = j.at("k").get<int>();
                m.b = j.at("b").get<AtomId>();
            }
            else if (k == "transformation") {
                m.kind = HyperMoveKind::transformation;
                m.net = j.at("net").get<int>();
                for (const auto & p : j.at("theta"))
                    m.theta.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
            }
            else if (k == "amalgamation") {
                m.kind = HyperMoveKind::amalgamation;
                m.net = j.at("net").get<int>();
                m.net2 = j.at("net2").get<int>();
            }
            else {
                throw StructuralError("unknown hypergame move kind " + k);
            }
            return m;
        }
        catch (const nlohmann::json::exception & e) {
            throw StructuralError(std::string("bad hypergame move: ") + e.what());
        }
    }

    auto hyper_similar(const CaAtomStructure & f, const Network & N, int x, int y) -> bool
    {
        auto cls = similarity_classes(f, N);
        int px = N.pos(x), py = N.pos(y);
        if (px < 0 || py < 0)
            throw StructuralError("node is not on the board");
        return cls[px] == cls[py];
    }

    auto hyperedge_short(const CaAtomStructure & f, const Network & N, const std::vector<int> & x) -> bool
    {
        auto cls = similarity_classes(f, N);
        std::vector<int> c;
        for (int v : x) {
            int q = N.pos(v);
            if (q < 0)
                throw StructuralError("node is not on the board");
            c.push_back(cls[q]);
        }
        return distinct_count(c) <= f.dim();
    }

    auto hyperedge_classify(const CaAtomStructure & f, const HyperNetwork & N, int lambda, int max_len)
        -> std::vector<HyperedgeInfo>
    {
        const int L = len_bound(f, max_len);
        auto cls = similarity_classes(f, N.a);
        std::vector<HyperedgeInfo> out;
        for (int len = 1; len <= L; ++len)
            each_tuple(N.a.size(), len, [&](const std::vector<int> & t) {
                HyperedgeInfo info;
                std::vector<int> c;
                for (int q : t) {
                    info.edge.push_back(N.a.nodes[q]);
                    c.push_back(cls[q]);
                }
                info.is_short = distinct_count(c) <= f.dim();
                info.label = info.is_short ? lambda : lookup_label(N, info.edge, lambda);
                if (!info.is_short) {
                    auto it = N.envelope.find(info.edge);
                    if (it != N.envelope.end())
                        info.envelope = it->second;
                }
                out.push_back(std::move(info));
            });
        return out;
    }

    auto hypernetwork_violation(const CaAtomStructure & f, const HyperNetwork & N, int lambda, int max_len)
        -> std::optional<std::string>
    {
        const int n = f.dim();
        const int L = len_bound(f, max_len);
        if (auto why = network_violation(f, N.a))
            return why;
        auto cls = similarity_classes(f, N.a);
        for (const auto & [x, lab] : N.h) {
            if (static_cast<int>(x.size()) > L)
                return "hyperedge longer than the bound";
            if (!inside(N.a, x))
                return "hyperedge through a node off the board";
        }
        std::map<std::vector<int>, int> by_class;
        std::optional<std::string> bad;
        for (int len = n + 1; len <= L && !bad; ++len)
            each_tuple(N.a.size(), len, [&](const std::vector<int> & t) {
                if (bad)
                    return;
                std::vector<int> x, c;
                for (int q : t) {
                    x.push_back(N.a.nodes[q]);
                    c.push_back(cls[q]);
                }
                bool is_short = distinct_count(c) <= n;
                auto it = N.h.find(x);
                if (is_short) {
                    if (it != N.h.end() && it->second != lambda)
                        bad = "short hyperedge not labelled lambda";
                    return;
                }
                if (it == N.h.end()) {
                    bad = "long hyperedge without a label";
                    return;
                }
                auto [jt, fresh] = by_class.emplace(c, it->second);
                if (!fresh && jt->second != it->second)
                    bad = "similar hyperedges with different labels";
            });
        if (bad)
            return bad;
        for (const auto & [x, lab] : N.h)
            if (static_cast<int>(x.size()) <= n)
                return "label stored on a short hyperedge";
        return std::nullopt;
    }

    auto hyper_relabel(const CaAtomStructure & f, const HyperSpec & spec, const std::vector<HyperNetwork> & history,
                       const Network & a, const std::vector<const HyperNetwork *> & inherit)
        -> std::optional<HyperNetwork>
    {
        const int n = f.dim();
        const int L = len_bound(f, spec.max_hyperedge);
        std::set<int> used{spec.lambda};
        for (const auto & H : history)
            for (const auto & [x, lab] : H.h)
                used.insert(lab);
        auto cls = similarity_classes(f, a);
        HyperNetwork out;
        out.a = a;
        std::map<std::vector<int>, int> by_class;
        std::vector<std::pair<std::vector<int>, std::vector<int>>> pending;
        bool bad = false;
        for (int len = n + 1; len <= L && !bad; ++len)
            each_tuple(a.size(), len, [&](const std::vector<int> & t) {
                if (bad)
                    return;
                std::vector<int> x, c;
                for (int q : t) {
                    x.push_back(a.nodes[q]);
                    c.push_back(cls[q]);
                }
                std::optional<int> req;
                for (const HyperNetwork * H : inherit) {
                    if (!inside(H->a, x))
                        continue;
                    int lab = lookup_label(*H, x, spec.lambda);
                    if (req && *req != lab) {
                        bad = true;
                        return;
                    }
                    req = lab;
                }
                if (distinct_count(c) <= n) {
                    if (req && *req != spec.lambda)
                        bad = true;
                    return;
                }
                if (!req) {
                    pending.emplace_back(x, c);
                    return;
                }
                auto [it, fresh] = by_class.emplace(c, *req);
                if (!fresh && it->second != *req)
                    bad = true;
                out.h[x] = *req;
            });
        if (bad)
            return std::nullopt;
        int next = 0;
        for (auto & [x, c] : pending) {
            auto it = by_class.find(c);
            if (it == by_class.end()) {
                while (used.count(next))
                    ++next;
                used.insert(next);
                it = by_class.emplace(c, next).first;
            }
            out.h[x] = it->second;
        }
        return out;
    }

    auto hyper_moves(const CaAtomStructure & f, const HyperSpec & spec, const std::vector<HyperNetwork> & history)
        -> std::vector<HyperMove>
    {
        const int n = f.dim();
        std::vector<HyperMove> out;
        if (history.empty()) {
            for (std::size_t a = 0; a < f.size(); ++a) {
                HyperMove m;
                m.kind = HyperMoveKind::initial;
                m.atom = static_cast<AtomId>(a);
                out.push_back(m);
            }
            return out;
        }
        auto U = all_nodes(history);
        const int fresh = U.empty() ? 0 : U.back() + 1;
        auto G = graph_spec();
        for (std::size_t i = 0; i < history.size(); ++i) {
            const Network & N = history[i].a;
            std::vector<int> ks;
            if (spec.amalgamations)
                for (int v : U)
                    if (!N.has(v))
                        ks.push_back(v);
            ks.push_back(fresh);
            std::set<std::tuple<std::vector<int>, int, AtomId>> seen;
            for (const auto & mv : legal_moves(f, G, &N)) {
                if (!seen.insert({mv.face, mv.l, mv.b}).second)
                    continue;
                for (int k : ks) {
                    if (k >= spec.node_budget)
                        throw BudgetExceeded("hypergame node budget exceeded", static_cast<unsigned long long>(k + 1));
                    HyperMove m;
                    m.kind = HyperMoveKind::cylindrifier;
                    m.net = static_cast<int>(i);
                    m.face = mv.face;
                    m.l = mv.l;
                    m.k = k;
                    m.b = mv.b;
                    out.push_back(std::move(m));
                }
            }
            if (spec.transformations) {
                // domains from the played nodes plus one fresh node, of size |N| or |N| + 1
                std::vector<int> pool = U;
                if (fresh < spec.node_budget)
                    pool.push_back(fresh);
                const int p = N.size();
                const int q = static_cast<int>(pool.size());
                for (int size = p; size <= p + 1 && size <= q; ++size) {
                    std::vector<bool> pick(q, false);
                    std::fill(pick.end() - size, pick.end(), true);
                    do {
                        std::vector<int> D;
                        for (int j = 0; j < q; ++j)
                            if (pick[j])
                                D.push_back(pool[j]);
                        each_tuple(p, size, [&](const std::vector<int> & img) {
                            if (distinct_count(img) != p)
                                return;
                            HyperMove m;
                            m.kind = HyperMoveKind::transformation;
                            m.net = static_cast<int>(i);
                            for (int j = 0; j < size; ++j)
                                m.theta.emplace_back(D[j], N.nodes[img[j]]);
                            out.push_back(std::move(m));
                        });
                    } while (std::next_permutation(pick.begin(), pick.end()));
                }
            }
        }
        if (spec.amalgamations)
            for (std::size_t i = 0; i < history.size(); ++i)
                for (std::size_t j = i + 1; j < history.size(); ++j) {
                    const auto & M = history[i];
                    const auto & N = history[j];
                    std::vector<int> common;
                    std::set_intersection(M.a.nodes.begin(), M.a.nodes.end(), N.a.nodes.begin(), N.a.nodes.end(),
                                          std::back_inserter(common));
                    if (common.empty())
                        continue;
                    bool agree = true;
                    each_tuple(static_cast<int>(common.size()), n, [&](const std::vector<int> & t) {
                        std::vector<int> x;
                        for (int q : t)
                            x.push_back(common[q]);
                        agree = agree && M.a.at(x) == N.a.at(x);
                    });
                    for (int len = n + 1; agree && len <= len_bound(f, spec.max_hyperedge); ++len)
                        each_tuple(static_cast<int>(common.size()), len, [&](const std::vector<int> & t) {
                            std::vector<int> x;
                            for (int q : t)
                                x.push_back(common[q]);
                            agree = agree && lookup_label(M, x, spec.lambda) == lookup_label(N, x, spec.lambda);
                        });
                    if (!agree)
                        continue;
                    HyperMove m;
                    m.kind = HyperMoveKind::amalgamation;
                    m.net = static_cast<int>(i);
                    m.net2 = static_cast<int>(j);
                    out.push_back(m);
                }
        return out;
    }

    auto hyper_responses(const CaAtomStructure & f, const HyperSpec & spec, const std::vector<HyperNetwork> & history,
                         const HyperMove & mv) -> std::vector<HyperNetwork>
    {
        const int n = f.dim();
        const int L = len_bound(f, spec.max_hyperedge);
        auto G = graph_spec();
        std::vector<HyperNetwork> out;
        auto net_at = [&](int i) -> const HyperNetwork & {
            if (i < 0 || static_cast<std::size_t>(i) >= history.size())
                throw VerificationError("move refers to an unplayed hypernetwork");
            return history[i];
        };
        switch (mv.kind) {
            case HyperMoveKind::initial: {
                if (!history.empty())
                    throw VerificationError("initial move after the first round");
                Move m;
                m.initial = true;
                m.atom = mv.atom;
                for (auto & N0 : responses(f, G, nullptr, m)) {
                    auto H = hyper_relabel(f, spec, history, N0, {});
                    if (!H)
                        continue;
                    for (int x : N0.nodes)
                        for (int y : N0.nodes)
                            if (x < y)
                                H->owner[{x, y}] = Player::forall;
                    out.push_back(std::move(*H));
                }
                break;
            }
            case HyperMoveKind::cylindrifier: {
                const auto & N = net_at(mv.net);
                if (N.a.has(mv.k))
                    throw VerificationError("k must be off the chosen hypernetwork");
                Move m{false, -1, mv.face, mv.l, mv.k, mv.b};
                for (auto & M : responses(f, G, &N.a, m)) {
                    auto H = hyper_relabel(f, spec, history, M, {&N});
                    if (!H)
                        continue;
                    for (int x : M.nodes)
                        for (int y : M.nodes) {
                            if (x >= y)
                                continue;
                            if (x != mv.k && y != mv.k) {
                                auto it = N.owner.find({x, y});
                                H->owner[{x, y}] = it == N.owner.end() ? Player::exists : it->second;
                            }
                            else {
                                int other = x == mv.k ? y : x;
                                bool in_face = std::count(mv.face.begin(), mv.face.end(), other) > 0;
                                H->owner[{x, y}] = in_face ? Player::forall : Player::exists;
                            }
                        }
                    for (const auto & [x, lab] : H->h) {
                        auto it = N.envelope.find(x);
                        bool through_k = std::count(x.begin(), x.end(), mv.k) > 0;
                        H->envelope[x] = !through_k && it != N.envelope.end() ? it->second : M.nodes;
                    }
                    out.push_back(std::move(*H));
                }
                break;
            }
            case HyperMoveKind::transformation: {
                const auto & N = net_at(mv.net);
                std::map<int, int> th(mv.theta.begin(), mv.theta.end());
                std::set<int> image;
                for (auto [x, y] : mv.theta) {
                    if (!N.a.has(y))
                        throw VerificationError("theta maps outside the chosen hypernetwork");
                    image.insert(y);
                }
                if (th.size() != mv.theta.size() || static_cast<int>(image.size()) != N.a.size())
                    throw VerificationError("theta is not a surjection onto the hypernetwork");
                HyperNetwork H;
                H.a.n = n;
                for (auto [x, y] : th)
                    H.a.nodes.push_back(x);
                const int p = H.a.size();
                each_tuple(p, n, [&](const std::vector<int> & t) {
                    std::vector<int> y;
                    for (int q : t)
                        y.push_back(th[H.a.nodes[q]]);
                    H.a.label.push_back(N.a.at(y));
                });
                auto cls = similarity_classes(f, H.a);
                for (int len = n + 1; len <= L; ++len)
                    each_tuple(p, len, [&](const std::vector<int> & t) {
                        std::vector<int> x, y, c;
                        for (int q : t) {
                            x.push_back(H.a.nodes[q]);
                            y.push_back(th[H.a.nodes[q]]);
                            c.push_back(cls[q]);
                        }
                        if (distinct_count(c) <= n)
                            return;
                        H.h[x] = lookup_label(N, y, spec.lambda);
                        std::vector<int> env;
                        auto it = N.envelope.find(y);
                        if (it != N.envelope.end())
                            for (auto [u, v] : th)
                                if (std::count(it->second.begin(), it->second.end(), v))
                                    env.push_back(u);
                        H.envelope[x] = env;
                    });
                for (int x : H.a.nodes)
                    for (int y : H.a.nodes) {
                        if (x >= y)
                            continue;
                        int u = th[x], v = th[y];
                        auto it = N.owner.find({std::min(u, v), std::max(u, v)});
                        H.owner[{x, y}] = u != v && it != N.owner.end() ? it->second : Player::forall;
                    }
                if (!network_violation(f, H.a))
                    out.push_back(std::move(H));
                break;
            }
            case HyperMoveKind::amalgamation: {
                const auto & M = net_at(mv.net);
                const auto & N = net_at(mv.net2);
                for (auto & A : network_amalgams(f, M.a, N.a)) {
                    auto H = hyper_relabel(f, spec, history, A, {&M, &N});
                    if (!H)
                        continue;
                    for (int x : A.nodes)
                        for (int y : A.nodes) {
                            if (x >= y)
                                continue;
                            auto im = M.owner.find({x, y});
                            auto in = N.owner.find({x, y});
                            bool forall = (im != M.owner.end() && im->second == Player::forall) ||
                                          (in != N.owner.end() && in->second == Player::forall);
                            H->owner[{x, y}] = forall ? Player::forall : Player::exists;
                        }
                    for (const auto & [x, lab] : H->h) {
                        const HyperNetwork * src = inside(M.a, x) ? &M : inside(N.a, x) ? &N : nullptr;
                        auto it = src ? src->envelope.find(x) : M.envelope.end();
                        H->envelope[x] = src && it != src->envelope.end() ? it->second : A.nodes;
                    }
                    out.push_back(std::move(*H));
                }
                break;
            }
        }
        std::sort(out.begin(), out.end(), hyper_less);
        return out;
    }

    namespace
    {
        auto board_key(const HyperNetwork & H) -> std::string
        {
            std::string k;
            for (int v : H.a.nodes) {
                k += std::to_string(v);
                k.push_back(',');
            }
            k.push_back('|');
            for (AtomId a : H.a.label) {
                k += std::to_string(a);
                k.push_back(',');
            }
            k.push_back('|');
            for (const auto & [x, lab] : H.h) {
                for (int v : x) {
                    k += std::to_string(v);
                    k.push_back('.');
                }
                k += std::to_string(lab);
                k.push_back(';');
            }
            // owners and envelopes do not change the outcome but are part of the board
            k.push_back('|');
            for (const auto & [e, p] : H.owner)
                k += std::to_string(e.first) + "-" + std::to_string(e.second) + (p == Player::forall ? "a" : "e");
            k.push_back('|');
            for (const auto & [x, v] : H.envelope) {
                for (int u : x)
                    k += std::to_string(u) + ".";
                k.push_back(':');
                for (int u : v)
                    k += std::to_string(u) + ".";
                k.push_back(';');
            }
            return k;
        }

        auto state_key(const std::vector<HyperNetwork> & history, int rounds) -> std::string
        {
            std::string k = std::to_string(rounds);
            for (const auto & H : history) {
                k.push_back('#');
                k += board_key(H);
            }
            return k;
        }

        class HyperSolver
        {
        public:
            struct Entry
            {
                bool win = true;
                int move = -1;             // forall's winning move
                std::vector<int> replies;  // exists' reply per forall move
            };

            HyperSolver(const CaAtomStructure & f, const HyperSpec & spec) : f_(f), spec_(spec) {}

            auto wins(std::vector<HyperNetwork> & history, int rounds) -> bool
            {
                if (rounds == 0)
                    return true;
                auto key = state_key(history, rounds);
                if (auto it = memo_.find(key); it != memo_.end())
                    return it->second.win;
                if (memo_.size() >= spec_.state_budget)
                    throw BudgetExceeded("hypergame state budget exceeded", memo_.size());
                Entry e;
                auto moves = hyper_moves(f_, spec_, history);
                e.replies.assign(moves.size(), -1);
                for (std::size_t i = 0; i < moves.size(); ++i) {
                    auto reps = hyper_responses(f_, spec_, history, moves[i]);
                    for (std::size_t r = 0; r < reps.size(); ++r) {
                        history.push_back(std::move(reps[r]));
                        bool ok = wins(history, rounds - 1);
                        history.pop_back();
                        if (ok) {
                            e.replies[i] = static_cast<int>(r);
                            break;
                        }
                    }
                    if (e.replies[i] < 0) {
                        e.win = false;
                        e.move = static_cast<int>(i);
                        e.replies.clear();
                        break;
                    }
                }
                memo_.emplace(std::move(key), e);
                return e.win;
            }

            auto entry(const std::vector<HyperNetwork> & history, int rounds) const -> const Entry &
            {
                return memo_.at(state_key(history, rounds));
            }

            auto states() const -> std::size_t { return memo_.size(); }

        private:
            const CaAtomStructure & f_;
            HyperSpec spec_;
            std::unordered_map<std::string, Entry> memo_;
        };

        class HyperCertWriter
        {
        public:
            HyperCertWriter(const CaAtomStructure & f, const HyperSpec & spec, const HyperSolver & s) :
                f_(f), spec_(spec), s_(s)
            {
            }

            auto board(const HyperNetwork & H) -> int
            {
                auto [it, fresh] = board_ids_.emplace(board_key(H), static_cast<int>(boards_.size()));
                if (fresh)
                    boards_.push_back(H.to_json());
                return it->second;
            }

            auto position(std::vector<HyperNetwork> & history, int rounds) -> int
            {
                auto key = state_key(history, rounds);
                if (auto it = pos_ids_.find(key); it != pos_ids_.end())
                    return it->second;
                const int id = static_cast<int>(positions_.size());
                pos_ids_.emplace(key, id);
                positions_.push_back(nullptr);
                nlohmann::json p{{"id", id}, {"rounds", rounds}};
                nlohmann::json hist = nlohmann::json::array();
                for (const auto & H : history)
                    hist.push_back(board(H));
                p["history"] = hist;
                if (rounds > 0) {
                    const auto & e = s_.entry(history, rounds);
                    auto moves = hyper_moves(f_, spec_, history);
                    if (e.win) {
                        nlohmann::json ms = nlohmann::json::array();
                        for (std::size_t i = 0; i < moves.size(); ++i) {
                            auto reps = hyper_responses(f_, spec_, history, moves[i]);
                            const auto & r = reps.at(e.replies[i]);
                            nlohmann::json m{{"move", moves[i].to_json()}, {"reply", board(r)}};
                            history.push_back(r);
                            m["child"] = position(history, rounds - 1);
                            history.pop_back();
                            ms.push_back(std::move(m));
                        }
                        p["moves"] = ms;
                    }
                    else {
                        const auto & mv = moves.at(e.move);
                        p["move"] = mv.to_json();
                        nlohmann::json rs = nlohmann::json::array();
                        for (auto & r : hyper_responses(f_, spec_, history, mv)) {
                            nlohmann::json m{{"reply", board(r)}};
                            history.push_back(r);
                            m["child"] = position(history, rounds - 1);
                            history.pop_back();
                            rs.push_back(std::move(m));
                        }
                        p["replies"] = rs;
                    }
                }
                positions_[id] = std::move(p);
                return id;
            }

            auto boards() const -> const nlohmann::json & { return boards_; }
            auto positions() const -> const nlohmann::json & { return positions_; }

        private:
            const CaAtomStructure & f_;
            HyperSpec spec_;
            const HyperSolver & s_;
            std::map<std::string, int> board_ids_;
            std::map<std::string, int> pos_ids_;
            nlohmann::json boards_ = nlohmann::json::array();
            nlohmann::json positions_ = nlohmann::json::array();
        };

        auto spec_json(const HyperSpec & spec) -> nlohmann::json
        {
            return {{"rounds", spec.rounds},
                    {"lambda", spec.lambda},
                    {"max_hyperedge", spec.max_hyperedge},
                    {"node_budget", spec.node_budget},
                    {"transformations", spec.transformations},
                    {"amalgamations", spec.amalgamations}};
        }
    }

    auto solve_hypergame(const CaAtomStructure & f, const HyperSpec & spec, const std::vector<HyperNetwork> & start)
        -> HyperSolveResult
    {
        if (spec.rounds < 0)
            throw UsageError("rounds must be non-negative");
        for (const auto & H : start)
            if (auto why = hypernetwork_violation(f, H, spec.lambda, spec.max_hyperedge))
                throw StructuralError("start position: " + *why);
        HyperSolver s(f, spec);
        std::vector<HyperNetwork> history = start;
        HyperSolveResult res;
        res.winner = s.wins(history, spec.rounds) ? Player::exists : Player::forall;
        res.positions = s.states();
        HyperCertWriter w(f, spec, s);
        nlohmann::json st = nlohmann::json::array();
        for (const auto & H : start)
            st.push_back(w.board(H));
        w.position(history, spec.rounds);
        res.certificate = {{"schema_version", 1},
                           {"type", "hypergame-certificate"},
                           {"n", f.dim()},
                           {"atoms", f.size()},
                           {"spec", spec_json(spec)},
                           {"winner", player_name(res.winner)},
                           {"start", st},
                           {"boards", w.boards()},
                           {"positions", w.positions()}};
        return res;
    }

    auto replay_hyper_certificate(const CaAtomStructure & f, const nlohmann::json & cert) -> ReplayReport
    {
        ReplayReport rep;
        try {
            if (cert.at("type") != "hypergame-certificate")
                throw StructuralError("not a hypergame certificate");
            if (cert.at("atoms").get<std::size_t>() != f.size() || cert.at("n").get<int>() != f.dim())
                throw StructuralError("certificate belongs to a different structure");
            const auto & sj = cert.at("spec");
            HyperSpec spec;
            spec.rounds = sj.at("rounds").get<int>();
            spec.lambda = sj.at("lambda").get<int>();
            spec.max_hyperedge = sj.at("max_hyperedge").get<int>();
            spec.node_budget = sj.at("node_budget").get<int>();
            spec.transformations = sj.at("transformations").get<bool>();
            spec.amalgamations = sj.at("amalgamations").get<bool>();
            const bool ew = cert.at("winner") == "exists";
            std::vector<HyperNetwork> boards;
            for (const auto & b : cert.at("boards")) {
                auto H = HyperNetwork::from_json(b);
                if (auto why = check::network_ok(f, H.a))
                    throw VerificationError("board " + std::to_string(boards.size()) + ": " + *why);
                if (auto why = hypernetwork_violation(f, H, spec.lambda, spec.max_hyperedge))
                    throw VerificationError("board " + std::to_string(boards.size()) + ": " + *why);
                boards.push_back(std::move(H));
            }
            auto board_at = [&](const nlohmann::json & id) -> const HyperNetwork & {
                int i = id.get<int>();
                if (i < 0 || static_cast<std::size_t>(i) >= boards.size())
                    throw StructuralError("board id out of range");
                return boards[i];
            };
            const auto & positions = cert.at("positions");
            auto history_of = [&](const nlohmann::json & p) {
                std::vector<HyperNetwork> h;
                for (const auto & id : p.at("history"))
                    h.push_back(board_at(id));
                return h;
            };
            auto pos_at = [&](const nlohmann::json & id) -> const nlohmann::json & {
                int i = id.get<int>();
                if (i < 0 || static_cast<std::size_t>(i) >= positions.size())
                    throw StructuralError("child id out of range");
                return positions.at(i);
            };
            if (positions.empty())
                throw StructuralError("certificate has no positions");
            {
                std::vector<HyperNetwork> start;
                for (const auto & id : cert.at("start"))
                    start.push_back(board_at(id));
                if (history_of(positions.at(0)) != start || positions.at(0).at("rounds").get<int>() != spec.rounds)
                    throw VerificationError("root position is not the start");
            }
            auto check_child = [&](const std::vector<HyperNetwork> & history, const HyperNetwork & reply,
                                   const nlohmann::json & child, int rounds) {
                auto want = history;
                want.push_back(reply);
                if (history_of(child) != want)
                    throw VerificationError("child history does not extend the position");
                if (child.at("rounds").get<int>() != rounds)
                    throw VerificationError("child has the wrong round count");
                if (!ew && rounds == 0)
                    throw VerificationError("exists survives a line of a forall certificate");
            };
            for (std::size_t id = 0; id < positions.size(); ++id) {
                const auto & P = positions.at(id);
                if (P.at("id").get<std::size_t>() != id)
                    throw StructuralError("position ids out of order");
                const int r = P.at("rounds").get<int>();
                if (r == 0)
                    continue;
                auto history = history_of(P);
                auto moves = hyper_moves(f, spec, history);
                if (ew) {
                    const auto & listed = P.at("moves");
                    if (listed.size() != moves.size())
                        throw VerificationError("position " + std::to_string(id) + " does not answer every move");
                    for (std::size_t i = 0; i < moves.size(); ++i) {
                        if (HyperMove::from_json(listed[i].at("move")) != moves[i])
                            throw VerificationError("position " + std::to_string(id) + ": move list differs");
                        const auto & reply = board_at(listed[i].at("reply"));
                        auto legal = hyper_responses(f, spec, history, moves[i]);
                        if (std::find(legal.begin(), legal.end(), reply) == legal.end())
                            throw VerificationError("position " + std::to_string(id) + ": illegal reply");
                        check_child(history, reply, pos_at(listed[i].at("child")), r - 1);
                        ++rep.moves;
                    }
                }
                else {
                    auto mv = HyperMove::from_json(P.at("move"));
                    if (std::find(moves.begin(), moves.end(), mv) == moves.end())
                        throw VerificationError("position " + std::to_string(id) + ": illegal forall move");
                    auto legal = hyper_responses(f, spec, history, mv);
                    const auto & listed = P.at("replies");
                    if (listed.size() != legal.size())
                        throw VerificationError("position " + std::to_string(id) + ": reply list differs");
                    for (std::size_t i = 0; i < legal.size(); ++i) {
                        if (board_at(listed[i].at("reply")) != legal[i])
                            throw VerificationError("position " + std::to_string(id) + ": reply list differs");
                        check_child(history, legal[i], pos_at(listed[i].at("child")), r - 1);
                    }
                    ++rep.moves;
                }
                ++rep.positions;
            }
            rep.ok = true;
        }
        catch (const std::exception & e) {
            rep.ok = false;
            rep.error = e.what();
        }
        return rep;
    }
}
