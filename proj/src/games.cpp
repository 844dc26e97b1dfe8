#include "atomlab/games.hpp"

#include "atomlab/error.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <unordered_map>

namespace atomlab
{
    auto Network::pos(int node) const -> int
    {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
        return it != nodes.end() && *it == node ? static_cast<int>(it - nodes.begin()) : -1;
    }

    auto Network::at(const std::vector<int> & tuple) const -> AtomId
    {
        std::size_t idx = 0;
        for (int v : tuple) {
            int q = pos(v);
            if (q < 0)
                throw StructuralError("node " + std::to_string(v) + " is not on the board");
            idx = idx * nodes.size() + q;
        }
        return label[idx];
    }

    auto Network::to_json() const -> nlohmann::json
    {
        return {{"n", n}, {"nodes", nodes}, {"labels", label}};
    }

    auto Network::from_json(const nlohmann::json & j) -> Network
    {
        try {
            Network N;
            N.n = j.at("n").get<int>();
            N.nodes = j.at("nodes").get<std::vector<int>>();
            N.label = j.at("labels").get<std::vector<AtomId>>();
            if (N.n < 1 || !std::is_sorted(N.nodes.begin(), N.nodes.end()) ||
                std::adjacent_find(N.nodes.begin(), N.nodes.end()) != N.nodes.end())
                throw StructuralError("network nodes must be strictly ascending");
            std::size_t want = 1;
            for (int i = 0; i < N.n; ++i)
                want *= N.nodes.size();
            if (N.label.size() != want)
                throw StructuralError("network has the wrong number of labels");
            return N;
        }
        catch (const nlohmann::json::exception & e) {
            throw StructuralError(std::string("bad network document: ") + e.what());
        }
    }

    auto player_name(Player p) -> std::string { return p == Player::exists ? "exists" : "forall"; }

    auto game_kind_name(GameKind k) -> std::string
    {
        switch (k) {
        case GameKind::G:
            return "G";
        case GameKind::F:
            return "F";
        case GameKind::H:
            return "H";
        }
        return "?";
    }

    auto parse_game_kind(const std::string & s) -> GameKind
    {
        if (s == "G")
            return GameKind::G;
        if (s == "F")
            return GameKind::F;
        if (s == "H")
            return GameKind::H;
        throw UsageError("unknown game '" + s + "' (G, F or H)");
    }

    auto Move::to_json() const -> nlohmann::json
    {
        if (initial)
            return {{"initial", true}, {"atom", atom}};
        return {{"face", face}, {"l", l}, {"k", k}, {"b", b}};
    }

    auto Move::from_json(const nlohmann::json & j) -> Move
    {
        try {
            Move m;
            if (j.value("initial", false)) {
                m.initial = true;
                m.atom = j.at("atom").get<AtomId>();
                return m;
            }
            m.face = j.at("face").get<std::vector<int>>();
            m.l = j.at("l").get<int>();
            m.k = j.at("k").get<int>();
            m.b = j.at("b").get<AtomId>();
            return m;
        }
        catch (const nlohmann::json::exception & e) {
            throw StructuralError(std::string("bad move document: ") + e.what());
        }
    }

    namespace
    {
        auto ipow(int p, int n) -> std::size_t
        {
            std::size_t r = 1;
            for (int i = 0; i < n; ++i)
                r *= static_cast<std::size_t>(p);
            return r;
        }

        void decode(std::size_t idx, int p, int n, int * out)
        {
            for (int i = n - 1; i >= 0; --i) {
                out[i] = static_cast<int>(idx % p);
                idx /= p;
            }
        }

        auto encode(const int * t, int p, int n) -> std::size_t
        {
            std::size_t idx = 0;
            for (int i = 0; i < n; ++i)
                idx = idx * p + t[i];
            return idx;
        }

        constexpr std::size_t npos = static_cast<std::size_t>(-1);

        // Constraint solver for the unlabelled tuples of a board on positions 0..p-1.
        // Labels of -1 are free. `emit` returns true to stop.
        class Completion
        {
        public:
            // `pin` is a free tuple whose only allowed label is `pinned`; it is assigned first. npos: none.
            Completion(const CaAtomStructure & f, int p, std::vector<AtomId> labels, std::size_t pin, AtomId pinned) :
                f_(f), n_(f.dim()), p_(p), lab_(std::move(labels)), pin_(pin), pinned_(pinned)
            {
                if (pin_ != npos) {
                    lab_[pin_] = -1;
                    free_.push_back(pin_);
                }
                for (std::size_t t = 0; t < lab_.size(); ++t)
                    if (lab_[t] < 0 && t != pin_)
                        free_.push_back(t);
            }

            template <typename Emit>
            void run(Emit && emit)
            {
                stop_ = false;
                rec(0, emit);
            }

        private:
            template <typename Emit>
            void rec(std::size_t at, Emit & emit)
            {
                if (stop_)
                    return;
                if (at == free_.size()) {
                    if (emit(lab_))
                        stop_ = true;
                    return;
                }
                const std::size_t t = free_[at];
                int tup[16];
                decode(t, p_, n_, tup);
                // ≡_i requirement from one labelled neighbour per coordinate
                int need_cls[16];
                int pivot = -1;
                for (int i = 0; i < n_; ++i) {
                    need_cls[i] = -1;
                    int save = tup[i];
                    for (int d = 0; d < p_ && need_cls[i] < 0; ++d) {
                        if (d == save)
                            continue;
                        tup[i] = d;
                        AtomId u = lab_[encode(tup, p_, n_)];
                        if (u >= 0)
                            need_cls[i] = f_.cls(i, u);
                    }
                    tup[i] = save;
                    if (need_cls[i] >= 0 && (pivot < 0 || f_.class_members(i, need_cls[i]).size() <
                                                              f_.class_members(pivot, need_cls[pivot]).size()))
                        pivot = i;
                }
                auto try_atom = [&](AtomId a) {
                    for (int i = 0; i < n_; ++i)
                        if (need_cls[i] >= 0 && f_.cls(i, a) != need_cls[i])
                            return;
                    for (int i = 0; i < n_; ++i)
                        for (int j = i + 1; j < n_; ++j)
                            if (tup[i] == tup[j] && !f_.diagonal(i, j).contains(a))
                                return;
                    if (f_.has_transpositions()) {
                        for (int i = 0; i < n_; ++i)
                            for (int j = i + 1; j < n_; ++j) {
                                std::swap(tup[i], tup[j]);
                                AtomId u = lab_[encode(tup, p_, n_)];
                                std::swap(tup[i], tup[j]);
                                if (tup[i] == tup[j]) {
                                    if (f_.transpose(i, j, a) != a)
                                        return;
                                }
                                else if (u >= 0 && f_.transpose(i, j, u) != a) {
                                    return;
                                }
                            }
                    }
                    lab_[t] = a;
                    rec(at + 1, emit);
                    lab_[t] = -1;
                };
                if (t == pin_) {
                    try_atom(pinned_);
                }
                else if (pivot >= 0) {
                    for (AtomId a : f_.class_members(pivot, need_cls[pivot])) {
                        try_atom(a);
                        if (stop_)
                            return;
                    }
                }
                else {
                    for (std::size_t a = 0; a < f_.size(); ++a) {
                        try_atom(static_cast<AtomId>(a));
                        if (stop_)
                            return;
                    }
                }
            }

            const CaAtomStructure & f_;
            int n_, p_;
            std::vector<AtomId> lab_;
            std::vector<std::size_t> free_;
            std::size_t pin_;
            AtomId pinned_;
            bool stop_ = false;
        };

        // Restricted-growth patterns of length n.
        auto patterns(int n, int max_nodes) -> std::vector<std::vector<int>>
        {
            std::vector<std::vector<int>> out;
            std::vector<int> d(n);
            std::function<void(int, int)> rec = [&](int i, int used) {
                if (i == n) {
                    out.push_back(d);
                    return;
                }
                for (int v = 0; v <= used && v < max_nodes; ++v) {
                    d[i] = v;
                    rec(i + 1, std::max(used, v + 1));
                }
            };
            rec(0, 0);
            return out;
        }

        // Board for a cylindrifier reply: node k added (after deleting it if reused), the new
        // tuples free and the target fixed.
        struct ReplyFrame
        {
            std::vector<int> nodes;
            std::vector<AtomId> labels;
        };

        auto reply_frame(const Network & N, const Move & mv) -> ReplyFrame
        {
            const int n = N.n;
            ReplyFrame fr;
            fr.nodes = N.nodes;
            if (!N.has(mv.k)) {
                fr.nodes.insert(std::lower_bound(fr.nodes.begin(), fr.nodes.end(), mv.k), mv.k);
            }
            const int p = static_cast<int>(fr.nodes.size());
            fr.labels.assign(ipow(p, n), -1);
            std::vector<int> tup(n), old(n);
            for (std::size_t t = 0; t < fr.labels.size(); ++t) {
                decode(t, p, n, tup.data());
                bool uses_k = false;
                for (int i = 0; i < n; ++i) {
                    int node = fr.nodes[tup[i]];
                    uses_k = uses_k || node == mv.k;
                    old[i] = N.pos(node);
                }
                if (!uses_k)
                    fr.labels[t] = N.label[encode(old.data(), N.size(), n)];
            }
            std::vector<int> target(n);
            for (int i = 0, j = 0; i < n; ++i)
                target[i] = i == mv.l ? mv.k : mv.face[j++];
            for (int i = 0; i < n; ++i)
                tup[i] = static_cast<int>(std::lower_bound(fr.nodes.begin(), fr.nodes.end(), target[i]) - fr.nodes.begin());
            fr.labels[encode(tup.data(), p, n)] = mv.b;
            return fr;
        }

        template <typename Emit>
        void complete(const CaAtomStructure & f, int p, std::vector<AtomId> labels, std::size_t pin, AtomId pinned,
                      Emit && emit)
        {
            Completion c(f, p, std::move(labels), pin, pinned);
            c.run(emit);
        }

        auto target_tuple(const Move & mv, int n) -> std::vector<int>
        {
            std::vector<int> t(n);
            for (int i = 0, j = 0; i < n; ++i)
                t[i] = i == mv.l ? mv.k : mv.face[j++];
            return t;
        }

        void check_move_shape(const CaAtomStructure & f, const GameSpec & spec, const Network * board, const Move & mv)
        {
            const int n = f.dim();
            if (mv.initial) {
                if (board)
                    throw VerificationError("initial move on a non-empty board");
                if (mv.atom < 0 || static_cast<std::size_t>(mv.atom) >= f.size())
                    throw VerificationError("initial atom out of range");
                return;
            }
            if (!board)
                throw VerificationError("cylindrifier move before the initial round");
            if (static_cast<int>(mv.face.size()) != n - 1)
                throw VerificationError("face must have n-1 nodes");
            for (int v : mv.face)
                if (!board->has(v))
                    throw VerificationError("face node " + std::to_string(v) + " is not on the board");
            if (std::find(mv.face.begin(), mv.face.end(), mv.k) != mv.face.end())
                throw VerificationError("k lies in the face");
            if (mv.l < 0 || mv.l >= n)
                throw VerificationError("index l out of range");
            if (mv.b < 0 || static_cast<std::size_t>(mv.b) >= f.size())
                throw VerificationError("atom b out of range");
            if (spec.kind == GameKind::G && board->has(mv.k))
                throw VerificationError("k must be a new node in G");
            if (spec.kind == GameKind::F && (mv.k < 0 || mv.k >= spec.pebbles))
                throw VerificationError("k must be one of the m pebbles");
            std::vector<int> t(n);
            for (int i = 0, j = 0; i < n; ++i)
                t[i] = i == mv.l ? mv.face[0] : mv.face[j++];
            if (!f.same(mv.l, mv.b, board->at(t)))
                throw VerificationError("b is not below c_l of the face");
        }
    }

    auto network_violation(const CaAtomStructure & f, const Network & N) -> std::optional<std::string>
    {
        const int n = f.dim();
        if (N.n != n)
            return "network dimension differs from the structure";
        const int p = N.size();
        if (N.label.size() != ipow(p, n))
            return "label count differs from nodes^n";
        std::vector<int> t(n);
        for (std::size_t idx = 0; idx < N.label.size(); ++idx) {
            AtomId a = N.label[idx];
            if (a < 0 || static_cast<std::size_t>(a) >= f.size())
                return "label out of range";
            decode(idx, p, n, t.data());
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (t[i] == t[j] && !f.diagonal(i, j).contains(a))
                        return "diagonal condition fails at tuple " + std::to_string(idx);
            for (int i = 0; i < n; ++i) {
                int save = t[i];
                t[i] = 0;
                AtomId u = N.label[encode(t.data(), p, n)];
                t[i] = save;
                if (u >= 0 && static_cast<std::size_t>(u) < f.size() && !f.same(i, a, u))
                    return "cylindrifier condition fails at tuple " + std::to_string(idx) + " index " + std::to_string(i);
            }
            if (f.has_transpositions())
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        std::swap(t[i], t[j]);
                        AtomId u = N.label[encode(t.data(), p, n)];
                        std::swap(t[i], t[j]);
                        if (u >= 0 && static_cast<std::size_t>(u) < f.size() && f.transpose(i, j, a) != u)
                            return "substitution condition fails at tuple " + std::to_string(idx);
                    }
        }
        return std::nullopt;
    }

    auto legal_moves(const CaAtomStructure & f, const GameSpec & spec, const Network * board) -> std::vector<Move>
    {
        std::vector<Move> out;
        const int n = f.dim();
        if (!board) {
            for (std::size_t a = 0; a < f.size(); ++a) {
                Move m;
                m.initial = true;
                m.atom = static_cast<AtomId>(a);
                out.push_back(m);
            }
            return out;
        }
        const int p = board->size();
        std::vector<int> ks;
        const int fresh = board->nodes.empty() ? 0 : board->nodes.back() + 1;
        if (spec.kind == GameKind::G) {
            ks.push_back(fresh);
        }
        else {
            for (int v : board->nodes)
                ks.push_back(v);
            for (int v = 0; v < spec.pebbles; ++v)
                if (!board->has(v)) {
                    ks.push_back(v);
                    break;
                }
        }
        std::vector<int> fp(n - 1);
        for (std::size_t fi = 0; fi < ipow(p, n - 1); ++fi) {
            decode(fi, p, n - 1, fp.data());
            std::vector<int> face(n - 1);
            for (int i = 0; i < n - 1; ++i)
                face[i] = board->nodes[fp[i]];
            for (int l = 0; l < n; ++l) {
                std::vector<int> t(n);
                for (int i = 0, j = 0; i < n; ++i)
                    t[i] = i == l ? face[0] : face[j++];
                AtomId cur = board->at(t);
                const auto & cls = f.class_members(l, f.cls(l, cur));
                for (int k : ks) {
                    if (std::find(face.begin(), face.end(), k) != face.end())
                        continue;
                    for (AtomId b : cls)
                        out.push_back(Move{false, -1, face, l, k, b});
                }
            }
        }
        return out;
    }

    namespace
    {
        template <typename Emit>
        void for_each_response(const CaAtomStructure & f, const GameSpec & spec, const Network * board,
                               const Move & mv, Emit && emit)
        {
            const int n = f.dim();
            if (mv.initial) {
                int max_nodes = spec.kind == GameKind::F ? std::min(n, spec.pebbles) : n;
                bool stop = false;
                for (const auto & d : patterns(n, max_nodes)) {
                    bool fits = true;
                    for (int i = 0; i < n; ++i)
                        for (int j = i + 1; j < n; ++j)
                            if (d[i] == d[j] && !f.diagonal(i, j).contains(mv.atom))
                                fits = false;
                    if (!fits)
                        continue;
                    const int p = *std::max_element(d.begin(), d.end()) + 1;
                    std::vector<AtomId> lab(ipow(p, n), -1);
                    std::vector<int> nodes(p);
                    std::iota(nodes.begin(), nodes.end(), 0);
                    complete(f, p, lab, encode(d.data(), p, n), mv.atom, [&](const std::vector<AtomId> & full) {
                        Network N{n, nodes, full};
                        stop = emit(std::move(N));
                        return stop;
                    });
                    if (stop)
                        return;
                }
                return;
            }
            auto fr = reply_frame(*board, mv);
            const int p = static_cast<int>(fr.nodes.size());
            auto tt = target_tuple(mv, n);
            std::vector<int> tp(n);
            for (int i = 0; i < n; ++i)
                tp[i] = static_cast<int>(std::lower_bound(fr.nodes.begin(), fr.nodes.end(), tt[i]) - fr.nodes.begin());
            complete(f, p, fr.labels, encode(tp.data(), p, n), mv.b,
                     [&](const std::vector<AtomId> & full) { return emit(Network{n, fr.nodes, full}); });
        }
    }

    auto responses(const CaAtomStructure & f, const GameSpec & spec, const Network * board, const Move & mv)
        -> std::vector<Network>
    {
        check_move_shape(f, spec, board, mv);
        std::vector<Network> out;
        for_each_response(f, spec, board, mv, [&](Network N) {
            out.push_back(std::move(N));
            return false;
        });
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    auto network_amalgams(const CaAtomStructure & f, const Network & M, const Network & N, std::size_t limit)
        -> std::vector<Network>
    {
        const int n = f.dim();
        std::vector<int> nodes = M.nodes;
        nodes.insert(nodes.end(), N.nodes.begin(), N.nodes.end());
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        const int p = static_cast<int>(nodes.size());
        std::vector<AtomId> lab(ipow(p, n), -1);
        std::vector<int> tup(n), ids(n);
        for (std::size_t t = 0; t < lab.size(); ++t) {
            decode(t, p, n, tup.data());
            bool in_m = true, in_n = true;
            for (int i = 0; i < n; ++i) {
                ids[i] = nodes[tup[i]];
                in_m = in_m && M.has(ids[i]);
                in_n = in_n && N.has(ids[i]);
            }
            if (in_m)
                lab[t] = M.at(ids);
            if (in_n) {
                AtomId b = N.at(ids);
                if (lab[t] >= 0 && lab[t] != b)
                    return {};
                lab[t] = b;
            }
        }
        // fixed labels from the two sides must agree where they meet
        for (std::size_t t = 0; t < lab.size(); ++t) {
            if (lab[t] < 0)
                continue;
            decode(t, p, n, tup.data());
            for (int i = 0; i < n; ++i) {
                int save = tup[i];
                for (int d = 0; d < p; ++d) {
                    tup[i] = d;
                    AtomId u = lab[encode(tup.data(), p, n)];
                    if (u >= 0 && !f.same(i, u, lab[t]))
                        return {};
                }
                tup[i] = save;
            }
        }
        std::vector<Network> out;
        Completion c(f, p, lab, npos, -1);
        c.run([&](const std::vector<AtomId> & full) {
            Network L{n, nodes, full};
            if (network_violation(f, L))
                return false;
            out.push_back(std::move(L));
            return limit > 0 && out.size() >= limit;
        });
        std::sort(out.begin(), out.end());
        return out;
    }

    auto canonical_network(const Network & N) -> std::pair<Network, std::vector<int>>
    {
        const int n = N.n;
        const int p = N.size();
        const std::size_t T = N.label.size();
        std::vector<int> perm(p), inv(p), best_perm;
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<AtomId> best;
        std::vector<AtomId> cur(T);
        std::vector<int> t(n), u(n);
        do {
            for (int q = 0; q < p; ++q)
                inv[perm[q]] = q;
            bool better = best.empty();
            bool worse = false;
            for (std::size_t idx = 0; idx < T && !worse; ++idx) {
                decode(idx, p, n, t.data());
                for (int i = 0; i < n; ++i)
                    u[i] = inv[t[i]];
                AtomId a = N.label[encode(u.data(), p, n)];
                cur[idx] = a;
                if (!better) {
                    if (a < best[idx])
                        better = true;
                    else if (a > best[idx])
                        worse = true;
                }
            }
            if (better && !worse) {
                best = cur;
                best_perm = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (p == 0)
            best_perm.clear();
        Network c{n, {}, best.empty() ? N.label : best};
        c.nodes.resize(p);
        std::iota(c.nodes.begin(), c.nodes.end(), 0);
        return {c, best_perm};
    }

    namespace
    {
        auto key_of(const Network & c, int rounds) -> std::string
        {
            std::string k;
            k.reserve(8 + c.label.size() * 2);
            k.push_back(static_cast<char>(rounds));
            k.push_back(static_cast<char>(c.size()));
            for (AtomId a : c.label) {
                k.push_back(static_cast<char>(a & 0xff));
                k.push_back(static_cast<char>((a >> 8) & 0xff));
                k.push_back(static_cast<char>((a >> 16) & 0xff));
            }
            return k;
        }

        class Solver
        {
        public:
            Solver(const CaAtomStructure & f, const GameSpec & spec) : f_(f), spec_(spec) {}

            auto wins(const Network & c, int rounds) -> bool
            {
                if (rounds == 0)
                    return true;
                auto key = key_of(c, rounds);
                {
                    std::shared_lock lk(mu_);
                    auto it = memo_.find(key);
                    if (it != memo_.end())
                        return it->second;
                }
                if (spec_.kind == GameKind::G && c.size() + 1 > spec_.node_budget)
                    throw BudgetExceeded("node budget exceeded", static_cast<unsigned long long>(c.size() + 1));
                bool result = true;
                for (const auto & mv : legal_moves(f_, spec_, &c)) {
                    bool answered = false;
                    for_each_response(f_, spec_, &c, mv, [&](Network M) {
                        auto cm = canonical_network(M).first;
                        answered = wins(cm, rounds - 1);
                        return answered;
                    });
                    if (!answered) {
                        result = false;
                        break;
                    }
                }
                std::unique_lock lk(mu_);
                memo_.emplace(std::move(key), result);
                if (memo_.size() > spec_.state_budget)
                    throw BudgetExceeded("solver state budget exceeded", memo_.size());
                return result;
            }

            auto root_wins(AtomId a) -> bool
            {
                Move mv;
                mv.initial = true;
                mv.atom = a;
                bool answered = false;
                for_each_response(f_, spec_, nullptr, mv, [&](Network M) {
                    answered = wins(canonical_network(M).first, spec_.rounds - 1);
                    return answered;
                });
                return answered;
            }

            auto positions() const -> std::size_t { return memo_.size(); }

            // ---- certificate

            auto cert_child(const Network & reply, int rounds, nlohmann::json & positions) -> nlohmann::json
            {
                auto [c, perm] = canonical_network(reply);
                int id = position(c, rounds, positions);
                return {{"reply", reply.to_json()}, {"perm", perm}, {"child", id}};
            }

            auto position(const Network & c, int rounds, nlohmann::json & positions) -> int
            {
                auto key = key_of(c, rounds);
                auto it = ids_.find(key);
                if (it != ids_.end())
                    return it->second;
                int id = static_cast<int>(ids_.size());
                ids_.emplace(key, id);
                positions.push_back(nullptr);
                nlohmann::json pos = {{"id", id}, {"rounds", rounds}, {"network", c.to_json()}};
                if (rounds > 0) {
                    bool ew = wins(c, rounds);
                    if (ew) {
                        nlohmann::json moves = nlohmann::json::array();
                        for (const auto & mv : legal_moves(f_, spec_, &c)) {
                            std::optional<Network> pick;
                            for_each_response(f_, spec_, &c, mv, [&](Network M) {
                                if (wins(canonical_network(M).first, rounds - 1)) {
                                    pick = std::move(M);
                                    return true;
                                }
                                return false;
                            });
                            auto entry = cert_child(*pick, rounds - 1, positions);
                            entry["move"] = mv.to_json();
                            moves.push_back(std::move(entry));
                        }
                        pos["moves"] = std::move(moves);
                    }
                    else {
                        for (const auto & mv : legal_moves(f_, spec_, &c)) {
                            bool answered = false;
                            for_each_response(f_, spec_, &c, mv, [&](Network M) {
                                answered = wins(canonical_network(M).first, rounds - 1);
                                return answered;
                            });
                            if (answered)
                                continue;
                            nlohmann::json reps = nlohmann::json::array();
                            for (const auto & M : responses(f_, spec_, &c, mv))
                                reps.push_back(cert_child(M, rounds - 1, positions));
                            pos["move"] = mv.to_json();
                            pos["replies"] = std::move(reps);
                            break;
                        }
                    }
                }
                positions[id] = std::move(pos);
                return id;
            }

        private:
            const CaAtomStructure & f_;
            GameSpec spec_;
            std::shared_mutex mu_;
            std::unordered_map<std::string, bool> memo_;
            std::unordered_map<std::string, int> ids_;
        };
    }

    auto solve_game(const CaAtomStructure & f, const GameSpec & spec0) -> SolveResult
    {
        GameSpec spec = spec0;
        const int n = f.dim();
        if (spec.kind == GameKind::H)
            throw UsageError("use solve_hypergame for H");
        if (spec.rounds < 1)
            throw UsageError("rounds must be at least 1");
        if (spec.kind == GameKind::F && spec.pebbles < n)
            throw UsageError("F(m) needs m >= n");
        if (spec.kind == GameKind::G && spec.node_budget < n)
            throw UsageError("node budget below the dimension");
        Solver s(f, spec);
        const int N = static_cast<int>(f.size());
        std::vector<char> win(N, 0);
        std::string error;
        unsigned long long reached = 0;
        bool budget = false;
        auto body = [&](int a) {
            try {
                win[a] = s.root_wins(a) ? 1 : 0;
            }
            catch (const BudgetExceeded & e) {
#pragma omp critical(atomlab_solve_err)
                {
                    if (error.empty()) {
                        error = e.what();
                        reached = e.reached();
                        budget = true;
                    }
                }
            }
            catch (const std::exception & e) {
#pragma omp critical(atomlab_solve_err)
                {
                    if (error.empty())
                        error = e.what();
                }
            }
        };
        if (spec.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
            for (int a = 0; a < N; ++a)
                body(a);
        }
        else {
            for (int a = 0; a < N; ++a)
                body(a);
        }
        if (!error.empty()) {
            if (budget)
                throw BudgetExceeded("game undetermined within budget: " + error, reached);
            throw Error(error);
        }
        SolveResult r;
        int losing = -1;
        for (int a = 0; a < N; ++a)
            if (!win[a]) {
                losing = a;
                break;
            }
        r.winner = losing < 0 ? Player::exists : Player::forall;

        nlohmann::json positions = nlohmann::json::array();
        nlohmann::json root;
        Move init;
        init.initial = true;
        if (r.winner == Player::exists) {
            nlohmann::json reps = nlohmann::json::array();
            for (int a = 0; a < N; ++a) {
                init.atom = a;
                std::optional<Network> pick;
                for_each_response(f, spec, nullptr, init, [&](Network M) {
                    if (s.wins(canonical_network(M).first, spec.rounds - 1)) {
                        pick = std::move(M);
                        return true;
                    }
                    return false;
                });
                auto entry = s.cert_child(*pick, spec.rounds - 1, positions);
                entry["atom"] = a;
                reps.push_back(std::move(entry));
            }
            root = {{"replies", reps}};
        }
        else {
            init.atom = losing;
            nlohmann::json reps = nlohmann::json::array();
            for (const auto & M : responses(f, spec, nullptr, init))
                reps.push_back(s.cert_child(M, spec.rounds - 1, positions));
            root = {{"atom", losing}, {"replies", reps}};
        }
        r.positions = s.positions();
        r.certificate = {{"schema_version", 1},
                         {"type", "game-certificate"},
                         {"game", game_kind_name(spec.kind)},
                         {"n", n},
                         {"pebbles", spec.pebbles},
                         {"rounds", spec.rounds},
                         {"atoms", f.size()},
                         {"winner", player_name(r.winner)},
                         {"root", root},
                         {"positions", positions}};
        return r;
    }

    // ---------------------------------------------------------------- scripted play

    auto Transcript::to_json() const -> nlohmann::json
    {
        nlohmann::json mv = nlohmann::json::array(), bd = nlohmann::json::array();
        for (const auto & m : moves)
            mv.push_back(m.to_json());
        for (const auto & b : boards)
            bd.push_back(b.to_json());
        return {{"moves", mv}, {"boards", bd}, {"winner", player_name(winner)}, {"rounds_played", rounds_played}};
    }

    auto run_scripted(const CaAtomStructure & f, const GameSpec & spec, const ExistsStrategy & e, const ForallScript & a)
        -> Transcript
    {
        Transcript tr;
        std::optional<Network> board;
        for (int round = 1; round <= spec.rounds; ++round) {
            auto mv = a(board ? &*board : nullptr, round);
            if (!mv)
                break;
            try {
                check_move_shape(f, spec, board ? &*board : nullptr, *mv);
            }
            catch (const VerificationError & err) {
                throw VerificationError(std::string("illegal forall move: ") + err.what());
            }
            tr.moves.push_back(*mv);
            auto reply = e(board ? &*board : nullptr, *mv);
            tr.rounds_played = round;
            if (!reply) {
                tr.winner = Player::forall;
                return tr;
            }
            if (auto why = check::reply_violation(f, spec, board ? &*board : nullptr, *mv, *reply))
                throw VerificationError("illegal exists reply: " + *why);
            board = *reply;
            tr.boards.push_back(*reply);
        }
        tr.winner = Player::exists;
        return tr;
    }

    namespace
    {
        auto map_move(const Move & mv, const std::vector<int> & perm, const Network & board) -> Move
        {
            // board node -> canonical node. Unused pebbles map to the least unused canonical id.
            Move m = mv;
            auto to = [&](int v) {
                int q = board.pos(v);
                return q >= 0 ? perm[q] : board.size();
            };
            for (auto & v : m.face)
                v = to(v);
            m.k = to(mv.k);
            return m;
        }

        auto unmap_network(const Network & reply, const std::vector<int> & perm, const Network & board, int k) -> Network
        {
            // reply lives on canonical ids 0..p (p = board size, fresh id p); rename back
            Network out = reply;
            std::vector<int> back(reply.size());
            for (int q = 0; q < board.size(); ++q)
                back[perm[q]] = board.nodes[q];
            for (int c = 0; c < reply.size(); ++c)
                if (reply.nodes[c] >= board.size())
                    back[c] = k;
                else
                    back[c] = back[reply.nodes[c]];
            std::vector<int> order(reply.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](int x, int y) { return back[x] < back[y]; });
            std::vector<int> newpos(reply.size());
            for (int i = 0; i < reply.size(); ++i)
                newpos[order[i]] = i;
            out.nodes.clear();
            for (int i : order)
                out.nodes.push_back(back[i]);
            const int n = reply.n, p = reply.size();
            std::vector<int> t(n), u(n);
            for (std::size_t idx = 0; idx < reply.label.size(); ++idx) {
                decode(idx, p, n, t.data());
                for (int i = 0; i < n; ++i)
                    u[i] = newpos[t[i]];
                out.label[encode(u.data(), p, n)] = reply.label[idx];
            }
            return out;
        }
    }

    auto exists_from_certificate(const nlohmann::json & cert) -> ExistsStrategy
    {
        if (cert.at("winner") != "exists")
            throw UsageError("certificate is not an exists strategy");
        return [cert](const Network * board, const Move & mv) -> std::optional<Network> {
            if (mv.initial) {
                for (const auto & r : cert.at("root").at("replies"))
                    if (r.at("atom").get<AtomId>() == mv.atom)
                        return Network::from_json(r.at("reply"));
                return std::nullopt;
            }
            auto [c, perm] = canonical_network(*board);
            // the deepest position holding this network: its replies also win shorter games
            const nlohmann::json * best = nullptr;
            for (const auto & pos : cert.at("positions"))
                if (pos.contains("moves") && !pos.at("moves").empty() && Network::from_json(pos.at("network")) == c &&
                    (!best || pos.at("rounds").get<int>() > best->at("rounds").get<int>()))
                    best = &pos;
            if (!best)
                return std::nullopt;
            auto cm = map_move(mv, perm, *board);
            for (const auto & e : best->at("moves"))
                if (Move::from_json(e.at("move")) == cm)
                    return unmap_network(Network::from_json(e.at("reply")), perm, *board, mv.k);
            return std::nullopt;
        };
    }

    auto forall_from_certificate(const nlohmann::json & cert) -> ForallScript
    {
        if (cert.at("winner") != "forall")
            throw UsageError("certificate is not a forall strategy");
        return [cert](const Network * board, int) -> std::optional<Move> {
            if (!board) {
                Move m;
                m.initial = true;
                m.atom = cert.at("root").at("atom").get<AtomId>();
                return m;
            }
            auto [c, perm] = canonical_network(*board);
            std::vector<int> inv(board->size());
            for (int q = 0; q < board->size(); ++q)
                inv[perm[q]] = board->nodes[q];
            // the shallowest position: forall wins faster there, hence also with more rounds left
            const nlohmann::json * best = nullptr;
            for (const auto & pos : cert.at("positions"))
                if (pos.contains("move") && Network::from_json(pos.at("network")) == c &&
                    (!best || pos.at("rounds").get<int>() < best->at("rounds").get<int>()))
                    best = &pos;
            if (best) {
                Move m = Move::from_json(best->at("move"));
                auto back = [&](int v) {
                    if (v < board->size())
                        return inv[v];
                    int fresh = board->nodes.empty() ? 0 : board->nodes.back() + 1;
                    for (int x = 0; x < fresh; ++x)
                        if (!board->has(x))
                            return x;
                    return fresh;
                };
                for (auto & v : m.face)
                    v = back(v);
                m.k = back(m.k);
                return m;
            }
            return std::nullopt;
        };
    }
}
