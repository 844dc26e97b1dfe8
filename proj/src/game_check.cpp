// Independent legality checker, certificate replay and the naive evaluator. Nothing here uses
// the solver's propagation or canonical forms.
#include "atomlab/games.hpp"

#include "atomlab/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace atomlab
{
    namespace
    {
        auto tuples(int p, int n) -> std::vector<std::vector<int>>
        {
            std::vector<std::vector<int>> out;
            std::vector<int> t(n, 0);
            if (p == 0)
                return out;
            while (true) {
                out.push_back(t);
                int i = n - 1;
                while (i >= 0 && ++t[i] == p)
                    t[i--] = 0;
                if (i < 0)
                    break;
            }
            return out;
        }

        // Why labels a on t and b on u clash, or nullptr.
        auto pair_clash(const CaAtomStructure & f, const std::vector<int> & t, AtomId a, const std::vector<int> & u,
                        AtomId b) -> const char *
        {
            const int n = f.dim();
            int diff = 0, where = -1;
            for (int i = 0; i < n; ++i)
                if (t[i] != u[i]) {
                    ++diff;
                    where = i;
                }
            if (diff == 1 && !f.same(where, a, b))
                return "cylindrifier condition";
            if (f.has_transpositions())
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        bool swapped = true;
                        for (int x = 0; x < n; ++x) {
                            int y = x == i ? j : x == j ? i : x;
                            if (u[x] != t[y])
                                swapped = false;
                        }
                        if (swapped && f.transpose(i, j, a) != b)
                            return "substitution condition";
                    }
            return nullptr;
        }

        auto single_clash(const CaAtomStructure & f, const std::vector<int> & t, AtomId a) -> const char *
        {
            const int n = f.dim();
            if (a < 0 || static_cast<std::size_t>(a) >= f.size())
                return "label out of range";
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (t[i] == t[j] && !f.diagonal(i, j).contains(a))
                        return "diagonal condition";
            return pair_clash(f, t, a, t, a);
        }

        // Every labelling of the -1 entries that passes all literal checks.
        // Only tuples one coordinate away or a transposition away can clash with tup[at].
        auto neighbour_clash(const CaAtomStructure & f, const std::vector<std::vector<int>> & tup,
                             const std::vector<AtomId> & lab, std::size_t at, AtomId x) -> bool
        {
            const int n = f.dim();
            const int p = tup.back()[0] + 1;
            const auto & t = tup[at];
            auto index = [&](const std::vector<int> & u) {
                std::size_t j = 0;
                for (int v : u)
                    j = j * p + v;
                return j;
            };
            std::vector<int> u = t;
            for (int i = 0; i < n; ++i) {
                for (int v = 0; v < p; ++v) {
                    if (v == t[i])
                        continue;
                    u[i] = v;
                    AtomId y = lab[index(u)];
                    if (y >= 0 && !f.same(i, x, y))
                        return true;
                }
                u[i] = t[i];
            }
            if (f.has_transpositions())
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        std::swap(u[i], u[j]);
                        std::size_t w = index(u);
                        std::swap(u[i], u[j]);
                        AtomId y = w == at ? x : lab[w];
                        if (y >= 0 && (f.transpose(i, j, x) != y || f.transpose(i, j, y) != x))
                            return true;
                    }
            return false;
        }

        // With `first`, stops after one solution.
        void naive_fill(const CaAtomStructure & f, const std::vector<std::vector<int>> & tup, std::vector<AtomId> & lab,
                        std::size_t at, std::vector<std::vector<AtomId>> & out, bool first = false)
        {
            while (at < lab.size() && lab[at] >= 0)
                ++at;
            if (at == lab.size()) {
                out.push_back(lab);
                return;
            }
            if (first && !out.empty())
                return;
            for (std::size_t a = 0; a < f.size(); ++a) {
                AtomId x = static_cast<AtomId>(a);
                if (single_clash(f, tup[at], x))
                    continue;
                if (neighbour_clash(f, tup, lab, at, x))
                    continue;
                lab[at] = x;
                naive_fill(f, tup, lab, at + 1, out, first);
                lab[at] = -1;
                if (first && !out.empty())
                    return;
            }
        }

        auto is_surjective_rg(const std::vector<int> & d, int p) -> bool
        {
            int next = 0;
            for (int v : d) {
                if (v > next)
                    return false;
                if (v == next)
                    ++next;
            }
            return next == p;
        }

        auto relabel_positions(const Network & N, const std::vector<int> & perm) -> Network
        {
            const int n = N.n, p = N.size();
            Network M;
            M.n = n;
            for (int i = 0; i < p; ++i)
                M.nodes.push_back(i);
            M.label.assign(N.label.size(), -1);
            auto all = tuples(p, n);
            for (std::size_t idx = 0; idx < all.size(); ++idx) {
                std::size_t j = 0;
                for (int i = 0; i < n; ++i)
                    j = j * p + perm[all[idx][i]];
                M.label[j] = N.label[idx];
            }
            return M;
        }

        auto is_permutation_of(const std::vector<int> & perm, int p) -> bool
        {
            if (static_cast<int>(perm.size()) != p)
                return false;
            std::vector<int> s = perm;
            std::sort(s.begin(), s.end());
            for (int i = 0; i < p; ++i)
                if (s[i] != i)
                    return false;
            return true;
        }
        // All replies, or at most one with `first`.
        auto replies_upto(const CaAtomStructure & f, const GameSpec & spec, const Network * board, const Move & mv,
                          bool first) -> std::vector<Network>
        {
            const int n = f.dim();
            std::set<Network> found;
            if (mv.initial) {
                int cap = spec.kind == GameKind::F ? std::min(n, spec.pebbles) : n;
                for (int p = 1; p <= cap; ++p) {
                    auto all = tuples(p, n);
                    for (std::size_t d = 0; d < all.size(); ++d) {
                        if (!is_surjective_rg(all[d], p))
                            continue;
                        std::vector<AtomId> lab(all.size(), -1);
                        if (single_clash(f, all[d], mv.atom))
                            continue;
                        lab[d] = mv.atom;
                        std::vector<std::vector<AtomId>> sols;
                        naive_fill(f, all, lab, 0, sols, first);
                        for (auto & s : sols) {
                            Network N;
                            N.n = n;
                            for (int i = 0; i < p; ++i)
                                N.nodes.push_back(i);
                            N.label = std::move(s);
                            found.insert(std::move(N));
                        }
                        if (first && !found.empty())
                            return {found.begin(), found.end()};
                    }
                }
                return {found.begin(), found.end()};
            }
            std::vector<int> nodes = board->nodes;
            if (!board->has(mv.k))
                nodes.push_back(mv.k);
            std::sort(nodes.begin(), nodes.end());
            const int p = static_cast<int>(nodes.size());
            auto all = tuples(p, n);
            std::vector<AtomId> lab(all.size(), -1);
            std::vector<int> target = mv.face;
            target.insert(target.begin() + mv.l, mv.k);
            for (std::size_t t = 0; t < all.size(); ++t) {
                std::vector<int> ids;
                for (int q : all[t])
                    ids.push_back(nodes[q]);
                if (ids == target)
                    lab[t] = mv.b;
                else if (!std::count(ids.begin(), ids.end(), mv.k))
                    lab[t] = board->at(ids);
            }
            // the fixed labels must agree with each other
            for (std::size_t t = 0; t < all.size(); ++t) {
                if (lab[t] < 0)
                    continue;
                if (single_clash(f, all[t], lab[t]))
                    return {};
                for (std::size_t u = t + 1; u < all.size(); ++u)
                    if (lab[u] >= 0 && pair_clash(f, all[t], lab[t], all[u], lab[u]))
                        return {};
            }
            std::vector<std::vector<AtomId>> sols;
            naive_fill(f, all, lab, 0, sols, first);
            for (auto & s : sols)
                found.insert(Network{n, nodes, std::move(s)});
            return {found.begin(), found.end()};
        }
    }

    namespace check
    {
        auto network_ok(const CaAtomStructure & f, const Network & N) -> std::optional<std::string>
        {
            const int n = f.dim();
            if (N.n != n)
                return "dimension mismatch";
            const int p = N.size();
            auto all = tuples(p, n);
            if (all.size() != N.label.size())
                return "label count mismatch";
            for (std::size_t t = 0; t < all.size(); ++t)
                if (auto why = single_clash(f, all[t], N.label[t]))
                    return std::string(why) + " at tuple " + std::to_string(t);
            for (std::size_t t = 0; t < all.size(); ++t)
                for (std::size_t u = t + 1; u < all.size(); ++u)
                    if (auto why = pair_clash(f, all[t], N.label[t], all[u], N.label[u]))
                        return std::string(why) + " between tuples " + std::to_string(t) + " and " + std::to_string(u);
            return std::nullopt;
        }

        auto forall_moves(const CaAtomStructure & f, const GameSpec & spec, const Network * board) -> std::vector<Move>
        {
            std::vector<Move> out;
            if (!board) {
                for (std::size_t a = 0; a < f.size(); ++a) {
                    Move m;
                    m.initial = true;
                    m.atom = static_cast<AtomId>(a);
                    out.push_back(m);
                }
                return out;
            }
            const int n = f.dim();
            std::vector<int> ks;
            if (spec.kind == GameKind::G) {
                int k = 0;
                for (int v : board->nodes)
                    k = std::max(k, v + 1);
                ks.push_back(k);
            }
            else {
                ks = board->nodes;
                for (int v = 0; v < spec.pebbles; ++v)
                    if (!board->has(v)) {
                        ks.push_back(v);
                        break;
                    }
            }
            for (const auto & fp : tuples(board->size(), n - 1)) {
                std::vector<int> face;
                for (int q : fp)
                    face.push_back(board->nodes[q]);
                for (int l = 0; l < n; ++l) {
                    std::vector<int> t = face;
                    t.insert(t.begin() + l, board->nodes.back());
                    AtomId cur = board->at(t);
                    for (int k : ks) {
                        if (std::count(face.begin(), face.end(), k))
                            continue;
                        for (std::size_t b = 0; b < f.size(); ++b)
                            if (f.same(l, static_cast<AtomId>(b), cur))
                                out.push_back(Move{false, -1, face, l, k, static_cast<AtomId>(b)});
                    }
                }
            }
            return out;
        }

        auto replies(const CaAtomStructure & f, const GameSpec & spec, const Network * board, const Move & mv)
            -> std::vector<Network>
        {
            return replies_upto(f, spec, board, mv, false);
        }

        auto reply_violation(const CaAtomStructure & f, const GameSpec & spec, const Network * board, const Move & mv,
                             const Network & reply) -> std::optional<std::string>
        {
            const int n = f.dim();
            if (auto why = network_ok(f, reply))
                return "reply is not a network: " + *why;
            if (mv.initial) {
                if (board)
                    return "initial move on a non-empty board";
                if (spec.kind == GameKind::F)
                    for (int v : reply.nodes)
                        if (v < 0 || v >= spec.pebbles)
                            return "node outside the pebbles";
                for (const auto & t : tuples(reply.size(), n)) {
                    std::vector<int> ids;
                    for (int q : t)
                        ids.push_back(reply.nodes[q]);
                    if (reply.at(ids) == mv.atom)
                        return std::nullopt;
                }
                return "reply does not contain the chosen atom";
            }
            if (!board)
                return "cylindrifier move before the initial round";
            std::vector<int> nodes = board->nodes;
            if (!board->has(mv.k))
                nodes.push_back(mv.k);
            std::sort(nodes.begin(), nodes.end());
            if (reply.nodes != nodes)
                return "reply has the wrong nodes";
            std::vector<int> target = mv.face;
            target.insert(target.begin() + mv.l, mv.k);
            if (reply.at(target) != mv.b)
                return "reply does not carry b on the demanded tuple";
            for (const auto & t : tuples(reply.size(), n)) {
                std::vector<int> ids;
                for (int q : t)
                    ids.push_back(reply.nodes[q]);
                if (!std::count(ids.begin(), ids.end(), mv.k) && reply.at(ids) != board->at(ids))
                    return "reply changes an old tuple";
            }
            return std::nullopt;
        }
    }

    auto replay_certificate(const CaAtomStructure & f, const nlohmann::json & cert) -> ReplayReport
    {
        ReplayReport rep;
        try {
            if (cert.at("type") != "game-certificate")
                throw StructuralError("not a game certificate");
            if (cert.at("atoms").get<std::size_t>() != f.size() || cert.at("n").get<int>() != f.dim())
                throw StructuralError("certificate belongs to a different structure");
            GameSpec spec;
            spec.kind = parse_game_kind(cert.at("game").get<std::string>());
            spec.pebbles = cert.at("pebbles").get<int>();
            spec.rounds = cert.at("rounds").get<int>();
            const bool ew = cert.at("winner") == "exists";
            const auto & positions = cert.at("positions");
            auto pos_at = [&](int id) -> const nlohmann::json & {
                if (id < 0 || static_cast<std::size_t>(id) >= positions.size())
                    throw StructuralError("child id out of range");
                const auto & p = positions.at(id);
                if (p.at("id").get<int>() != id)
                    throw StructuralError("position ids out of order");
                return p;
            };
            auto check_child = [&](const nlohmann::json & e, int rounds) {
                auto reply = Network::from_json(e.at("reply"));
                auto perm = e.at("perm").get<std::vector<int>>();
                if (!is_permutation_of(perm, reply.size()))
                    throw VerificationError("perm is not a bijection");
                const auto & child = pos_at(e.at("child").get<int>());
                if (child.at("rounds").get<int>() != rounds)
                    throw VerificationError("child has the wrong round count");
                if (relabel_positions(reply, perm) != Network::from_json(child.at("network")))
                    throw VerificationError("child is not the renamed reply");
                if (!ew && rounds == 0)
                    throw VerificationError("exists survives a line of a forall certificate");
                return reply;
            };
            auto same_replies = [&](const nlohmann::json & listed, std::vector<Network> all) {
                std::vector<Network> got;
                for (const auto & e : listed)
                    got.push_back(Network::from_json(e.at("reply")));
                std::sort(got.begin(), got.end());
                if (got != all)
                    throw VerificationError("listed replies differ from all legal replies");
            };

            const auto & root = cert.at("root");
            Move init;
            init.initial = true;
            if (ew) {
                std::set<AtomId> seen;
                for (const auto & e : root.at("replies")) {
                    init.atom = e.at("atom").get<AtomId>();
                    seen.insert(init.atom);
                    auto reply = check_child(e, spec.rounds - 1);
                    if (auto why = check::reply_violation(f, spec, nullptr, init, reply))
                        throw VerificationError("root reply: " + *why);
                    ++rep.moves;
                }
                if (seen.size() != f.size())
                    throw VerificationError("root does not answer every atom");
            }
            else {
                init.atom = root.at("atom").get<AtomId>();
                if (init.atom < 0 || static_cast<std::size_t>(init.atom) >= f.size())
                    throw VerificationError("root atom out of range");
                for (const auto & e : root.at("replies"))
                    check_child(e, spec.rounds - 1);
                same_replies(root.at("replies"), check::replies(f, spec, nullptr, init));
                ++rep.moves;
            }

            for (std::size_t id = 0; id < positions.size(); ++id) {
                const auto & P = pos_at(static_cast<int>(id));
                auto board = Network::from_json(P.at("network"));
                if (auto why = check::network_ok(f, board))
                    throw VerificationError("position " + std::to_string(id) + ": " + *why);
                const int r = P.at("rounds").get<int>();
                if (r == 0)
                    continue;
                if (spec.kind == GameKind::G && board.size() + 1 > 64)
                    throw VerificationError("board too large");
                if (ew) {
                    auto legal = check::forall_moves(f, spec, &board);
                    std::sort(legal.begin(), legal.end());
                    std::vector<Move> listed;
                    for (const auto & e : P.at("moves")) {
                        Move mv = Move::from_json(e.at("move"));
                        listed.push_back(mv);
                        auto reply = check_child(e, r - 1);
                        if (auto why = check::reply_violation(f, spec, &board, mv, reply))
                            throw VerificationError("position " + std::to_string(id) + ": " + *why);
                        ++rep.moves;
                    }
                    std::sort(listed.begin(), listed.end());
                    if (listed != legal)
                        throw VerificationError("position " + std::to_string(id) + " does not answer every forall move");
                }
                else {
                    Move mv = Move::from_json(P.at("move"));
                    auto legal = check::forall_moves(f, spec, &board);
                    if (std::find(legal.begin(), legal.end(), mv) == legal.end())
                        throw VerificationError("position " + std::to_string(id) + ": illegal forall move");
                    for (const auto & e : P.at("replies"))
                        check_child(e, r - 1);
                    same_replies(P.at("replies"), check::replies(f, spec, &board, mv));
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

    namespace
    {
        // Memo on the literal board, no symmetry reduction.
        using NaiveMemo = std::map<std::pair<Network, int>, bool>;

        auto naive_exists_wins(const CaAtomStructure & f, const GameSpec & spec, const Network & board, int rounds,
                               NaiveMemo & memo) -> bool
        {
            if (rounds == 0)
                return true;
            if (spec.kind == GameKind::G && board.size() + 1 > spec.node_budget)
                throw BudgetExceeded("node budget exceeded", static_cast<unsigned long long>(board.size() + 1));
            auto key = std::make_pair(board, rounds);
            if (auto it = memo.find(key); it != memo.end())
                return it->second;
            bool wins = true;
            for (const auto & mv : check::forall_moves(f, spec, &board)) {
                bool answered = false;
                // in the last round any reply survives
                for (const auto & M : replies_upto(f, spec, &board, mv, rounds == 1))
                    if (naive_exists_wins(f, spec, M, rounds - 1, memo)) {
                        answered = true;
                        break;
                    }
                if (!answered) {
                    wins = false;
                    break;
                }
            }
            memo.emplace(std::move(key), wins);
            return wins;
        }
    }

    auto naive_winner(const CaAtomStructure & f, const GameSpec & spec) -> Player
    {
        NaiveMemo memo;
        for (const auto & mv : check::forall_moves(f, spec, nullptr)) {
            bool answered = false;
            for (const auto & N : replies_upto(f, spec, nullptr, mv, spec.rounds == 1))
                if (naive_exists_wins(f, spec, N, spec.rounds - 1, memo)) {
                    answered = true;
                    break;
                }
            if (!answered)
                return Player::forall;
        }
        return Player::exists;
    }
}
