// Coloured-graph play on rainbow palettes: forall's green-cone script, exists' rho strategy and
// an exhaustive search over exists' completions.
#include "atomlab/games.hpp"

#include "atomlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace atomlab
{
    auto RhoMap::gap(int round) const -> long long
    {
        int e = m_total_ - round;
        long long g = 1;
        for (int i = 0; i < e; ++i) {
            if (g > std::numeric_limits<long long>::max() / 3)
                return std::numeric_limits<long long>::max();
            g *= 3;
        }
        return g;
    }

    auto RhoMap::extend(int tint, int round) -> bool
    {
        if (has(tint))
            return true;
        auto idx_it = std::find(tints_.begin(), tints_.end(), tint);
        if (idx_it == tints_.end())
            throw UsageError("tint " + std::to_string(tint) + " is not in the palette");
        auto up = rho_.upper_bound(tint);
        bool has_hi = up != rho_.end();
        bool has_lo = up != rho_.begin();
        long long lo = has_lo ? std::prev(up)->second : -1;
        long long hi = has_hi ? up->second : limit_;
        long long L = lo + 1, H = hi - 1;
        if (L > H)
            return false;
        const long long T = static_cast<long long>(tints_.size());
        const long long idx = idx_it - tints_.begin();
        long long target = T > 1 ? std::llround(static_cast<double>(idx) * (limit_ - 1) / static_cast<double>(T - 1))
                                 : (limit_ - 1) / 2;
        // the ends of the range count as neighbours, so later tints below or above still fit
        const long long g = std::min<long long>(gap(round), std::numeric_limits<int>::max());
        long long gl = lo + g;
        long long gh = hi - g;
        gl = std::max(gl, L);
        gh = std::min(gh, H);
        long long v;
        if (gl <= gh) {
            v = std::clamp(target, gl, gh);
        }
        else {
            v = std::clamp(target, L, H);
            gaps_kept_ = false;
        }
        rho_[tint] = static_cast<int>(v);
        return true;
    }

    auto RhoMap::invariant_ok(int round) const -> bool
    {
        const long long g = round >= 0 ? gap(round) : 1;
        bool first = true;
        long long prev = 0;
        for (const auto & [t, v] : rho_) {
            if (v < 0 || v >= limit_)
                return false;
            if (!first && (v <= prev || v - prev < g))
                return false;
            first = false;
            prev = v;
        }
        return true;
    }

    namespace
    {
        auto all_tints(const Palette & p) -> std::uint64_t
        {
            return p.tints.size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p.tints.size()) - 1;
        }

        // (n-1)-subsets of the nodes that contain `v`, ascending.
        auto subsets_with(int nodes, int size, int v) -> std::vector<std::vector<int>>
        {
            std::vector<std::vector<int>> out;
            std::vector<int> cur;
            std::function<void(int)> rec = [&](int from) {
                if (static_cast<int>(cur.size()) == size) {
                    if (std::count(cur.begin(), cur.end(), v))
                        out.push_back(cur);
                    return;
                }
                for (int x = from; x < nodes; ++x) {
                    cur.push_back(x);
                    rec(x + 1);
                    cur.pop_back();
                }
            };
            rec(0);
            return out;
        }

        auto green_free_tuple(const ColouredGraph & g, const std::vector<int> & s) -> bool
        {
            for (std::size_t i = 0; i < s.size(); ++i)
                for (std::size_t j = i + 1; j < s.size(); ++j) {
                    const auto & e = g.label(s[i], s[j]);
                    if (e && e->is_green())
                        return false;
                }
            return true;
        }

        // Edge (x, v) does not close a forbidden triangle with any y whose edges to both are set.
        auto edge_fits(const ColouredGraph & g, int x, int v) -> bool
        {
            for (int y = 0; y < g.nodes; ++y) {
                if (y == x || y == v || !g.label(y, v) || !g.label(x, y))
                    continue;
                if (forbidden_triangle(g, x, y, v))
                    return false;
            }
            return true;
        }

        auto first_law(const std::vector<Violation> & vs) -> std::string
        {
            return vs.empty() ? std::string() : vs.front().law;
        }
    }

    auto rainbow_opening(const Palette & p) -> ColouredGraph
    {
        const int n = p.n;
        if (std::find(p.tints.begin(), p.tints.end(), 0) == p.tints.end())
            throw UsageError("the cone script needs tint 0 in the palette");
        if (n > 2 && !p.plain_greens)
            throw UsageError("the cone script needs the plain greens");
        if (p.whites.empty())
            throw UsageError("the cone script needs a white");
        ColouredGraph g(n);
        const int apex = n - 1;
        for (int x = 0; x < n - 1; ++x)
            for (int y = x + 1; y < n - 1; ++y)
                g.set(x, y, Colour{ColourKind::white, p.whites.front(), 0});
        g.set(0, apex, Colour{ColourKind::green0, 0, 0});
        for (int j = 1; j < n - 1; ++j)
            g.set(j, apex, Colour{ColourKind::green, j, 0});
        std::vector<int> base(n - 1);
        for (int x = 0; x < n - 1; ++x)
            base[x] = x;
        g.yellow[base] = all_tints(p);
        return g;
    }

    auto cone_script_move(const Palette & p, int round) -> ConeMove
    {
        if (round < 2)
            throw UsageError("cone moves start in round 2");
        const int tint = -(round - 1);
        if (std::find(p.tints.begin(), p.tints.end(), tint) == p.tints.end())
            throw UsageError("tint " + std::to_string(tint) + " is not in the palette");
        ConeMove mv;
        for (int x = 0; x < p.n - 1; ++x)
            mv.face.push_back(x);
        mv.to_face.push_back(Colour{ColourKind::green0, tint, 0});
        for (int j = 1; j < p.n - 1; ++j)
            mv.to_face.push_back(Colour{ColourKind::green, j, 0});
        return mv;
    }

    auto apply_cone_move(const ColouredGraph & g, const ConeMove & mv) -> ColouredGraph
    {
        if (mv.face.size() != mv.to_face.size())
            throw UsageError("cone move needs one colour per face node");
        const int k = g.nodes;
        ColouredGraph h(k + 1);
        for (int x = 0; x < k; ++x)
            for (int y = 0; y < k; ++y)
                h.edge[x * (k + 1) + y] = g.label(x, y);
        h.yellow = g.yellow;
        for (std::size_t i = 0; i < mv.face.size(); ++i) {
            if (mv.face[i] < 0 || mv.face[i] >= k)
                throw UsageError("face node off the board");
            h.set(mv.face[i], k, mv.to_face[i]);
        }
        for (const auto & [t, m] : mv.yellow)
            h.yellow[t] = m;
        return h;
    }

    ExistsRainbowStrategy::ExistsRainbowStrategy(Palette p, int m_total) :
        p_(std::move(p)), m_total_(m_total), rho_(p_.reds, m_total, p_.tints)
    {
    }

    void ExistsRainbowStrategy::start(const ColouredGraph & g)
    {
        for (const auto & c : find_cones(g, p_.n))
            if (!rho_.extend(c.tint, 1))
                diag_ = "no red index for tint " + std::to_string(c.tint) + " in round 1";
    }

    auto ExistsRainbowStrategy::respond(const ColouredGraph & board, const ConeMove & mv, int round)
        -> std::optional<ColouredGraph>
    {
        const int n = p_.n;
        auto M = apply_cone_move(board, mv);
        const int v = board.nodes;
        if (!diag_.empty())
            return std::nullopt;
        // tints of the cones through the new node
        for (const auto & c : find_cones(M, n)) {
            if (c.apex != v)
                continue;
            if (!rho_.extend(c.tint, round)) {
                diag_ = "no order-preserving red index for tint " + std::to_string(c.tint) + " in round " +
                        std::to_string(round);
                return std::nullopt;
            }
        }
        auto cones = find_cones(M, n);
        auto cone_tint = [&](int apex, const std::vector<int> & base) -> std::optional<int> {
            for (const auto & c : cones)
                if (c.apex == apex && c.base == base)
                    return c.tint;
            return std::nullopt;
        };
        auto palette = p_.colours();
        for (int x = 0; x < v; ++x) {
            if (M.label(x, v))
                continue;
            std::optional<Colour> pick;
            auto px = cone_tint(x, mv.face);
            auto pv = cone_tint(v, mv.face);
            if (px && pv && rho_.has(*px) && rho_.has(*pv) && rho_.at(*px) != rho_.at(*pv)) {
                pick = Colour{ColourKind::red, rho_.at(*px), rho_.at(*pv)};
            }
            else {
                for (int i : p_.whites) {
                    bool clash = false;
                    for (int f : mv.face) {
                        const auto & a = M.label(f, x);
                        const auto & b = M.label(f, v);
                        auto is_gi = [&](const std::optional<Colour> & c) {
                            if (!c)
                                return false;
                            return i == 0 ? c->kind == ColourKind::green0 : (c->kind == ColourKind::green && c->a == i);
                        };
                        clash = clash || (is_gi(a) && is_gi(b));
                    }
                    if (!clash) {
                        pick = Colour{ColourKind::white, i, 0};
                        break;
                    }
                }
            }
            bool placed = false;
            if (pick && p_.has(*pick)) {
                M.set(x, v, *pick);
                placed = edge_fits(M, x, v);
            }
            if (!placed) {
                for (const auto & c : palette) {
                    if (c.kind == ColourKind::shade_red)
                        continue;
                    M.set(x, v, c);
                    if (edge_fits(M, x, v)) {
                        placed = true;
                        break;
                    }
                }
            }
            if (!placed) {
                diag_ = "no colour fits edge (" + std::to_string(x) + "," + std::to_string(v) + ") in round " +
                        std::to_string(round);
                return std::nullopt;
            }
        }
        // yellow: the tints of the cones whose base is the tuple
        for (auto & t : subsets_with(M.nodes, n - 1, v)) {
            if (!green_free_tuple(M, t))
                continue;
            std::uint64_t mask = 0;
            for (const auto & c : cones) {
                auto b = c.base;
                std::sort(b.begin(), b.end());
                int ti = p_.tint_index(c.tint);
                if (b == t && ti >= 0)
                    mask |= std::uint64_t{1} << ti;
            }
            M.yellow[t] = mask;
        }
        auto vs = coloured_graph_check(M, p_);
        if (!vs.empty())
            throw VerificationError("rho strategy produced an invalid board: " + first_law(vs));
        return M;
    }

    auto RainbowTranscript::to_json(const Palette & p) const -> nlohmann::json
    {
        nlohmann::json bs = nlohmann::json::array();
        for (const auto & g : boards)
            bs.push_back(g.to_json(p));
        return {{"boards", bs},
                {"rounds_played", rounds_played},
                {"winner", player_name(winner)},
                {"losing_round", losing_round},
                {"diagnostic", diagnostic}};
    }

    auto run_rainbow_script(const Palette & p, int rounds, int m_total) -> RainbowTranscript
    {
        RainbowTranscript tr;
        ExistsRainbowStrategy e(p, m_total);
        auto board = rainbow_opening(p);
        if (auto vs = coloured_graph_check(board, p); !vs.empty())
            throw VerificationError("opening board is invalid: " + first_law(vs));
        tr.boards.push_back(board);
        tr.rounds_played = 1;
        e.start(board);
        if (!e.diagnostic().empty()) {
            tr.winner = Player::forall;
            tr.losing_round = 1;
            tr.diagnostic = e.diagnostic();
            return tr;
        }
        for (int r = 2; r <= rounds; ++r) {
            if (std::find(p.tints.begin(), p.tints.end(), -(r - 1)) == p.tints.end())
                break;
            auto next = e.respond(board, cone_script_move(p, r), r);
            tr.rounds_played = r;
            if (!next) {
                tr.winner = Player::forall;
                tr.losing_round = r;
                tr.diagnostic = e.diagnostic();
                return tr;
            }
            board = std::move(*next);
            tr.boards.push_back(board);
        }
        tr.winner = Player::exists;
        return tr;
    }

    namespace
    {
        class ConeSearch
        {
        public:
            ConeSearch(const Palette & p, int max_rounds, bool all_yellows) :
                p_(p), max_rounds_(max_rounds), all_yellows_(all_yellows)
            {
                for (const auto & c : p.colours())
                    if (c.kind != ColourKind::shade_red)
                        colours_.push_back(c);
            }

            // Last round exists can be forced to lose in, or max_rounds + 1 when she survives.
            auto best(const ColouredGraph & board, int round) -> int
            {
                ++positions_;
                if (round > max_rounds_ ||
                    std::find(p_.tints.begin(), p_.tints.end(), -(round - 1)) == p_.tints.end())
                    return max_rounds_ + 1;
                auto M = apply_cone_move(board, cone_script_move(p_, round));
                const int v = board.nodes;
                std::vector<int> open;
                for (int x = 0; x < v; ++x)
                    if (!M.label(x, v))
                        open.push_back(x);
                int result = round;
                std::function<bool(std::size_t)> colour = [&](std::size_t i) -> bool {
                    if (i == open.size())
                        return shade(M, v, round, result);
                    for (const auto & c : colours_) {
                        M.set(open[i], v, c);
                        if (edge_fits(M, open[i], v) && colour(i + 1))
                            return true;
                    }
                    M.edge[open[i] * M.nodes + v].reset();
                    M.edge[v * M.nodes + open[i]].reset();
                    return false;
                };
                colour(0);
                return result;
            }

            auto positions() const -> std::size_t { return positions_; }

        private:
            // Yellow on the new green-free tuples, then recurse. True once exists survives.
            auto shade(ColouredGraph & M, int v, int round, int & result) -> bool
            {
                std::vector<std::vector<int>> free;
                for (auto & t : subsets_with(M.nodes, p_.n - 1, v))
                    if (green_free_tuple(M, t))
                        free.push_back(t);
                const std::uint64_t full = all_tints(p_);
                std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
                    if (i == free.size()) {
                        if (!coloured_graph_check(M, p_).empty())
                            return false;
                        result = std::max(result, best(M, round + 1));
                        return result > max_rounds_;
                    }
                    if (!all_yellows_) {
                        M.yellow[free[i]] = full;
                        return rec(i + 1);
                    }
                    for (std::uint64_t m = 0; m <= full; ++m) {
                        M.yellow[free[i]] = m;
                        if (rec(i + 1))
                            return true;
                    }
                    return false;
                };
                bool done = rec(0);
                for (const auto & t : free)
                    M.yellow.erase(t);
                return done;
            }

            const Palette & p_;
            int max_rounds_;
            bool all_yellows_;
            std::vector<Colour> colours_;
            std::size_t positions_ = 0;
        };
    }

    auto rainbow_cone_dynamics(const Palette & p, int max_rounds, bool all_yellows) -> DynamicsResult
    {
        if (all_yellows && p.tints.size() > 6)
            throw UsageError("the full yellow enumeration is limited to 6 tints");
        DynamicsResult res;
        auto board = rainbow_opening(p);
        if (!coloured_graph_check(board, p).empty())
            throw VerificationError("opening board is invalid");
        ConeSearch s(p, max_rounds, all_yellows);
        int b = s.best(board, 2);
        res.positions = s.positions();
        res.forall_wins = b <= max_rounds;
        res.rounds = res.forall_wins ? b : max_rounds;
        return res;
    }
}
