#include "atomlab/error.hpp"
#include "atomlab/repsearch.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>

namespace atomlab
{
    namespace
    {
        // (kind, structure hash, base) -> fully searched without a representation
        std::mutex cache_mutex;
        std::map<std::tuple<int, std::uint64_t, int>, bool> none_cache;

        auto cached_none(int kind, std::uint64_t h, int b) -> bool
        {
            std::lock_guard<std::mutex> lock(cache_mutex);
            return none_cache.count({kind, h, b}) != 0;
        }

        void remember_none(int kind, std::uint64_t h, int b)
        {
            std::lock_guard<std::mutex> lock(cache_mutex);
            none_cache[{kind, h, b}] = true;
        }

        struct Fnv
        {
            std::uint64_t h = 1469598103934665603ULL;
            void add(std::uint64_t v)
            {
                for (int i = 0; i < 8; ++i) {
                    h ^= (v >> (8 * i)) & 0xff;
                    h *= 1099511628211ULL;
                }
            }
        };

        enum class Outcome
        {
            found,
            none,
            budget
        };

        class RaSearch
        {
        public:
            RaSearch(const RaAtomStructure & s, int base, std::size_t budget) :
                s_(s), B_(base), A_(static_cast<int>(s.size())), budget_(budget),
                lab_(static_cast<std::size_t>(base) * base, -1), idx_(base, -1), used_(s.size(), 0)
            {
                for (AtomId a = 0; a < A_; ++a)
                    if (!s.is_identity(a))
                        diverse_.push_back(a);
            }

            auto run() -> Outcome
            {
                try {
                    if (point(0))
                        return Outcome::found;
                }
                catch (const BudgetExceeded &) {
                    return Outcome::budget;
                }
                return Outcome::none;
            }

            auto rep() const -> RaRepresentation { return {B_, lab_}; }
            auto nodes() const -> std::size_t { return nodes_; }

        private:
            auto L(int x, int y) const -> AtomId { return lab_[static_cast<std::size_t>(x) * B_ + y]; }

            void set(int x, int y, AtomId a)
            {
                lab_[static_cast<std::size_t>(x) * B_ + y] = a;
                if (x != y)
                    lab_[static_cast<std::size_t>(y) * B_ + x] = a < 0 ? -1 : s_.converse(a);
            }

            void tick()
            {
                if (++nodes_ > budget_)
                    throw BudgetExceeded("representation search", nodes_);
            }

            // Every ordered triangle on the points {x, y, z} whose three labels are set.
            auto triangles_ok(int x, int y, int z) const -> bool
            {
                const int pts[3] = {x, y, z};
                for (int p : pts)
                    for (int q : pts)
                        for (int r : pts) {
                            AtomId a = L(p, q), b = L(q, r), c = L(p, r);
                            if (a >= 0 && b >= 0 && c >= 0 && !s_.consistent(a, b, c))
                                return false;
                        }
                return true;
            }

            auto unused() const -> int
            {
                int k = 0;
                for (AtomId a = 0; a < A_; ++a)
                    k += used_[a] == 0;
                return k;
            }

            void use(AtomId a, int d)
            {
                used_[a] += d;
                used_[s_.converse(a)] += d;
            }

            auto point(int m) -> bool
            {
                if (m == B_)
                    return unused() == 0 && witnesses_ok();
                const auto & ids = s_.identities();
                // points sorted by identity atom
                for (int k = m == 0 ? 0 : idx_[m - 1]; k < static_cast<int>(ids.size()); ++k) {
                    tick();
                    idx_[m] = k;
                    set(m, m, ids[k]);
                    ++used_[ids[k]];
                    if (triangles_ok(m, m, m) && edge(m, 0))
                        return true;
                    --used_[ids[k]];
                    set(m, m, -1);
                }
                idx_[m] = -1;
                return false;
            }

            // Labels (x, m) for x = from..m-1, then the next point.
            auto edge(int m, int x) -> bool
            {
                if (x == m)
                    return point(m + 1);
                // atoms still missing must fit on the pairs left
                const long long pairs_left = static_cast<long long>(B_) * (B_ - 1) - 2LL * (static_cast<long long>(m) * (m - 1) / 2 + x) +
                                             static_cast<long long>(B_ - m - 1);
                if (unused() > pairs_left)
                    return false;
                AtomId lo = -1;
                // first row sorted within each identity class
                if (x == 0 && m >= 2 && idx_[m] == idx_[m - 1])
                    lo = L(0, m - 1);
                for (AtomId a : diverse_) {
                    if (a < lo)
                        continue;
                    tick();
                    set(x, m, a);
                    use(a, 1);
                    bool ok = true;
                    for (int y = 0; y < m && ok; ++y)
                        if (y < x || y == x)
                            ok = triangles_ok(x, y, m);
                    if (ok && edge(m, x + 1))
                        return true;
                    use(a, -1);
                    set(x, m, -1);
                }
                return false;
            }

            auto witnesses_ok() const -> bool
            {
                for (int x = 0; x < B_; ++x)
                    for (int z = 0; z < B_; ++z) {
                        AtomId c = L(x, z);
                        for (AtomId a = 0; a < A_; ++a)
                            for (AtomId b = 0; b < A_; ++b) {
                                if (!s_.consistent(a, b, c))
                                    continue;
                                int y = 0;
                                while (y < B_ && !(L(x, y) == a && L(y, z) == b))
                                    ++y;
                                if (y == B_)
                                    return false;
                            }
                    }
                return true;
            }

            const RaAtomStructure & s_;
            int B_;
            int A_;
            std::size_t budget_;
            std::size_t nodes_ = 0;
            std::vector<AtomId> lab_;
            std::vector<int> idx_;
            std::vector<int> used_;
            std::vector<AtomId> diverse_;
        };

        class CaSearch
        {
        public:
            CaSearch(const CaAtomStructure & f, int base, std::size_t budget) :
                f_(f), n_(f.dim()), B_(base), A_(static_cast<int>(f.size())), budget_(budget)
            {
                T_ = 1;
                for (int i = 0; i < n_; ++i)
                    T_ *= static_cast<std::size_t>(B_);
                lab_.assign(T_, -1);
                used_.assign(A_, 0);
                tup_.resize(T_ * n_);
                for (std::size_t idx = 0; idx < T_; ++idx) {
                    std::size_t k = idx;
                    for (int i = n_ - 1; i >= 0; --i) {
                        tup_[idx * n_ + i] = static_cast<int>(k % B_);
                        k /= B_;
                    }
                }
                stride_.assign(n_, 1);
                for (int i = n_ - 2; i >= 0; --i)
                    stride_[i] = stride_[i + 1] * B_;
            }

            auto run() -> Outcome
            {
                try {
                    if (branch())
                        return Outcome::found;
                }
                catch (const BudgetExceeded &) {
                    return Outcome::budget;
                }
                return Outcome::none;
            }

            auto rep() const -> CaRepresentation { return {n_, B_, lab_}; }
            auto nodes() const -> std::size_t { return nodes_; }

        private:
            auto coord(std::size_t idx, int i) const -> int { return tup_[idx * n_ + i]; }

            auto with(std::size_t idx, int i, int v) const -> std::size_t
            {
                return idx + static_cast<std::size_t>(v - coord(idx, i)) * stride_[i];
            }

            // Sets idx to a and everything it forces. False on a conflict; the trail keeps what was set.
            auto assign(std::size_t idx, AtomId a) -> bool
            {
                if (lab_[idx] >= 0)
                    return lab_[idx] == a;
                for (int i = 0; i < n_; ++i)
                    for (int j = 0; j < n_; ++j)
                        if (i != j && (coord(idx, i) == coord(idx, j)) != f_.diagonal(i, j).contains(a))
                            return false;
                for (int i = 0; i < n_; ++i)
                    for (int v = 0; v < B_; ++v) {
                        AtomId b = lab_[with(idx, i, v)];
                        if (b >= 0 && !f_.same(i, a, b))
                            return false;
                    }
                lab_[idx] = a;
                ++used_[a];
                trail_.push_back(idx);
                for (int i = 0; i < n_; ++i)
                    if (!line_ok(idx, i))
                        return false;
                if (f_.has_transpositions())
                    for (int i = 0; i < n_; ++i)
                        for (int j = i + 1; j < n_; ++j) {
                            std::size_t u = with(with(idx, i, coord(idx, j)), j, coord(idx, i));
                            if (!assign(u, f_.transpose(i, j, a)))
                                return false;
                        }
                if (f_.has_replacements())
                    for (int i = 0; i < n_; ++i)
                        for (int j = 0; j < n_; ++j)
                            if (i != j && !assign(with(idx, i, coord(idx, j)), f_.replace(i, j, a)))
                                return false;
                return true;
            }

            // A full i-line must show its whole ≡_i class.
            auto line_ok(std::size_t idx, int i) const -> bool
            {
                std::vector<AtomId> seen;
                for (int v = 0; v < B_; ++v) {
                    AtomId b = lab_[with(idx, i, v)];
                    if (b < 0)
                        return true;
                    seen.push_back(b);
                }
                AtomId a = lab_[idx];
                for (AtomId b : f_.class_members(i, f_.cls(i, a)))
                    if (std::find(seen.begin(), seen.end(), b) == seen.end())
                        return false;
                return true;
            }

            void undo(std::size_t mark)
            {
                while (trail_.size() > mark) {
                    --used_[lab_[trail_.back()]];
                    lab_[trail_.back()] = -1;
                    trail_.pop_back();
                }
            }

            auto branch() -> bool
            {
                std::size_t idx = 0;
                while (idx < T_ && lab_[idx] >= 0)
                    ++idx;
                if (idx == T_)
                    return std::all_of(used_.begin(), used_.end(), [](int u) { return u > 0; });
                int missing = 0;
                for (int u : used_)
                    missing += u == 0;
                if (static_cast<std::size_t>(missing) > T_ - trail_.size())
                    return false;
                for (AtomId a = 0; a < A_; ++a) {
                    if (++nodes_ > budget_)
                        throw BudgetExceeded("representation search", nodes_);
                    std::size_t mark = trail_.size();
                    if (assign(idx, a) && branch())
                        return true;
                    undo(mark);
                }
                return false;
            }

            const CaAtomStructure & f_;
            int n_;
            int B_;
            int A_;
            std::size_t budget_;
            std::size_t nodes_ = 0;
            std::size_t T_ = 0;
            std::vector<AtomId> lab_;
            std::vector<int> used_;
            std::vector<int> tup_;
            std::vector<std::size_t> stride_;
            std::vector<std::size_t> trail_;
        };

        auto ca_refusal(const CaAtomStructure & f) -> std::string
        {
            const int n = f.dim();
            AtomSet all_eq = AtomSet::full(f.size());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j)
                        continue;
                    if (f.diagonal(i, j) != f.diagonal(j, i))
                        return "diagonal d_" + std::to_string(i) + std::to_string(j) + " differs from its mirror";
                    if (f.diagonal(i, j).empty())
                        return "diagonal d_" + std::to_string(i) + std::to_string(j) + " is empty";
                    all_eq &= f.diagonal(i, j);
                }
            if (all_eq.empty())
                return "no atom lies below every diagonal";
            return {};
        }

        template <class Rep, class Search, class Structure>
        auto search_bases(const Structure & s, int kind, std::uint64_t h, const RepSearchOptions & opt,
                          const std::function<bool(int)> & hopeless) -> RepSearchResult<Rep>
        {
            RepSearchResult<Rep> res;
            const int maxb = std::max(0, opt.max_base);
            std::vector<Outcome> outcome(maxb + 1, Outcome::none);
            std::vector<std::optional<Rep>> reps(maxb + 1);
            std::vector<std::size_t> nodes(maxb + 1, 0);
            auto one = [&](int b) {
                if (hopeless(b) || cached_none(kind, h, b))
                    return;
                Search srch(s, b, opt.node_budget);
                outcome[b] = srch.run();
                nodes[b] = srch.nodes();
                if (outcome[b] == Outcome::found)
                    reps[b] = srch.rep();
                else if (outcome[b] == Outcome::none)
                    remember_none(kind, h, b);
            };
            if (opt.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
                for (int b = 1; b <= maxb; ++b)
                    one(b);
            }
            else {
                for (int b = 1; b <= maxb; ++b) {
                    one(b);
                    if (outcome[b] == Outcome::found)
                        break;
                }
            }
            bool clean = true;
            for (int b = 1; b <= maxb; ++b) {
                res.nodes += nodes[b];
                if (outcome[b] == Outcome::found) {
                    res.rep = reps[b];
                    break;
                }
                if (outcome[b] == Outcome::budget) {
                    res.budget_hit = true;
                    clean = false;
                }
                if (clean)
                    res.exhausted_up_to = b;
            }
            if (res.rep) {
                auto chk = verify_representation(s, *res.rep);
                if (!chk.ok)
                    throw VerificationError("search returned a representation that fails verification: " +
                                            chk.violation);
            }
            return res;
        }
    }

    auto structure_hash(const RaAtomStructure & s) -> std::uint64_t
    {
        Fnv f;
        const int A = static_cast<int>(s.size());
        f.add(A);
        for (AtomId e : s.identities())
            f.add(e);
        for (AtomId a = 0; a < A; ++a)
            f.add(s.converse(a));
        for (AtomId a = 0; a < A; ++a)
            for (AtomId b = 0; b < A; ++b)
                for (AtomId c = 0; c < A; ++c)
                    f.add(s.consistent(a, b, c));
        return f.h;
    }

    auto structure_hash(const CaAtomStructure & ca) -> std::uint64_t
    {
        Fnv f;
        const int n = ca.dim();
        const int A = static_cast<int>(ca.size());
        f.add(n);
        f.add(A);
        for (int i = 0; i < n; ++i)
            for (AtomId a = 0; a < A; ++a)
                f.add(ca.cls(i, a));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (auto w : ca.diagonal(i, j).words())
                    f.add(w);
        f.add(ca.has_transpositions());
        if (ca.has_transpositions())
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    for (AtomId a = 0; a < A; ++a)
                        f.add(ca.transpose(i, j, a));
        f.add(ca.has_replacements());
        if (ca.has_replacements())
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j)
                        for (AtomId a = 0; a < A; ++a)
                            f.add(ca.replace(i, j, a));
        return f.h;
    }

    auto find_square_representation(const RaAtomStructure & s, const RepSearchOptions & opt) -> RaSearchResult
    {
        const long long A = static_cast<long long>(s.size());
        const long long ids = static_cast<long long>(s.identities().size());
        // every atom needs a pair to sit on
        auto hopeless = [&](int b) {
            return ids > b || A - ids > static_cast<long long>(b) * (b - 1);
        };
        return search_bases<RaRepresentation, RaSearch>(s, 0, structure_hash(s), opt, hopeless);
    }

    auto find_ca_representation(const CaAtomStructure & f, const RepSearchOptions & opt) -> CaSearchResult
    {
        CaSearchResult res;
        res.refusal = ca_refusal(f);
        if (!res.refusal.empty())
            return res;
        const int n = f.dim();
        auto hopeless = [&](int b) {
            std::size_t T = 1;
            for (int i = 0; i < n; ++i)
                T *= static_cast<std::size_t>(b);
            return T < f.size();
        };
        return search_bases<CaRepresentation, CaSearch>(f, 1, structure_hash(f), opt, hopeless);
    }

    auto pad_representation(const RaAtomStructure & s, const RaRepresentation & r, int p)
        -> std::optional<RaRepresentation>
    {
        const int B = r.base;
        if (p < 0 || p >= B)
            throw UsageError("no such base point");
        RaRepresentation out;
        out.base = B + 1;
        out.label.assign(static_cast<std::size_t>(B + 1) * (B + 1), -1);
        auto put = [&](int x, int y, AtomId a) { out.label[static_cast<std::size_t>(x) * (B + 1) + y] = a; };
        for (int x = 0; x < B; ++x)
            for (int y = 0; y < B; ++y)
                put(x, y, r.at(x, y));
        for (int y = 0; y < B; ++y) {
            put(B, y, r.at(p, y));
            put(y, B, r.at(y, p));
        }
        put(B, B, r.at(p, p));
        for (AtomId a = 0; a < static_cast<AtomId>(s.size()); ++a) {
            if (s.is_identity(a))
                continue;
            put(p, B, a);
            put(B, p, s.converse(a));
            if (verify_representation(s, out).ok)
                return out;
        }
        return std::nullopt;
    }

    auto RaRepresentation::to_json() const -> nlohmann::json
    {
        return {{"schema_version", 1}, {"type", "ra-representation"}, {"base", base}, {"labels", label}};
    }

    auto RaRepresentation::from_json(const nlohmann::json & j) -> RaRepresentation
    {
        try {
            if (j.at("type").get<std::string>() != "ra-representation")
                throw StructuralError("not an ra-representation document");
            RaRepresentation r;
            r.base = j.at("base").get<int>();
            r.label = j.at("labels").get<std::vector<AtomId>>();
            return r;
        }
        catch (const nlohmann::json::exception & e) {
            throw StructuralError(std::string("malformed representation: ") + e.what());
        }
    }

    auto CaRepresentation::to_json() const -> nlohmann::json
    {
        return {{"schema_version", 1}, {"type", "ca-representation"}, {"n", n}, {"base", base}, {"labels", label}};
    }

    auto CaRepresentation::from_json(const nlohmann::json & j) -> CaRepresentation
    {
        try {
            if (j.at("type").get<std::string>() != "ca-representation")
                throw StructuralError("not a ca-representation document");
            CaRepresentation r;
            r.n = j.at("n").get<int>();
            r.base = j.at("base").get<int>();
            r.label = j.at("labels").get<std::vector<AtomId>>();
            return r;
        }
        catch (const nlohmann::json::exception & e) {
            throw StructuralError(std::string("malformed representation: ") + e.what());
        }
    }

    template <class Rep>
    auto RepSearchResult<Rep>::to_json() const -> nlohmann::json
    {
        nlohmann::json j = {{"schema_version", 1},
                            {"type", "representation-search"},
                            {"found", rep.has_value()},
                            {"exhausted_up_to", exhausted_up_to},
                            {"budget_hit", budget_hit},
                            {"nodes", nodes}};
        if (rep)
            j["representation"] = rep->to_json();
        if (!refusal.empty())
            j["refusal"] = refusal;
        return j;
    }

    template struct RepSearchResult<RaRepresentation>;
    template struct RepSearchResult<CaRepresentation>;

    auto RepCheck::to_json() const -> nlohmann::json
    {
        nlohmann::json j = {{"schema_version", 1}, {"type", "verification"}, {"ok", ok}};
        if (!ok) {
            j["violation"] = violation;
            j["witness"] = witness;
        }
        return j;
    }
}
