#include "atomlab/hirsch.hpp"

#include "atomlab/error.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <map>
#include <numeric>

namespace atomlab
{
    namespace
    {
        auto checked_mul(std::uint64_t a, std::uint64_t b) -> std::uint64_t
        {
            std::uint64_t r;
            if (__builtin_mul_overflow(a, b, &r))
                throw Error("integer overflow in Hirsch size arithmetic");
            return r;
        }

        auto checked_add(std::uint64_t a, std::uint64_t b) -> std::uint64_t
        {
            std::uint64_t r;
            if (__builtin_add_overflow(a, b, &r))
                throw Error("integer overflow in Hirsch size arithmetic");
            return r;
        }

        // Column-order position of the cell (x,y), x < y.
        auto cell(int x, int y) -> int
        {
            if (x > y)
                std::swap(x, y);
            return y * (y - 1) / 2 + x;
        }

        auto cell_count(int m) -> int { return m * (m - 1) / 2; }
    }

    auto hirsch_kappa(std::uint64_t x, std::uint64_t y) -> std::uint64_t
    {
        std::uint64_t k = 0;
        for (std::uint64_t i = 0; i < y; ++i)
            k = checked_add(1, checked_mul(x, k));
        return k;
    }

    auto hirsch_psi(std::uint64_t n, std::uint64_t r) -> std::uint64_t
    {
        if (n == 0)
            throw UsageError("psi needs n >= 1");
        const std::uint64_t e = checked_mul(n - 1, r);
        return checked_add(hirsch_kappa(e, e), 1);
    }

    auto hirsch_bin_size(std::uint64_t n, std::uint64_t r) -> std::uint64_t
    {
        return checked_add(1, checked_mul(checked_mul(n - 1, r), hirsch_psi(n, r)));
    }

    HirschBin::HirschBin(int n, int r) : n_(n), r_(r)
    {
        if (n < 2 || r < 0)
            throw UsageError("Bin(n,r) needs n >= 2 and r >= 0");
        const auto sz = hirsch_bin_size(n, r);
        if (sz > max_size)
            throw BudgetExceeded("|Bin(" + std::to_string(n) + "," + std::to_string(r) + ")| = " + std::to_string(sz) +
                                     " exceeds " + std::to_string(max_size),
                                 sz);
        psi_ = static_cast<int>(hirsch_psi(n, r));
        size_ = static_cast<int>(sz);
    }

    auto HirschBin::name(int b) const -> std::string
    {
        if (b == id)
            return "Id";
        return "a^" + std::to_string(copy(b)) + "(" + std::to_string(colour(b)) + "," + std::to_string(index(b)) + ")";
    }

    auto HirschBin::find(const std::string & name) const -> std::optional<int>
    {
        for (int b = 0; b < size_; ++b)
            if (this->name(b) == name)
                return b;
        return std::nullopt;
    }

    auto HirschBin::forbidden(int l, int mu, int rho) const -> bool
    {
        if (l == id)
            return mu != rho;
        if (mu == id || rho == id)
            return false;
        return colour(l) == colour(mu) && index(l) == index(mu) && colour(rho) == colour(l) && index(rho) <= index(l);
    }

    auto HirschAlgebra::forbidden(int l, int mu, int rho) const -> bool
    {
        if (bin_.forbidden(l, mu, rho))
            return true;
        return std::find(extra_.begin(), extra_.end(), std::array<int, 3>{l, mu, rho}) != extra_.end();
    }

    auto HirschAlgebra::entry(AtomId f, int x, int y) const -> int
    {
        if (x == y)
            return HirschBin::id;
        return cells_[static_cast<std::size_t>(f) * cell_count(p_.m) + cell(x, y)];
    }

    auto HirschAlgebra::matrix(AtomId f) const -> std::vector<int>
    {
        const int m = p_.m;
        std::vector<int> out(m * m);
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
                out[x * m + y] = entry(f, x, y);
        return out;
    }

    auto HirschAlgebra::key_of(const std::vector<int> & mat) const -> std::uint64_t
    {
        const int m = p_.m;
        std::uint64_t k = 0;
        for (int y = 1; y < m; ++y)
            for (int x = 0; x < y; ++x)
                k = k * bin_.size() + mat[x * m + y];
        return k;
    }

    auto HirschAlgebra::valid(const std::vector<int> & mat) const -> bool
    {
        const int m = p_.m;
        if (mat.size() != static_cast<std::size_t>(m * m))
            return false;
        for (int x = 0; x < m; ++x) {
            if (mat[x * m + x] != HirschBin::id)
                return false;
            for (int y = 0; y < m; ++y) {
                int v = mat[x * m + y];
                if (v < 0 || v >= bin_.size() || v != mat[y * m + x])
                    return false;
            }
        }
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
                for (int z = 0; z < m; ++z)
                    if (forbidden(mat[x * m + y], mat[y * m + z], mat[x * m + z]))
                        return false;
        return true;
    }

    auto HirschAlgebra::find(const std::vector<int> & mat) const -> std::optional<AtomId>
    {
        const int m = p_.m;
        if (mat.size() != static_cast<std::size_t>(m * m))
            return std::nullopt;
        for (int x = 0; x < m; ++x) {
            if (mat[x * m + x] != HirschBin::id)
                return std::nullopt;
            for (int y = 0; y < m; ++y)
                if (mat[x * m + y] != mat[y * m + x] || mat[x * m + y] < 0 || mat[x * m + y] >= bin_.size())
                    return std::nullopt;
        }
        auto k = key_of(mat);
        auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
        if (it == keys_.end() || *it != k)
            return std::nullopt;
        return static_cast<AtomId>(it - keys_.begin());
    }

    auto HirschAlgebra::substitute(AtomId f, const std::vector<int> & tau) const -> std::optional<AtomId>
    {
        const int m = p_.m;
        std::vector<int> g(m * m);
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
                g[x * m + y] = entry(f, tau[x], tau[y]);
        return find(g);
    }

    auto hirsch_algebra(const HirschParams & p, const HirschOptions & opt) -> HirschAlgebra
    {
        if (p.m < 3 || p.n < 2 || p.r < 0)
            throw UsageError("C(m,n,r) needs m >= 3, n >= 2, r >= 0");
        HirschAlgebra alg(p, HirschBin(p.n, p.r));
        alg.extra_ = opt.extra_forbidden;
        const int B = alg.bin_.size();
        const int m = p.m;
        const int T = cell_count(m);
        {
            std::uint64_t span = 1;
            for (int c = 0; c < T; ++c)
                if (__builtin_mul_overflow(span, static_cast<std::uint64_t>(B), &span))
                    throw BudgetExceeded("matrix keys of C(m,n,r) do not fit 64 bits", 0);
        }
        alg.tri_.assign(static_cast<std::size_t>(B) * B * B, 0);
        for (int a = 0; a < B; ++a)
            for (int b = 0; b < B; ++b)
                for (int c = 0; c < B; ++c) {
                    bool bad = alg.forbidden(a, b, c) || alg.forbidden(a, c, b) || alg.forbidden(b, a, c) ||
                               alg.forbidden(b, c, a) || alg.forbidden(c, a, b) || alg.forbidden(c, b, a);
                    alg.tri_[(static_cast<std::size_t>(a) * B + b) * B + c] = bad ? 0 : 1;
                }
        if (!alg.triangle_ok(0, 0, 0))
            throw StructuralError("F(m,n,r) is empty: (Id,Id,Id) is forbidden");

        std::vector<char> edge_ok(B);
        for (int b = 0; b < B; ++b)
            edge_ok[b] = alg.triangle_ok(HirschBin::id, b, b);
        // cell order pairs
        std::vector<std::pair<int, int>> order;
        for (int y = 1; y < m; ++y)
            for (int x = 0; x < y; ++x)
                order.emplace_back(x, y);

        std::vector<std::vector<std::uint16_t>> parts(B);
        std::atomic<std::uint64_t> total{0};
        std::atomic<bool> over{false};
        auto run = [&](int first) {
            if (!edge_ok[first])
                return;
            std::vector<int> cur(T, 0);
            cur[0] = first;
            auto & out = parts[first];
            auto rec = [&](auto && self, int c) -> void {
                if (over.load(std::memory_order_relaxed))
                    return;
                if (c == T) {
                    if (total.fetch_add(1, std::memory_order_relaxed) + 1 > opt.budget) {
                        over = true;
                        return;
                    }
                    for (int v : cur)
                        out.push_back(static_cast<std::uint16_t>(v));
                    return;
                }
                auto [x, y] = order[c];
                for (int v = 0; v < B; ++v) {
                    if (!edge_ok[v])
                        continue;
                    bool ok = true;
                    for (int w = 0; w < x && ok; ++w)
                        ok = alg.triangle_ok(cur[cell(w, x)], cur[cell(w, y)], v);
                    if (!ok)
                        continue;
                    cur[c] = v;
                    self(self, c + 1);
                }
            };
            rec(rec, 1);
        };
        if (opt.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
            for (int first = 0; first < B; ++first)
                run(first);
        }
        else {
            for (int first = 0; first < B; ++first)
                run(first);
        }
        if (over)
            throw BudgetExceeded("F(" + std::to_string(m) + "," + std::to_string(p.n) + "," + std::to_string(p.r) +
                                     ") exceeds the budget of " + std::to_string(opt.budget) + " atoms",
                                 total.load());
        for (auto & part : parts)
            alg.cells_.insert(alg.cells_.end(), part.begin(), part.end());
        const std::size_t N = alg.cells_.size() / T;
        alg.keys_.resize(N);
        for (std::size_t f = 0; f < N; ++f) {
            std::uint64_t k = 0;
            for (int c = 0; c < T; ++c)
                k = k * B + alg.cells_[f * T + c];
            alg.keys_[f] = k;
        }

        CaAtomStructure::Data d;
        d.n = m;
        d.names.resize(N);
        for (std::size_t f = 0; f < N; ++f) {
            std::string s = "[";
            for (int c = 0; c < T; ++c)
                s += (c ? "," : "") + alg.bin_.name(alg.cells_[f * T + c]);
            d.names[f] = s + "]";
        }
        d.cls.assign(m, std::vector<int>(N));
        for (int x = 0; x < m; ++x) {
            std::vector<std::pair<std::uint64_t, AtomId>> red(N);
            for (std::size_t f = 0; f < N; ++f) {
                std::uint64_t k = 0;
                for (int c = 0; c < T; ++c)
                    if (order[c].first != x && order[c].second != x)
                        k = k * B + alg.cells_[f * T + c];
                red[f] = {k, static_cast<AtomId>(f)};
            }
            std::sort(red.begin(), red.end());
            int id = -1;
            for (std::size_t i = 0; i < N; ++i) {
                if (i == 0 || red[i].first != red[i - 1].first)
                    ++id;
                d.cls[x][red[i].second] = id;
            }
        }
        d.diag.assign(m, std::vector<AtomSet>(m, AtomSet(N)));
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
                for (std::size_t f = 0; f < N; ++f)
                    if (alg.entry(static_cast<AtomId>(f), x, y) == HirschBin::id)
                        d.diag[x][y].insert(static_cast<AtomId>(f));

        auto family = [&](auto make_tau, bool ordered) -> std::vector<std::vector<std::vector<AtomId>>> {
            std::vector<std::vector<std::vector<AtomId>>> fam(m, std::vector<std::vector<AtomId>>(m));
            for (int i = 0; i < m; ++i)
                for (int j = ordered ? 0 : i + 1; j < m; ++j) {
                    if (i == j)
                        continue;
                    auto tau = make_tau(i, j);
                    auto & map = fam[i][j];
                    map.resize(N);
                    for (std::size_t f = 0; f < N; ++f) {
                        auto g = alg.substitute(static_cast<AtomId>(f), tau);
                        if (!g)
                            return {};
                        map[f] = *g;
                    }
                }
            return fam;
        };
        auto transposition = [m](int i, int j) {
            std::vector<int> tau(m);
            std::iota(tau.begin(), tau.end(), 0);
            std::swap(tau[i], tau[j]);
            return tau;
        };
        auto replacement = [m](int i, int j) {
            std::vector<int> tau(m);
            std::iota(tau.begin(), tau.end(), 0);
            tau[i] = j;
            return tau;
        };
        d.transposition = family(transposition, false);
        d.replacement = family(replacement, true);
        d.doc = {{"rule", "hirsch"}, {"params", {{"m", p.m}, {"n", p.n}, {"r", p.r}}}};
        alg.ca_ = CaAtomStructure::from_data(std::move(d));
        return alg;
    }

    auto commutativity_witness(const HirschAlgebra & alg, AtomId f, AtomId g, int x, int y) -> CommutativityWitness
    {
        const int m = alg.m();
        CommutativityWitness w;
        for (int u = 0; u < m; ++u)
            for (int v = 0; v < m; ++v)
                if (u != x && u != y && v != x && v != y && alg.entry(f, u, v) != alg.entry(g, u, v)) {
                    w.diagnostic = "f and g differ at (" + std::to_string(u) + "," + std::to_string(v) +
                                   ") which avoids x and y";
                    return w;
                }
        auto finish = [&](std::vector<int> h, int rule) {
            w.h = std::move(h);
            w.rule = rule;
            if (!alg.valid(w.h)) {
                w.diagnostic = "h is not in F(m,n,r)";
                return w;
            }
            for (int u = 0; u < m; ++u)
                for (int v = 0; v < m; ++v) {
                    if (u != x && v != x && w.h[u * m + v] != alg.entry(f, u, v)) {
                        w.diagnostic = "h is not ≡_x f";
                        return w;
                    }
                    if (u != y && v != y && w.h[u * m + v] != alg.entry(g, u, v)) {
                        w.diagnostic = "h is not ≡_y g";
                        return w;
                    }
                }
            w.found = true;
            return w;
        };
        if (f == g || x == y)
            return finish(alg.matrix(f), 0);
        for (int z = 0; z < m; ++z) {
            if (z == x || z == y)
                continue;
            if (alg.entry(f, y, z) == HirschBin::id) {
                std::vector<int> h(m * m);
                for (int u = 0; u < m; ++u)
                    for (int v = 0; v < m; ++v)
                        h[u * m + v] = alg.entry(g, u == y ? z : u, v == y ? z : v);
                return finish(std::move(h), 1);
            }
            if (alg.entry(g, z, x) == HirschBin::id) {
                std::vector<int> h(m * m);
                for (int u = 0; u < m; ++u)
                    for (int v = 0; v < m; ++v)
                        h[u * m + v] = alg.entry(f, u == x ? z : u, v == x ? z : v);
                return finish(std::move(h), 2);
            }
        }
        const auto & bin = alg.bin();
        if (alg.params().r == 0) {
            w.diagnostic = "no non-identity elements with r = 0";
            return w;
        }
        std::vector<char> used(alg.params().n - 1, 0);
        for (int z = 0; z < m; ++z) {
            if (z == x || z == y)
                continue;
            int a = alg.entry(f, y, z), b = alg.entry(g, x, z);
            if (a != HirschBin::id && b != HirschBin::id && bin.colour(a) == bin.colour(b))
                used[bin.colour(a)] = 1;
        }
        int i = 0;
        while (i < static_cast<int>(used.size()) && used[i])
            ++i;
        if (i == static_cast<int>(used.size())) {
            w.diagnostic = "every colour below n-1 is blocked (needs m <= n)";
            return w;
        }
        std::vector<int> h(m * m);
        for (int u = 0; u < m; ++u)
            for (int v = 0; v < m; ++v) {
                if (u == v)
                    h[u * m + v] = HirschBin::id;
                else if ((u == x && v == y) || (u == y && v == x))
                    h[u * m + v] = bin.encode(i, 0, 0);
                else if (u != x && v != x)
                    h[u * m + v] = alg.entry(f, u, v);
                else
                    h[u * m + v] = alg.entry(g, u, v);
            }
        return finish(std::move(h), 3);
    }

    namespace
    {
        auto restriction_of(const HirschAlgebra & large, AtomId g, int m) -> std::vector<int>
        {
            std::vector<int> out(m * m);
            for (int x = 0; x < m; ++x)
                for (int y = 0; y < m; ++y)
                    out[x * m + y] = large.entry(g, x, y);
            return out;
        }

        void note(NeatReductReport & rep, const std::string & what)
        {
            if (rep.violations++ == 0)
                rep.first_violation = what;
        }

        auto all_maps(int m) -> std::vector<std::vector<int>>
        {
            std::vector<std::vector<int>> out;
            std::vector<int> tau(m, 0);
            while (true) {
                out.push_back(tau);
                int i = m - 1;
                while (i >= 0 && ++tau[i] == m)
                    tau[i--] = 0;
                if (i < 0)
                    break;
            }
            return out;
        }

        auto materialized(const HirschAlgebra & small, const HirschAlgebra & large) -> NeatReductReport
        {
            const int m = small.m(), M = large.m();
            NeatReductReport rep;
            rep.path = M == m ? "identity" : "materialized";
            rep.small_atoms = small.size();
            rep.large_atoms = large.size();
            const std::size_t L = large.size();
            std::vector<AtomId> rho(L);
            std::vector<std::size_t> fiber(small.size(), 0);
            for (std::size_t g = 0; g < L; ++g) {
                auto f = small.find(restriction_of(large, static_cast<AtomId>(g), m));
                if (!f)
                    throw VerificationError("neat-reduct isomorphism: restriction of a large atom is not a small atom");
                rho[g] = *f;
                ++fiber[*f];
            }
            std::size_t before = rep.violations;
            for (std::size_t f = 0; f < small.size(); ++f)
                if (fiber[f] == 0)
                    note(rep, "atom " + small.structure().name(static_cast<AtomId>(f)) + " has no extension");
            rep.injective = rep.violations == before;
            before = rep.violations;

            // Atoms of Nr_m: components of the join of ≡_x, x >= m. They must be the fibers.
            const auto & S = small.structure();
            const auto & G = large.structure();
            std::vector<int> parent(L);
            std::iota(parent.begin(), parent.end(), 0);
            auto root = [&](int a) {
                while (parent[a] != a)
                    a = parent[a] = parent[parent[a]];
                return a;
            };
            for (int x = m; x < M; ++x)
                for (int c = 0; c < G.class_count(x); ++c) {
                    const auto & mem = G.class_members(x, c);
                    for (std::size_t i = 1; i < mem.size(); ++i)
                        parent[root(mem[i])] = root(mem[0]);
                }
            std::vector<int> comp_of_fiber(small.size(), -1);
            for (std::size_t g = 0; g < L; ++g) {
                int r = root(static_cast<int>(g));
                int & c = comp_of_fiber[rho[g]];
                if (c == -1)
                    c = r;
                else if (c != r)
                    note(rep, "a fiber splits across Nr_m atoms");
            }
            {
                std::map<int, AtomId> fiber_of_comp;
                for (std::size_t g = 0; g < L; ++g) {
                    auto [it, fresh] = fiber_of_comp.emplace(root(static_cast<int>(g)), rho[g]);
                    if (!fresh && it->second != rho[g])
                        note(rep, "an Nr_m atom meets two fibers");
                }
            }
            rep.surjective = rep.violations == before;
            before = rep.violations;

            for (int x = 0; x < m; ++x)
                for (int y = 0; y < m; ++y)
                    for (std::size_t g = 0; g < L; ++g)
                        if (G.diagonal(x, y).contains(static_cast<AtomId>(g)) != S.diagonal(x, y).contains(rho[g]))
                            note(rep, "d_" + std::to_string(x) + std::to_string(y) + " is not preserved");
            rep.diagonals = rep.violations == before;

            // c'_x h{f} = h c_x{f} iff each ≡'_x class restricts onto a whole ≡_x class.
            std::vector<std::pair<int, AtomId>> failing;
            for (int x = 0; x < m; ++x)
                for (int c = 0; c < G.class_count(x); ++c) {
                    const auto & mem = G.class_members(x, c);
                    std::vector<AtomId> rs;
                    for (AtomId g : mem)
                        rs.push_back(rho[g]);
                    std::sort(rs.begin(), rs.end());
                    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
                    int k = S.cls(x, rs[0]);
                    for (AtomId f : rs)
                        if (S.cls(x, f) != k)
                            throw VerificationError("neat-reduct isomorphism: a ≡'_x class restricts into two ≡_x classes");
                    if (rs.size() == S.class_members(x, k).size())
                        continue;
                    // members of the ≡_x class whose fibers this ≡'_x class misses
                    for (AtomId f : S.class_members(x, k))
                        if (!std::binary_search(rs.begin(), rs.end(), f))
                            failing.emplace_back(x, f);
                }
            std::sort(failing.begin(), failing.end());
            failing.erase(std::unique(failing.begin(), failing.end()), failing.end());
            for (auto [x, f] : failing)
                note(rep, "c_" + std::to_string(x) + " is not preserved at atom " + S.name(f));
            rep.cylindrifier_failures = std::move(failing);
            rep.cylindrifiers = rep.cylindrifier_failures.empty();

            before = rep.violations;
            for (auto & tau : all_maps(m)) {
                std::vector<int> big(M);
                std::iota(big.begin(), big.end(), 0);
                std::copy(tau.begin(), tau.end(), big.begin());
                for (std::size_t g = 0; g < L; ++g) {
                    auto gt = large.substitute(static_cast<AtomId>(g), big);
                    auto ft = small.substitute(rho[g], tau);
                    if (!gt || !ft)
                        note(rep, "F is not closed under a substitution");
                    else if (rho[*gt] != *ft)
                        note(rep, "s_tau is not preserved");
                }
            }
            rep.substitutions = rep.violations == before;
            return rep;
        }

        auto column_profile(const HirschAlgebra & small, const HirschOptions & opt) -> NeatReductReport
        {
            const int B = small.bin().size();
            NeatReductReport rep;
            rep.path = "column-profile";
            rep.small_atoms = small.size();
            if (small.m() != 3 || B > 64)
                throw BudgetExceeded("column-profile path needs m = 3 and |Bin| <= 64", static_cast<std::uint64_t>(B));
            // T[p][b]: bits c with the triangle (p, b, c) allowed; also needs the degenerate
            // triangles of the new edges.
            std::vector<std::uint64_t> T(static_cast<std::size_t>(B) * B, 0);
            std::uint64_t edge_ok = 0;
            for (int b = 0; b < B; ++b)
                if (small.triangle_ok(HirschBin::id, b, b))
                    edge_ok |= std::uint64_t{1} << b;
            for (int p = 0; p < B; ++p)
                for (int b = 0; b < B; ++b)
                    for (int c = 0; c < B; ++c)
                        if (small.triangle_ok(p, b, c))
                            T[p * B + b] |= std::uint64_t{1} << c;
            const std::size_t N = small.size();
            const auto & S = small.structure();
            // profile[x][f]: for each value of the column entry at the smaller remaining node,
            // a row of allowed values at the larger one.
            std::vector<std::vector<std::uint64_t>> prof(3, std::vector<std::uint64_t>(N * B, 0));
            std::vector<std::uint64_t> counts(N, 0);
            bool ok = true;
#pragma omp parallel for schedule(static) if (opt.exec == Exec::parallel) reduction(&& : ok)
            for (std::size_t fi = 0; fi < N; ++fi) {
                const AtomId f = static_cast<AtomId>(fi);
                for (int x = 0; x < 3; ++x) {
                    int y = x == 0 ? 1 : 0, z = x == 2 ? 1 : 2;
                    int fxy = small.entry(f, x, y), fxz = small.entry(f, x, z), fyz = small.entry(f, y, z);
                    std::uint64_t * row = prof[x].data() + fi * B;
                    for (int b = 0; b < B; ++b) {
                        if (!((edge_ok >> b) & 1U))
                            continue;
                        std::uint64_t A = T[fxy * B + b] & edge_ok, C = T[fxz * B + b] & edge_ok;
                        for (std::uint64_t a = A; a; a &= a - 1) {
                            int cy = std::countr_zero(a);
                            std::uint64_t hit = C & T[fyz * B + cy];
                            row[cy] |= hit;
                            if (x == 0)
                                counts[fi] += std::popcount(hit);
                        }
                    }
                }
                bool any = false;
                for (int c = 0; c < B; ++c)
                    any = any || prof[0][fi * B + c] != 0;
                ok = ok && any;
            }
            if (!ok)
                note(rep, "some atom of F(3,n,r) has no extension");
            rep.injective = ok;
            rep.surjective = true;
            rep.diagonals = true;
            rep.substitutions = true;
            for (auto c : counts)
                rep.large_atoms += c;
            // f fails at x iff some g ≡_x f has an extension column f cannot take, i.e. the
            // profile of f is below the union over its class.
            for (int x = 0; x < 3; ++x)
                for (int c = 0; c < S.class_count(x); ++c) {
                    const auto & mem = S.class_members(x, c);
                    std::vector<std::uint64_t> all(B, 0);
                    for (AtomId f : mem)
                        for (int q = 0; q < B; ++q)
                            all[q] |= prof[x][static_cast<std::size_t>(f) * B + q];
                    for (AtomId f : mem)
                        if (!std::equal(all.begin(), all.end(), prof[x].data() + static_cast<std::size_t>(f) * B))
                            rep.cylindrifier_failures.emplace_back(x, f);
                }
            std::sort(rep.cylindrifier_failures.begin(), rep.cylindrifier_failures.end());
            for (auto [x, f] : rep.cylindrifier_failures)
                note(rep, "c_" + std::to_string(x) + " is not preserved at atom " + S.name(f));
            rep.cylindrifiers = rep.cylindrifier_failures.empty();
            return rep;
        }
    }

    auto hirsch_neat_reduct_iso(const HirschParams & p, int m_large, NeatPath path, const HirschOptions & opt)
        -> NeatReductReport
    {
        auto rep = neat_reduct_check(p, m_large, path, opt);
        if (rep.violations)
            throw VerificationError("neat-reduct isomorphism: " + rep.first_violation + " (" +
                                    std::to_string(rep.violations) + " violations)");
        return rep;
    }

    auto neat_reduct_check(const HirschParams & p, int m_large, NeatPath path, const HirschOptions & opt)
        -> NeatReductReport
    {
        if (m_large < p.m)
            throw UsageError("neat reduct needs m' >= m");
        auto small = hirsch_algebra(p, opt);
        if (path == NeatPath::column_profile || (path == NeatPath::automatic && m_large == p.m + 1 && p.m == 3 &&
                                                  small.bin().size() <= 64)) {
            if (m_large != p.m + 1)
                throw UsageError("column-profile path needs m' = m + 1");
            // Prefer the materialized path when the large side is small enough.
            const double B = small.bin().size();
            if (path == NeatPath::column_profile || static_cast<double>(small.size()) * B * B * B > 16.0 * opt.budget)
                return column_profile(small, opt);
        }
        if (m_large == p.m)
            return materialized(small, small);
        auto large = hirsch_algebra({m_large, p.n, p.r}, opt);
        return materialized(small, large);
    }

    auto neat_image(const HirschAlgebra & small, const HirschAlgebra & large, AtomId f) -> std::vector<AtomId>
    {
        std::vector<AtomId> out;
        auto want = small.matrix(f);
        for (std::size_t g = 0; g < large.size(); ++g)
            if (restriction_of(large, static_cast<AtomId>(g), small.m()) == want)
                out.push_back(static_cast<AtomId>(g));
        return out;
    }
}
