#include "atomlab/cyl_core.hpp"

#include "atomlab/error.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>

namespace atomlab
{
    auto basic_matrix_violation(const RaAtomStructure & s, const BasicMatrix & M) -> std::optional<std::string>
    {
        const int n = M.n;
        if (M.m.size() != static_cast<std::size_t>(n * n))
            return "matrix has the wrong shape";
        for (AtomId a : M.m)
            if (a < 0 || static_cast<std::size_t>(a) >= s.size())
                return "entry out of range";
        for (int i = 0; i < n; ++i) {
            if (!s.is_identity(M.at(i, i)))
                return "m_" + std::to_string(i) + std::to_string(i) + " is not an identity";
            for (int j = 0; j < n; ++j)
                if (M.at(i, j) != s.converse(M.at(j, i)))
                    return "m_" + std::to_string(i) + std::to_string(j) + " is not the converse of m_" +
                           std::to_string(j) + std::to_string(i);
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    if (!s.consistent(M.at(i, j), M.at(j, k), M.at(i, k)))
                        return "triangle (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                               ") is inconsistent";
        return std::nullopt;
    }

    auto basic_matrices(const RaAtomStructure & s, int n, std::size_t budget, Exec exec) -> std::vector<BasicMatrix>
    {
        if (n < 1)
            throw UsageError("basic matrices need n >= 1");
        const int N = static_cast<int>(s.size());
        // cells in row-major order over the upper triangle including the diagonal
        std::vector<std::pair<int, int>> cells;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                cells.emplace_back(i, j);
        const int C = static_cast<int>(cells.size());
        std::atomic<std::size_t> total{0};
        std::atomic<bool> over{false};

        // every triangle with all edges known and one edge on the cell (i,j)
        auto triangles_ok = [&](const std::vector<AtomId> & m, const std::vector<char> & known, int i, int j) {
            auto on = [&](int p, int q) { return (p == i && q == j) || (p == j && q == i); };
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q)
                    for (int r = 0; r < n; ++r) {
                        if (!known[p * n + q] || !known[q * n + r] || !known[p * n + r])
                            continue;
                        if ((on(p, q) || on(q, r) || on(p, r)) && !s.consistent(m[p * n + q], m[q * n + r], m[p * n + r]))
                            return false;
                    }
            return true;
        };

        auto extend = [&](std::vector<AtomId> & m, std::vector<char> & known, int c, std::vector<BasicMatrix> & out,
                          auto && self) -> void {
            if (over.load(std::memory_order_relaxed))
                return;
            if (c == C) {
                if (total.fetch_add(1, std::memory_order_relaxed) + 1 > budget) {
                    over = true;
                    return;
                }
                out.push_back({n, m});
                return;
            }
            auto [i, j] = cells[c];
            for (AtomId a = 0; a < N; ++a) {
                if (i == j && !s.is_identity(a))
                    continue;
                m[i * n + j] = a;
                m[j * n + i] = s.converse(a);
                if (i == j && m[i * n + i] != a)
                    continue;
                known[i * n + j] = known[j * n + i] = 1;
                if (triangles_ok(m, known, i, j))
                    self(m, known, c + 1, out, self);
                known[i * n + j] = known[j * n + i] = 0;
            }
        };

        // prefixes up to and including cell (0,1), enumerated in order
        std::vector<std::vector<AtomId>> prefixes;
        int split = std::min(C, n > 1 ? 2 : 1);
        {
            std::vector<AtomId> m(n * n, 0);
            std::vector<char> known(n * n, 0);
            auto collect = [&](std::vector<AtomId> & mm, std::vector<char> & kk, int c, auto && self) -> void {
                if (c == split) {
                    prefixes.push_back(mm);
                    return;
                }
                auto [i, j] = cells[c];
                for (AtomId a = 0; a < N; ++a) {
                    if (i == j && !s.is_identity(a))
                        continue;
                    mm[i * n + j] = a;
                    mm[j * n + i] = s.converse(a);
                    if (i == j && mm[i * n + i] != a)
                        continue;
                    kk[i * n + j] = kk[j * n + i] = 1;
                    if (triangles_ok(mm, kk, i, j))
                        self(mm, kk, c + 1, self);
                    kk[i * n + j] = kk[j * n + i] = 0;
                }
            };
            collect(m, known, 0, collect);
        }
        std::vector<std::vector<BasicMatrix>> parts(prefixes.size());
        auto run = [&](std::size_t pi) {
            std::vector<AtomId> m = prefixes[pi];
            std::vector<char> known(n * n, 0);
            for (int c = 0; c < split; ++c) {
                auto [i, j] = cells[c];
                known[i * n + j] = known[j * n + i] = 1;
            }
            extend(m, known, split, parts[pi], extend);
        };
        if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
            for (std::size_t pi = 0; pi < prefixes.size(); ++pi)
                run(pi);
        }
        else {
            for (std::size_t pi = 0; pi < prefixes.size(); ++pi)
                run(pi);
        }
        if (over)
            throw BudgetExceeded("more than " + std::to_string(budget) + " basic matrices", total.load());
        std::vector<BasicMatrix> out;
        for (auto & p : parts)
            out.insert(out.end(), p.begin(), p.end());
        return out;
    }

    namespace
    {
        auto off_key(const BasicMatrix & M, int i, int j) -> std::vector<AtomId>
        {
            std::vector<AtomId> k;
            for (int a = 0; a < M.n; ++a)
                for (int b = 0; b < M.n; ++b)
                    if (a != i && a != j && b != i && b != j)
                        k.push_back(M.at(a, b));
            return k;
        }

        auto permuted(const BasicMatrix & M, const std::vector<int> & tau) -> BasicMatrix
        {
            BasicMatrix out{M.n, std::vector<AtomId>(M.m.size())};
            for (int a = 0; a < M.n; ++a)
                for (int b = 0; b < M.n; ++b)
                    out.m[a * M.n + b] = M.at(tau[a], tau[b]);
            return out;
        }

        template <class Key>
        auto dense_ids(const std::vector<Key> & keys) -> std::vector<int>
        {
            std::vector<std::size_t> ord(keys.size());
            std::iota(ord.begin(), ord.end(), 0);
            std::stable_sort(ord.begin(), ord.end(), [&](auto a, auto b) { return keys[a] < keys[b]; });
            std::vector<int> id(keys.size());
            int cur = -1;
            for (std::size_t r = 0; r < ord.size(); ++r) {
                if (r == 0 || keys[ord[r]] != keys[ord[r - 1]])
                    ++cur;
                id[ord[r]] = cur;
            }
            return id;
        }
    }

    auto agree_off(const BasicMatrix & a, const BasicMatrix & b, int i, int j) -> bool
    {
        for (int p = 0; p < a.n; ++p)
            for (int q = 0; q < a.n; ++q)
                if (p != i && p != j && q != i && q != j && a.at(p, q) != b.at(p, q))
                    return false;
        return true;
    }

    auto matrix_structure(const RaAtomStructure & s, const std::vector<BasicMatrix> & mats) -> CaAtomStructure
    {
        if (mats.empty())
            throw StructuralError("no basic matrices");
        const int n = mats[0].n;
        const std::size_t N = mats.size();
        std::map<std::vector<AtomId>, AtomId> index;
        for (std::size_t a = 0; a < N; ++a) {
            if (mats[a].n != n)
                throw StructuralError("matrices of mixed dimension");
            index.emplace(mats[a].m, static_cast<AtomId>(a));
        }
        CaAtomStructure::Data d;
        d.n = n;
        for (auto & M : mats) {
            std::string nm = "[";
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    nm += (nm.size() > 1 ? "," : "") + s.name(M.at(i, j));
            d.names.push_back(nm + "]");
        }
        d.cls.resize(n);
        for (int i = 0; i < n; ++i) {
            std::vector<std::vector<AtomId>> keys(N);
            for (std::size_t a = 0; a < N; ++a)
                keys[a] = off_key(mats[a], i, i);
            d.cls[i] = dense_ids(keys);
        }
        d.diag.assign(n, std::vector<AtomSet>(n, AtomSet(N)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (std::size_t a = 0; a < N; ++a)
                    if (s.is_identity(mats[a].at(i, j)))
                        d.diag[i][j].insert(static_cast<AtomId>(a));
        auto family = [&](bool ordered) -> std::vector<std::vector<std::vector<AtomId>>> {
            std::vector<std::vector<std::vector<AtomId>>> fam(n, std::vector<std::vector<AtomId>>(n));
            for (int i = 0; i < n; ++i)
                for (int j = ordered ? 0 : i + 1; j < n; ++j) {
                    if (i == j)
                        continue;
                    std::vector<int> tau(n);
                    std::iota(tau.begin(), tau.end(), 0);
                    if (ordered)
                        tau[i] = j;
                    else
                        std::swap(tau[i], tau[j]);
                    for (std::size_t a = 0; a < N; ++a) {
                        auto it = index.find(permuted(mats[a], tau).m);
                        if (it == index.end())
                            return {};
                        fam[i][j].push_back(it->second);
                    }
                }
            return fam;
        };
        d.transposition = family(false);
        d.replacement = family(true);
        d.doc = {{"rule", "matrices"}, {"params", {{"n", n}, {"base", s.rule_doc()}}}};
        return CaAtomStructure::from_data(std::move(d));
    }

    auto is_cylindric_basis(const std::vector<BasicMatrix> & mats, int n, const BasisOptions & opt) -> BasisReport
    {
        BasisReport rep;
        if (mats.empty())
            throw UsageError("basis check needs a nonempty set");
        const std::size_t N = mats.size();
        if (opt.require_transpositions) {
            std::set<std::vector<AtomId>> have;
            for (auto & M : mats)
                have.insert(M.m);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    std::vector<int> tau(n);
                    std::iota(tau.begin(), tau.end(), 0);
                    std::swap(tau[i], tau[j]);
                    for (std::size_t a = 0; a < N; ++a)
                        if (!have.count(permuted(mats[a], tau).m)) {
                            rep.holds = false;
                            rep.failure = "transposition";
                            rep.i = i;
                            rep.j = j;
                            rep.m_index = rep.n_index = a;
                            return rep;
                        }
                }
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (opt.relation) {
                    // Generic reading: quadratic in pairs, linear search for L.
                    for (std::size_t a = 0; a < N; ++a)
                        for (std::size_t b = 0; b < N; ++b) {
                            if (!opt.relation(mats[a], mats[b], i, j))
                                continue;
                            ++rep.pairs_checked;
                            bool found = false;
                            for (std::size_t l = 0; l < N && !found; ++l)
                                found = opt.relation(mats[a], mats[l], i, i) && opt.relation(mats[l], mats[b], j, j);
                            if (!found) {
                                rep = {false, "amalgamation", i, j, a, b, rep.pairs_checked};
                                return rep;
                            }
                        }
                    continue;
                }
                // group by entries avoiding i and j; inside a group every (≡_i class, ≡_j class)
                // pair must be realised
                std::vector<std::vector<AtomId>> kij(N), ki(N), kj(N);
                for (std::size_t a = 0; a < N; ++a) {
                    kij[a] = off_key(mats[a], i, j);
                    ki[a] = off_key(mats[a], i, i);
                    kj[a] = off_key(mats[a], j, j);
                }
                auto gid = dense_ids(kij), ci = dense_ids(ki), cj = dense_ids(kj);
                int groups = gid.empty() ? 0 : *std::max_element(gid.begin(), gid.end()) + 1;
                std::vector<std::vector<std::size_t>> members(groups);
                for (std::size_t a = 0; a < N; ++a)
                    members[gid[a]].push_back(a);
                std::vector<char> bad(groups, 0);
                std::vector<std::size_t> sizes(groups);
                auto check_group = [&](int g) {
                    std::set<int> xs, ys;
                    std::set<std::pair<int, int>> pairs;
                    for (auto a : members[g]) {
                        xs.insert(ci[a]);
                        ys.insert(cj[a]);
                        pairs.emplace(ci[a], cj[a]);
                    }
                    sizes[g] = members[g].size() * members[g].size();
                    bad[g] = pairs.size() != xs.size() * ys.size();
                };
                if (opt.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
                    for (int g = 0; g < groups; ++g)
                        check_group(g);
                }
                else {
                    for (int g = 0; g < groups; ++g)
                        check_group(g);
                }
                for (int g = 0; g < groups; ++g) {
                    rep.pairs_checked += sizes[g];
                    if (!bad[g])
                        continue;
                    std::set<std::pair<int, int>> pairs;
                    for (auto a : members[g])
                        pairs.emplace(ci[a], cj[a]);
                    for (auto a : members[g])
                        for (auto b : members[g])
                            if (!pairs.count({ci[a], cj[b]})) {
                                rep.holds = false;
                                rep.failure = "amalgamation";
                                rep.i = i;
                                rep.j = j;
                                rep.m_index = a;
                                rep.n_index = b;
                                return rep;
                            }
                }
            }
        return rep;
    }

    auto ComplexCa::atom(AtomId a) const -> AtomSet
    {
        AtomSet x(f_.size());
        x.insert(a);
        return x;
    }

    auto ComplexCa::cyl(int i, const AtomSet & x) const -> AtomSet
    {
        std::vector<char> hit(f_.class_count(i), 0);
        x.for_each([&](AtomId a) { hit[f_.cls(i, a)] = 1; });
        AtomSet out(f_.size());
        for (int c = 0; c < f_.class_count(i); ++c)
            if (hit[c])
                for (AtomId a : f_.class_members(i, c))
                    out.insert(a);
        return out;
    }

    auto ComplexCa::swap(int i, int j, const AtomSet & x) const -> AtomSet
    {
        if (!f_.has_transpositions())
            throw StructuralError("structure has no transpositions");
        AtomSet out(f_.size());
        for (std::size_t a = 0; a < f_.size(); ++a)
            if (x.contains(f_.transpose(i, j, static_cast<AtomId>(a))))
                out.insert(static_cast<AtomId>(a));
        return out;
    }

    auto ComplexCa::subst(int i, int j, const AtomSet & x) const -> AtomSet
    {
        if (i == j)
            return x;
        if (!f_.has_replacements())
            return cyl(i, f_.diagonal(i, j) & x);
        AtomSet out(f_.size());
        for (std::size_t a = 0; a < f_.size(); ++a)
            if (x.contains(f_.replace(i, j, static_cast<AtomId>(a))))
                out.insert(static_cast<AtomId>(a));
        return out;
    }

    auto complex_ca(const CaAtomStructure & f, std::size_t budget) -> ComplexCa
    {
        if (f.size() > budget)
            throw BudgetExceeded("complex algebra over " + std::to_string(f.size()) + " atoms exceeds the budget of " +
                                     std::to_string(budget),
                                 f.size());
        return ComplexCa(f);
    }

    auto signature_name(Signature s) -> std::string
    {
        switch (s) {
        case Signature::Sc:
            return "Sc";
        case Signature::CA:
            return "CA";
        case Signature::PA:
            return "PA";
        case Signature::PEA:
            return "PEA";
        }
        return "CA";
    }

    auto parse_signature(const std::string & s) -> Signature
    {
        for (auto sig : {Signature::Sc, Signature::CA, Signature::PA, Signature::PEA})
            if (signature_name(sig) == s)
                return sig;
        throw UsageError("unknown signature " + s + " (expected Sc, CA, PA or PEA)");
    }

    auto CaAxiomReport::count(const std::string & law) const -> std::size_t
    {
        return static_cast<std::size_t>(
            std::count_if(violations.begin(), violations.end(), [&](auto & v) { return v.law == law; }));
    }

    namespace
    {
        struct Collector
        {
            std::vector<CaViolation> & out;
            std::size_t cap;
            std::map<std::string, std::size_t> seen;
            void add(const std::string & law, std::vector<int> dims, std::vector<AtomId> atoms)
            {
                if (seen[law]++ < cap)
                    out.push_back({law, std::move(dims), std::move(atoms)});
            }
        };
    }

    auto commutativity_failures(const CaAtomStructure & f, std::size_t max_witnesses) -> std::vector<CaViolation>
    {
        std::vector<CaViolation> out;
        const int n = f.dim();
        const std::size_t N = f.size();
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y) {
                const int cx = f.class_count(x), cy = f.class_count(y);
                std::vector<std::pair<int, int>> edges(N);
                for (std::size_t a = 0; a < N; ++a)
                    edges[a] = {f.cls(x, static_cast<AtomId>(a)), f.cls(y, static_cast<AtomId>(a))};
                std::sort(edges.begin(), edges.end());
                edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
                std::vector<int> parent(cx + cy);
                std::iota(parent.begin(), parent.end(), 0);
                auto root = [&](int a) {
                    while (parent[a] != a)
                        a = parent[a] = parent[parent[a]];
                    return a;
                };
                for (auto [p, q] : edges)
                    parent[root(p)] = root(cx + q);
                std::vector<long long> xs(cx + cy, 0), ys(cx + cy, 0), es(cx + cy, 0);
                for (int p = 0; p < cx; ++p)
                    ++xs[root(p)];
                for (int q = 0; q < cy; ++q)
                    ++ys[root(cx + q)];
                for (auto [p, q] : edges)
                    ++es[root(p)];
                std::vector<int> bad_roots;
                for (int r = 0; r < cx + cy; ++r)
                    if (root(r) == r && es[r] != xs[r] * ys[r])
                        bad_roots.push_back(r);
                if (bad_roots.empty())
                    continue;
                // witness: p - q0 - p1 - q with (p, q) missing; a in X_p ∩ Y_q0, b in X_p1 ∩ Y_q
                std::vector<std::vector<int>> adj_x(cx), adj_y(cy);
                for (auto [p, q] : edges) {
                    adj_x[p].push_back(q);
                    adj_y[q].push_back(p);
                }
                auto has_edge = [&](int p, int q) { return std::binary_search(adj_x[p].begin(), adj_x[p].end(), q); };
                for (auto & v : adj_x)
                    std::sort(v.begin(), v.end());
                auto atom_at = [&](int p, int q) -> AtomId {
                    for (AtomId a : f.class_members(x, p))
                        if (f.cls(y, a) == q)
                            return a;
                    return -1;
                };
                std::size_t found = 0;
                for (int r : bad_roots) {
                    bool done = false;
                    for (int p = 0; p < cx && !done; ++p) {
                        if (root(p) != r)
                            continue;
                        for (int q0 : adj_x[p]) {
                            for (int p1 : adj_y[q0]) {
                                for (int q : adj_x[p1])
                                    if (!has_edge(p, q)) {
                                        out.push_back({"commutativity", {x, y}, {atom_at(p, q0), atom_at(p1, q)}});
                                        done = true;
                                        break;
                                    }
                                if (done)
                                    break;
                            }
                            if (done)
                                break;
                        }
                    }
                    if (++found >= max_witnesses)
                        break;
                }
            }
        return out;
    }

    auto ca_axiom_check(const CaAtomStructure & f, Signature sig, std::size_t max_witnesses) -> CaAxiomReport
    {
        CaAxiomReport rep;
        rep.atoms = f.size();
        Collector col{rep.violations, max_witnesses, {}};
        const int n = f.dim();
        const std::size_t N = f.size();
        const bool diagonals = sig == Signature::CA || sig == Signature::PEA;
        const bool transpositions = sig == Signature::PA || sig == Signature::PEA;

        if (diagonals) {
            for (int i = 0; i < n; ++i)
                if (f.diagonal(i, i).count() != N)
                    col.add("C5", {i}, {});
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j)
                        continue;
                    if (f.diagonal(i, j) != f.diagonal(j, i))
                        col.add("diagonal-symmetry", {i, j}, {});
                    // c_i d_ij = 1 and C7: each ≡_i class has exactly one atom below d_ij
                    std::vector<int> hits(f.class_count(i), 0);
                    f.diagonal(i, j).for_each([&](AtomId a) { ++hits[f.cls(i, a)]; });
                    for (int c = 0; c < f.class_count(i); ++c) {
                        if (hits[c] == 0)
                            col.add("cyl-diagonal", {i, j}, {f.class_members(i, c)[0]});
                        if (hits[c] > 1)
                            col.add("C7", {i, j}, {f.class_members(i, c)[0]});
                    }
                    // C6: d_ij = c_k(d_ik . d_kj)
                    for (int k = 0; k < n; ++k) {
                        if (k == i || k == j)
                            continue;
                        std::vector<char> meets(f.class_count(k), 0);
                        (f.diagonal(i, k) & f.diagonal(k, j)).for_each([&](AtomId a) { meets[f.cls(k, a)] = 1; });
                        for (std::size_t a = 0; a < N; ++a)
                            if (f.diagonal(i, j).contains(static_cast<AtomId>(a)) !=
                                static_cast<bool>(meets[f.cls(k, static_cast<AtomId>(a))]))
                                col.add("C6", {i, j, k}, {static_cast<AtomId>(a)});
                    }
                }
        }

        if (transpositions) {
            if (!f.has_transpositions())
                col.add("missing-transpositions", {}, {});
            else {
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        std::vector<int> sigma(n);
                        std::iota(sigma.begin(), sigma.end(), 0);
                        std::swap(sigma[i], sigma[j]);
                        for (std::size_t ai = 0; ai < N; ++ai) {
                            AtomId a = static_cast<AtomId>(ai), t = f.transpose(i, j, a);
                            if (f.transpose(i, j, t) != a)
                                col.add("swap-involution", {i, j}, {a});
                            if (diagonals) {
                                if (f.diagonal(i, j).contains(a) && t != a)
                                    col.add("swap-fixes-diagonal", {i, j}, {a});
                                for (int k = 0; k < n; ++k)
                                    for (int l = 0; l < n; ++l)
                                        if (f.diagonal(k, l).contains(a) != f.diagonal(sigma[k], sigma[l]).contains(t))
                                            col.add("swap-diagonal", {i, j, k, l}, {a});
                            }
                        }
                        // s_[i,j] c_k = c_{sigma k} s_[i,j]: a ≡_k b iff t(a) ≡_{sigma k} t(b)
                        for (int k = 0; k < n; ++k) {
                            std::map<std::pair<int, int>, int> seen;
                            for (std::size_t ai = 0; ai < N; ++ai) {
                                AtomId a = static_cast<AtomId>(ai);
                                int ck = f.cls(k, a), ct = f.cls(sigma[k], f.transpose(i, j, a));
                                // the class map must be a bijection between the two partitions
                                seen.emplace(std::make_pair(ck, ct), 0);
                            }
                            std::vector<int> fwd(f.class_count(k), -1), back(f.class_count(sigma[k]), -1);
                            bool ok = true;
                            for (auto & [pr, unused] : seen) {
                                if (fwd[pr.first] != -1 && fwd[pr.first] != pr.second)
                                    ok = false;
                                if (back[pr.second] != -1 && back[pr.second] != pr.first)
                                    ok = false;
                                fwd[pr.first] = pr.second;
                                back[pr.second] = pr.first;
                            }
                            if (!ok)
                                col.add("swap-cylindrifier", {i, j, k}, {});
                        }
                    }
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k) {
                            if (i == j || j == k || i == k)
                                continue;
                            for (std::size_t ai = 0; ai < N; ++ai) {
                                AtomId a = static_cast<AtomId>(ai);
                                if (f.transpose(i, j, f.transpose(j, k, f.transpose(i, j, a))) != f.transpose(i, k, a))
                                    col.add("swap-coxeter", {i, j, k}, {a});
                            }
                        }
            }
        }

        if (sig != Signature::CA && !f.has_replacements())
            col.add("missing-substitutions", {}, {});
        if (f.has_replacements()) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j)
                        continue;
                    std::vector<AtomId> by_class(f.class_count(i), -1);
                    for (std::size_t ai = 0; ai < N; ++ai) {
                        AtomId a = static_cast<AtomId>(ai), r = f.replace(i, j, a);
                        // s_i^j x <= c_i x and c_i s_i^j x = s_i^j x
                        if (!f.same(i, a, r))
                            col.add("subst-cylindrifier", {i, j}, {a});
                        AtomId & first = by_class[f.cls(i, a)];
                        if (first == -1)
                            first = r;
                        else if (first != r)
                            col.add("subst-class", {i, j}, {a});
                        if (diagonals && !f.diagonal(i, j).contains(r))
                            col.add("subst-diagonal", {i, j}, {a});
                        if (f.replace(i, j, r) != r)
                            col.add("subst-idempotent", {i, j}, {a});
                    }
                    // s_i^j c_k = c_k s_i^j for k not in {i,j}. Primitive only in Sc and PA; with
                    // diagonals s_i^j is c_i(d_ij . x) and this law rests on commutativity.
                    for (int k = 0; k < n && !diagonals; ++k) {
                        if (k == i || k == j)
                            continue;
                        // forth: a ≡_k b implies r(a) ≡_k r(b); back: r maps each ≡_k class onto
                        // a whole ≡_k class
                        std::vector<int> img(f.class_count(k), -1);
                        std::vector<std::set<AtomId>> reach(f.class_count(k));
                        for (std::size_t ai = 0; ai < N; ++ai) {
                            AtomId a = static_cast<AtomId>(ai), r = f.replace(i, j, a);
                            int c = f.cls(k, a);
                            if (img[c] == -1)
                                img[c] = f.cls(k, r);
                            else if (img[c] != f.cls(k, r))
                                col.add("subst-commute", {i, j, k}, {a});
                            reach[c].insert(r);
                        }
                        for (int c = 0; c < f.class_count(k); ++c)
                            if (reach[c].size() != f.class_members(k, img[c]).size())
                                col.add("subst-commute", {i, j, k}, {f.class_members(k, c)[0]});
                    }
                }
        }
        rep.commutativity_failures = commutativity_failures(f, max_witnesses);
        return rep;
    }
}
