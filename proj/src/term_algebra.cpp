#include "atomlab/constructions.hpp"

#include "atomlab/error.hpp"

#include <algorithm>
#include <sstream>

namespace atomlab
{
    namespace
    {
        // Subset of omega: the listed members, or everything except the listed exceptions.
        struct Col
        {
            bool cof = false;
            std::set<long long> s;

            auto empty() const -> bool { return !cof && s.empty(); }

            void unite(const Col & o)
            {
                if (!cof && !o.cof) {
                    s.insert(o.s.begin(), o.s.end());
                }
                else if (cof && o.cof) {
                    std::set<long long> r;
                    std::set_intersection(s.begin(), s.end(), o.s.begin(), o.s.end(), std::inserter(r, r.end()));
                    s = std::move(r);
                }
                else {
                    const auto & fin = cof ? o.s : s;
                    std::set<long long> ex = cof ? s : o.s;
                    for (auto x : fin)
                        ex.erase(x);
                    cof = true;
                    s = std::move(ex);
                }
            }
        };

        void candidates(long long j, long long k, long long out[3], int & n)
        {
            n = 0;
            if ((j + k) % 2 == 0)
                out[n++] = (j + k) / 2;
            if (2 * j - k >= 0)
                out[n++] = 2 * j - k;
            if (2 * k - j >= 0)
                out[n++] = 2 * k - j;
        }

        // {k : exists i in A, j in B with E(i,j,k)}.
        auto e_image(const Col & a, const Col & b) -> Col
        {
            Col r;
            if (a.empty() || b.empty())
                return r;
            if (a.cof && b.cof) {
                r.cof = true;
                return r;
            }
            if (!a.cof && !b.cof) {
                for (auto i : a.s)
                    for (auto j : b.s) {
                        if ((i + j) % 2 == 0)
                            r.s.insert((i + j) / 2);
                        if (2 * i - j >= 0)
                            r.s.insert(2 * i - j);
                        if (2 * j - i >= 0)
                            r.s.insert(2 * j - i);
                    }
                return r;
            }
            const Col & inf = a.cof ? a : b;
            const Col & fin = a.cof ? b : a;
            // Every k >= max(first missing bound, min fin) is hit via i = 2k - min(fin).
            const long long a0 = inf.s.empty() ? 0 : *inf.s.rbegin() + 1;
            const long long threshold = std::max(a0, *fin.s.begin());
            r.cof = true;
            for (long long k = 0; k < threshold; ++k) {
                bool hit = false;
                for (auto j : fin.s) {
                    long long c[3];
                    int nc;
                    candidates(j, k, c, nc);
                    for (int q = 0; q < nc && !hit; ++q)
                        hit = !inf.s.count(c[q]);
                    if (hit)
                        break;
                }
                if (!hit)
                    r.s.insert(k);
            }
            return r;
        }
    }

    TermAlgebraBlur::TermAlgebraBlur(BlurSpec spec, RaAtomStructure base) :
        spec_(std::move(spec)), base_(std::move(base)), idx_(spec_), trunc_(blur_structure(spec_, base_))
    {
        const auto m = spec_.J.size();
        safe_.assign(m, std::vector<std::vector<char>>(m, std::vector<char>(m)));
        for (std::size_t s = 0; s < m; ++s)
            for (std::size_t z = 0; z < m; ++z)
                for (std::size_t w = 0; w < m; ++w)
                    safe_[s][z][w] = safe(spec_.J[s], spec_.J[z], spec_.J[w], base_);
    }

    auto TermAlgebraBlur::bottom() const -> CofiniteSet
    {
        CofiniteSet x;
        x.blocks.resize(spec_.J.size());
        return x;
    }

    auto TermAlgebraBlur::top() const -> CofiniteSet
    {
        auto x = bottom();
        x.identity = true;
        for (auto & b : x.blocks)
            b.cofinite = true;
        return x;
    }

    auto TermAlgebraBlur::identity() const -> CofiniteSet
    {
        auto x = bottom();
        x.identity = true;
        return x;
    }

    auto TermAlgebraBlur::block(int w) const -> CofiniteSet
    {
        auto x = bottom();
        x.blocks.at(w).cofinite = true;
        return x;
    }

    auto TermAlgebraBlur::singleton(long long i, int w, AtomId p) const -> CofiniteSet
    {
        idx_.slot(w, p);
        auto x = bottom();
        x.blocks.at(w).part.insert({i, p});
        return x;
    }

    auto TermAlgebraBlur::contains(const CofiniteSet & x, long long i, int w, AtomId p) const -> bool
    {
        const auto & b = x.blocks.at(w);
        return b.cofinite != static_cast<bool>(b.part.count({i, p}));
    }

    auto TermAlgebraBlur::join(const CofiniteSet & x, const CofiniteSet & y) const -> CofiniteSet
    {
        auto r = bottom();
        r.identity = x.identity || y.identity;
        for (std::size_t w = 0; w < r.blocks.size(); ++w) {
            const auto & a = x.blocks[w];
            const auto & b = y.blocks[w];
            auto & o = r.blocks[w];
            if (!a.cofinite && !b.cofinite) {
                o.part = a.part;
                o.part.insert(b.part.begin(), b.part.end());
            }
            else if (a.cofinite && b.cofinite) {
                o.cofinite = true;
                std::set_intersection(a.part.begin(), a.part.end(), b.part.begin(), b.part.end(),
                                      std::inserter(o.part, o.part.end()));
            }
            else {
                const auto & cof = a.cofinite ? a : b;
                const auto & fin = a.cofinite ? b : a;
                o.cofinite = true;
                std::set_difference(cof.part.begin(), cof.part.end(), fin.part.begin(), fin.part.end(),
                                    std::inserter(o.part, o.part.end()));
            }
        }
        return r;
    }

    auto TermAlgebraBlur::complement(const CofiniteSet & x) const -> CofiniteSet
    {
        auto r = x;
        r.identity = !x.identity;
        for (auto & b : r.blocks)
            b.cofinite = !b.cofinite;
        return r;
    }

    auto TermAlgebraBlur::meet(const CofiniteSet & x, const CofiniteSet & y) const -> CofiniteSet
    {
        return complement(join(complement(x), complement(y)));
    }

    auto TermAlgebraBlur::column(const CofiniteSet & x, int slot) const -> std::pair<bool, std::set<long long>>
    {
        const int w = idx_.slot_block(slot);
        const AtomId p = idx_.slot_colour(slot);
        const auto & b = x.blocks[w];
        std::set<long long> s;
        for (auto [i, q] : b.part)
            if (q == p)
                s.insert(i);
        return {b.cofinite, std::move(s)};
    }

    auto TermAlgebraBlur::compose_symbolic(const CofiniteSet & x, const CofiniteSet & y) const -> CofiniteSet
    {
        const int m = static_cast<int>(spec_.J.size());
        const int slots = static_cast<int>(idx_.slots());
        std::vector<Col> xc(slots), yc(slots);
        for (int s = 0; s < slots; ++s) {
            auto [cx, sx] = column(x, s);
            xc[s] = {cx, std::move(sx)};
            auto [cy, sy] = column(y, s);
            yc[s] = {cy, std::move(sy)};
        }
        std::vector<char> xb(m, 0), yb(m, 0), full(m, 0);
        for (int s = 0; s < slots; ++s) {
            xb[idx_.slot_block(s)] |= !xc[s].empty();
            yb[idx_.slot_block(s)] |= !yc[s].empty();
        }
        for (int s = 0; s < m; ++s)
            for (int z = 0; z < m; ++z)
                if (xb[s] && yb[z])
                    for (int w = 0; w < m; ++w)
                        if (safe_[s][z][w])
                            full[w] = 1;

        std::vector<Col> acc(slots);
        for (int a = 0; a < slots; ++a) {
            if (xc[a].empty())
                continue;
            for (int b = 0; b < slots; ++b) {
                if (yc[b].empty())
                    continue;
                Col k;
                bool computed = false;
                for (int c = 0; c < slots; ++c) {
                    if (full[idx_.slot_block(c)])
                        continue;
                    if (!base_.consistent(idx_.slot_colour(a), idx_.slot_colour(b), idx_.slot_colour(c)))
                        continue;
                    if (!computed) {
                        k = e_image(xc[a], yc[b]);
                        computed = true;
                    }
                    acc[c].unite(k);
                }
            }
        }

        auto r = bottom();
        for (int w = 0; w < m; ++w) {
            auto & o = r.blocks[w];
            if (full[w]) {
                o.cofinite = true;
                continue;
            }
            int cof = 0, total = 0;
            for (int c = 0; c < slots; ++c)
                if (idx_.slot_block(c) == w) {
                    ++total;
                    cof += acc[c].cof;
                }
            if (cof != 0 && cof != total)
                throw StructuralError("composition leaves the term algebra in blur " + std::to_string(w)
                                      + ": some colours are finite and some cofinite");
            o.cofinite = cof != 0;
            for (int c = 0; c < slots; ++c)
                if (idx_.slot_block(c) == w)
                    for (auto i : acc[c].s)
                        o.part.insert({i, idx_.slot_colour(c)});
        }

        bool meets = false;
        for (int s = 0; s < slots && !meets; ++s) {
            Col both = xc[s];
            if (both.empty() || yc[s].empty())
                continue;
            if (both.cof && yc[s].cof)
                meets = true;
            else if (!both.cof && !yc[s].cof)
                meets = std::any_of(both.s.begin(), both.s.end(), [&](long long i) { return yc[s].s.count(i) > 0; });
            else {
                const auto & fin = both.cof ? yc[s] : both;
                const auto & inf = both.cof ? both : yc[s];
                meets = std::any_of(fin.s.begin(), fin.s.end(), [&](long long i) { return !inf.s.count(i); });
            }
        }
        r.identity = meets || (x.identity && y.identity);
        if (x.identity)
            r = join(r, y);
        if (y.identity)
            r = join(r, x);
        return r;
    }

    auto TermAlgebraBlur::restrict(const CofiniteSet & x, int window) const -> AtomSet
    {
        AtomSet r(trunc_.size());
        if (x.identity)
            r.insert(0);
        const int slots = static_cast<int>(idx_.slots());
        window = std::min(window, spec_.t);
        for (int s = 0; s < slots; ++s) {
            const int w = idx_.slot_block(s);
            const AtomId p = idx_.slot_colour(s);
            for (int i = 0; i < window; ++i)
                if (contains(x, i, w, p))
                    r.insert(idx_.atom(i, w, p));
        }
        return r;
    }

    void TermAlgebraBlur::truncated_compose_into(const AtomSet & x, const AtomSet & y, AtomSet & out) const
    {
        x.for_each([&](AtomId a) { y.for_each([&](AtomId b) { trunc_.compose_into(a, b, out); }); });
    }

    namespace
    {
        auto max_index(const CofiniteSet & x) -> long long
        {
            long long m = -1;
            for (const auto & b : x.blocks)
                for (auto [i, p] : b.part)
                    m = std::max(m, i);
            return m;
        }

        auto describe(const BlurIndex & idx, const AtomSet & sym, const AtomSet & brute) -> std::string
        {
            std::ostringstream os;
            for (std::size_t a = 0; a < sym.universe(); ++a) {
                const auto id = static_cast<AtomId>(a);
                if (sym.contains(id) == brute.contains(id))
                    continue;
                os << (sym.contains(id) ? "symbolic-only " : "truncated-only ");
                if (id == 0)
                    os << "Id";
                else
                    os << "a" << idx.index_of(id) << "^{" << idx.slot_colour(idx.slot_of(id)) << ","
                       << idx.slot_block(idx.slot_of(id)) << "}";
                break;
            }
            return os.str();
        }
    }

    auto TermAlgebraBlur::compose(const CofiniteSet & x, const CofiniteSet & y) const -> CofiniteSet
    {
        auto r = compose_symbolic(x, y);
        const int quarter = spec_.t / 4, half = spec_.t / 2;
        if (max_index(x) < quarter && max_index(y) < quarter) {
            auto sym = restrict(r, half);
            AtomSet brute(trunc_.size());
            truncated_compose_into(restrict(x, spec_.t), restrict(y, spec_.t), brute);
            brute &= restrict(top(), half);
            if (sym != brute)
                throw TruncationMismatch("symbolic and truncated composition disagree: " + describe(idx_, sym, brute));
        }
        return r;
    }

    auto TermAlgebraBlur::generators() const -> std::vector<CofiniteSet>
    {
        std::vector<CofiniteSet> g{identity()};
        const int m = static_cast<int>(spec_.J.size());
        for (int w = 0; w < m; ++w)
            g.push_back(block(w));
        for (int i = 0; i < spec_.t / 4; ++i)
            for (std::size_t s = 0; s < idx_.slots(); ++s) {
                const int w = idx_.slot_block(static_cast<int>(s));
                const AtomId p = idx_.slot_colour(static_cast<int>(s));
                g.push_back(singleton(i, w, p));
                auto c = block(w);
                c.blocks[w].part.insert({i, p});
                g.push_back(c);
            }
        return g;
    }

    auto TermAlgebraBlur::cross_check_generators(Exec exec) const -> CrossCheck
    {
        const auto gens = generators();
        const auto G = gens.size();
        const auto n = trunc_.size();
        std::vector<AtomSet> tr(G);
        for (std::size_t g = 0; g < G; ++g)
            tr[g] = restrict(gens[g], spec_.t);
        const auto mask = restrict(top(), spec_.t / 2);

        // row[a * G + g] = a ; tr[g]
        std::vector<AtomSet> row(n * G);
        auto fill = [&](long long a) {
            for (std::size_t g = 0; g < G; ++g) {
                AtomSet r(n);
                tr[g].for_each([&](AtomId b) { trunc_.compose_into(static_cast<AtomId>(a), b, r); });
                row[a * G + g] = std::move(r);
            }
        };
        if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
            for (long long a = 0; a < static_cast<long long>(n); ++a)
                fill(a);
        }
        else {
            for (long long a = 0; a < static_cast<long long>(n); ++a)
                fill(a);
        }

        std::vector<std::size_t> bad(G, 0);
        std::vector<std::string> first(G);
        auto check = [&](long long gx) {
            for (std::size_t gy = 0; gy < G; ++gy) {
                AtomSet brute(n);
                tr[gx].for_each([&](AtomId a) { brute |= row[a * G + gy]; });
                brute &= mask;
                std::string why;
                AtomSet sym;
                try {
                    sym = restrict(compose_symbolic(gens[gx], gens[gy]), spec_.t / 2);
                }
                catch (const StructuralError & e) {
                    why = e.what();
                }
                if (why.empty() && sym != brute)
                    why = describe(idx_, sym, brute);
                if (!why.empty()) {
                    if (bad[gx]++ == 0)
                        first[gx] = "generators " + std::to_string(gx) + "," + std::to_string(gy) + ": " + why;
                }
            }
        };
        if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
            for (long long gx = 0; gx < static_cast<long long>(G); ++gx)
                check(gx);
        }
        else {
            for (long long gx = 0; gx < static_cast<long long>(G); ++gx)
                check(gx);
        }
        CrossCheck r;
        r.pairs = G * G;
        for (std::size_t g = 0; g < G; ++g) {
            if (bad[g] && r.first_mismatch.empty())
                r.first_mismatch = first[g];
            r.mismatches += bad[g];
        }
        return r;
    }

    auto TermAlgebraBlur::hp_join_check() const -> JoinCheck
    {
        JoinCheck r;
        const auto n = trunc_.size();
        std::vector<AtomSet> h;
        for (auto p : spec_.I)
            h.push_back(blur_partition_h(spec_, p));
        const auto ni = spec_.I.size();
        for (std::size_t q = 0; q < ni; ++q)
            for (std::size_t s = 0; s < ni; ++s) {
                AtomSet comp(n);
                truncated_compose_into(h[q], h[s], comp);
                const AtomId Q = spec_.I[q], R = spec_.I[s];
                for (const auto & id : base_.identities()) {
                    const bool expected = base_.consistent(Q, R, id);
                    if (expected == comp.contains(0))
                        continue;
                    (expected ? r.missing : r.extra)++;
                    if (r.first_failure.empty())
                        r.first_failure = "identity for (" + std::to_string(Q) + "," + std::to_string(R) + ")";
                }
                for (std::size_t p = 0; p < ni; ++p) {
                    const AtomId P = spec_.I[p];
                    const bool expected = base_.consistent(Q, R, P);
                    r.triples += expected;
                    h[p].for_each([&](AtomId a) {
                        const bool got = comp.contains(a);
                        if (expected && !got) {
                            if (r.missing++ == 0 && r.first_failure.empty())
                                r.first_failure = "missing atom " + trunc_.name(a) + " for (" + std::to_string(Q) + ","
                                                  + std::to_string(R) + "," + std::to_string(P) + ")";
                        }
                        if (!expected && got) {
                            if (r.extra++ == 0 && r.first_failure.empty())
                                r.first_failure = "extra atom " + trunc_.name(a) + " for (" + std::to_string(Q) + ","
                                                  + std::to_string(R) + "," + std::to_string(P) + ")";
                        }
                    });
                }
            }
        return r;
    }
}
