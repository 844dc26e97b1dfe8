#include "atomlab/ra_core.hpp"

#include "atomlab/error.hpp"

#include <algorithm>
#include <map>

namespace atomlab
{
    auto RaAtomStructure::make(std::vector<std::string> names, std::vector<AtomId> identities,
                               std::vector<AtomId> converse) -> std::shared_ptr<Impl>
    {
        const auto n = names.size();
        if (n == 0)
            throw StructuralError("atom structure has no atoms");
        if (converse.size() != n)
            throw StructuralError("converse map is not total: " + std::to_string(converse.size()) + " entries for "
                                  + std::to_string(n) + " atoms");
        for (std::size_t a = 0; a < n; ++a)
            if (converse[a] < 0 || static_cast<std::size_t>(converse[a]) >= n)
                throw StructuralError("converse of atom " + std::to_string(a) + " out of range");
        auto impl = std::make_shared<Impl>();
        impl->identity_set = AtomSet(n);
        for (auto e : identities) {
            if (e < 0 || static_cast<std::size_t>(e) >= n)
                throw StructuralError("identity atom " + std::to_string(e) + " out of range");
            impl->identity_set.insert(e);
        }
        impl->identities = impl->identity_set.to_vector();
        impl->names = std::move(names);
        impl->converse = std::move(converse);
        impl->words = (n + 63) / 64;
        return impl;
    }

    auto RaAtomStructure::from_triples(std::vector<std::string> names, std::vector<AtomId> identities,
                                       std::vector<AtomId> converse, const std::vector<Triple> & triples)
        -> RaAtomStructure
    {
        auto impl = make(std::move(names), std::move(identities), std::move(converse));
        const auto n = impl->names.size();
        if (n > dense_limit)
            throw BudgetExceeded("explicit triple list needs a dense table", n);
        impl->table.assign(n * n * impl->words, 0);
        for (auto [a, b, c] : triples) {
            for (auto x : {a, b, c})
                if (x < 0 || static_cast<std::size_t>(x) >= n)
                    throw StructuralError("triple mentions unknown atom " + std::to_string(x));
            impl->table[(static_cast<std::size_t>(a) * n + b) * impl->words + (c >> 6)] |= std::uint64_t{1} << (c & 63);
        }
        RaAtomStructure s;
        s.impl_ = std::move(impl);
        return s;
    }

    auto RaAtomStructure::from_rule(std::vector<std::string> names, std::vector<AtomId> identities,
                                    std::vector<AtomId> converse, Rule rule, nlohmann::json doc, RowFill fill)
        -> RaAtomStructure
    {
        auto impl = make(std::move(names), std::move(identities), std::move(converse));
        impl->rule = std::move(rule);
        impl->doc = std::move(doc);
        const auto n = impl->names.size();
        if (n <= dense_limit) {
            impl->table.assign(n * n * impl->words, 0);
            const auto & r = impl->rule;
            auto * t = impl->table.data();
            const auto w = impl->words;
#pragma omp parallel for schedule(dynamic)
            for (long long ab = 0; ab < static_cast<long long>(n * n); ++ab) {
                auto a = static_cast<AtomId>(ab / n), b = static_cast<AtomId>(ab % n);
                if (fill) {
                    fill(a, b, t + ab * w);
                    continue;
                }
                for (std::size_t c = 0; c < n; ++c)
                    if (r(a, b, static_cast<AtomId>(c)))
                        t[ab * w + (c >> 6)] |= std::uint64_t{1} << (c & 63);
            }
        }
        RaAtomStructure s;
        s.impl_ = std::move(impl);
        return s;
    }

    auto RaAtomStructure::find(const std::string & name) const -> std::optional<AtomId>
    {
        for (std::size_t i = 0; i < impl_->names.size(); ++i)
            if (impl_->names[i] == name)
                return static_cast<AtomId>(i);
        return std::nullopt;
    }

    auto RaAtomStructure::compose(AtomId a, AtomId b) const -> AtomSet
    {
        const auto n = impl_->names.size();
        AtomSet r(n);
        if (impl_->table.empty()) {
            for (std::size_t c = 0; c < n; ++c)
                if (impl_->rule(a, b, static_cast<AtomId>(c)))
                    r.insert(static_cast<AtomId>(c));
            return r;
        }
        r.or_words(impl_->table.data() + (static_cast<std::size_t>(a) * n + b) * impl_->words);
        return r;
    }

    void RaAtomStructure::compose_into(AtomId a, AtomId b, AtomSet & out) const
    {
        const auto n = impl_->names.size();
        if (impl_->table.empty()) {
            for (std::size_t c = 0; c < n; ++c)
                if (impl_->rule(a, b, static_cast<AtomId>(c)))
                    out.insert(static_cast<AtomId>(c));
            return;
        }
        out.or_words(impl_->table.data() + (static_cast<std::size_t>(a) * n + b) * impl_->words);
    }

    auto RaAtomStructure::triples() const -> std::vector<Triple>
    {
        std::vector<Triple> out;
        const auto n = static_cast<AtomId>(size());
        for (AtomId a = 0; a < n; ++a)
            for (AtomId b = 0; b < n; ++b)
                compose(a, b).for_each([&](AtomId c) { out.push_back({a, b, c}); });
        return out;
    }

    auto ValidationReport::count(const std::string & law) const -> std::size_t
    {
        return static_cast<std::size_t>(
            std::count_if(violations.begin(), violations.end(), [&](const Violation & v) { return v.law == law; }));
    }

    namespace
    {
        // Collects violations with a per-law cap. Witness order is made canonical afterwards.
        struct Sink
        {
            std::size_t cap;
            std::map<std::string, std::vector<std::vector<AtomId>>> by_law;

            void add(const std::string & law, std::vector<AtomId> w)
            {
                auto & v = by_law[law];
                v.push_back(std::move(w));
                if (v.size() > 4 * cap + 4)
                    prune(v);
            }

            // Keeps the `cap` least witnesses so the result does not depend on scan order.
            void prune(std::vector<std::vector<AtomId>> & v) const
            {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
                if (v.size() > cap)
                    v.resize(cap);
            }

            void merge(Sink & o)
            {
                for (auto & [law, ws] : o.by_law)
                    for (auto & w : ws)
                        add(law, std::move(w));
            }

            auto finish() -> std::vector<Violation>
            {
                std::vector<Violation> out;
                for (auto & [law, ws] : by_law) {
                    prune(ws);
                    for (auto & w : ws)
                        out.push_back({law, w});
                }
                return out;
            }
        };

        void scan_row(const RaAtomStructure & s, AtomId a, bool all_self_converse, Sink & sink)
        {
            const auto n = static_cast<AtomId>(s.size());
            for (AtomId b = 0; b < n; ++b)
                for (AtomId c = 0; c < n; ++c) {
                    const bool t = s.consistent(a, b, c);
                    if (t != s.consistent(s.converse(a), c, b) || t != s.consistent(c, s.converse(b), a))
                        sink.add("peircean", {a, b, c});
                    if (all_self_converse && t && (!s.consistent(b, a, c) || !s.consistent(a, c, b)))
                        sink.add("permutation", {a, b, c});
                }
        }

        // Rows of the composition table as atom sets (works for rule-only structures too).
        auto row_set(const RaAtomStructure & s, AtomId a, AtomId b) -> AtomSet { return s.compose(a, b); }

        void add_diff(const AtomSet & x, const AtomSet & y, AtomId a, AtomId b, const char * law, Sink & sink)
        {
            if (x == y)
                return;
            for (std::size_t c = 0; c < x.universe(); ++c) {
                auto id = static_cast<AtomId>(c);
                if (x.contains(id) != y.contains(id))
                    sink.add(law, {a, b, id});
            }
        }

        // Peircean first half and the permutation law for a fixed first atom a.
        // tt[b] = {c : (conv a, c, b)} is the transpose of the conv(a) slice.
        void transpose_first(const RaAtomStructure & s, AtomId a, bool all_self_converse, Sink & sink)
        {
            const auto n = static_cast<AtomId>(s.size());
            const AtomId ca = s.converse(a);
            std::vector<AtomSet> tt(n, AtomSet(n));
            for (AtomId c = 0; c < n; ++c)
                row_set(s, ca, c).for_each([&](AtomId b) { tt[b].insert(c); });
            for (AtomId b = 0; b < n; ++b) {
                auto r = row_set(s, a, b);
                add_diff(r, tt[b], a, b, "peircean", sink);
                if (all_self_converse) {
                    auto sym = row_set(s, b, a) & tt[b];
                    add_diff(r, r & sym, a, b, "permutation", sink);
                }
            }
        }

        // Peircean second half for a fixed middle atom b: (a,b,c) iff (c, conv b, a).
        void transpose_middle(const RaAtomStructure & s, AtomId b, Sink & sink)
        {
            const auto n = static_cast<AtomId>(s.size());
            const AtomId cb = s.converse(b);
            std::vector<AtomSet> tt(n, AtomSet(n));
            for (AtomId c = 0; c < n; ++c)
                row_set(s, c, cb).for_each([&](AtomId a) { tt[a].insert(c); });
            for (AtomId a = 0; a < n; ++a)
                add_diff(row_set(s, a, b), tt[a], a, b, "peircean", sink);
        }

        // (a;b);c = a;(b;c) on atoms, for each c bit.
        void assoc_row(const RaAtomStructure & s, const std::vector<AtomSet> & comp, AtomId a, Sink & sink)
        {
            const auto n = static_cast<AtomId>(s.size());
            for (AtomId b = 0; b < n; ++b)
                for (AtomId c = 0; c < n; ++c) {
                    AtomSet left(n), right(n);
                    comp[a * n + b].for_each([&](AtomId x) { left |= comp[x * n + c]; });
                    comp[b * n + c].for_each([&](AtomId y) { right |= comp[a * n + y]; });
                    if (left != right)
                        sink.add("associativity", {a, b, c});
                }
        }
    }

    auto validate_atom_structure(const RaAtomStructure & s, const ValidateOptions & opt) -> ValidationReport
    {
        const auto n = static_cast<AtomId>(s.size());
        if (n == 0)
            throw StructuralError("atom structure has no atoms");
        ValidationReport rep;
        Sink sink{opt.max_witnesses_per_law, {}};

        bool all_self_converse = true;
        for (AtomId a = 0; a < n; ++a) {
            if (s.converse(s.converse(a)) != a)
                sink.add("converse-involution", {a});
            if (s.converse(a) != a)
                all_self_converse = false;
        }

        // Identity law. Each atom a has exactly one identity e with (e,a,a); (e,a,b) forces a=b.
        if (s.identities().empty())
            sink.add("identity-exists", {});
        for (AtomId a = 0; a < n; ++a) {
            int hits = 0;
            for (auto e : s.identities()) {
                for (AtomId b = 0; b < n; ++b)
                    if (b != a && s.consistent(e, a, b))
                        sink.add("identity", {e, a, b});
                if (s.consistent(e, a, a))
                    ++hits;
            }
            if (hits != 1)
                sink.add("identity-unique", {a});
        }

        if (opt.exec == Exec::serial) {
            for (AtomId a = 0; a < n; ++a)
                scan_row(s, a, all_self_converse, sink);
        }
        else {
#pragma omp parallel
            {
                Sink local{opt.max_witnesses_per_law, {}};
#pragma omp for schedule(dynamic)
                for (AtomId a = 0; a < n; ++a)
                    transpose_first(s, a, all_self_converse, local);
#pragma omp for schedule(dynamic)
                for (AtomId b = 0; b < n; ++b)
                    transpose_middle(s, b, local);
#pragma omp critical
                sink.merge(local);
            }
        }
        rep.violations = sink.finish();

        Sink assoc{opt.max_witnesses_per_law, {}};
        if (static_cast<std::size_t>(n) <= opt.associativity_limit) {
            rep.associativity_checked = true;
            std::vector<AtomSet> comp(static_cast<std::size_t>(n) * n);
            for (AtomId a = 0; a < n; ++a)
                for (AtomId b = 0; b < n; ++b)
                    comp[a * n + b] = s.compose(a, b);
            if (opt.exec == Exec::serial) {
                for (AtomId a = 0; a < n; ++a)
                    assoc_row(s, comp, a, assoc);
            }
            else {
#pragma omp parallel
                {
                    Sink local{opt.max_witnesses_per_law, {}};
#pragma omp for schedule(dynamic)
                    for (AtomId a = 0; a < n; ++a)
                        assoc_row(s, comp, a, local);
#pragma omp critical
                    assoc.merge(local);
                }
            }
        }
        rep.associativity_failures = assoc.finish();
        return rep;
    }

    auto compose_atoms(const RaAtomStructure & s, AtomId a, AtomId b) -> AtomSet
    {
        const auto n = static_cast<AtomId>(s.size());
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw StructuralError("unknown atom id in compose: " + std::to_string(a) + ", " + std::to_string(b));
        return s.compose(a, b);
    }

    auto FiniteRa::atom(AtomId a) const -> AtomSet
    {
        AtomSet r(s_.size());
        r.insert(a);
        return r;
    }

    auto FiniteRa::converse(const AtomSet & x) const -> AtomSet
    {
        AtomSet r(s_.size());
        x.for_each([&](AtomId a) { r.insert(s_.converse(a)); });
        return r;
    }

    auto FiniteRa::compose(const AtomSet & x, const AtomSet & y) const -> AtomSet
    {
        AtomSet r(s_.size());
        x.for_each([&](AtomId a) { y.for_each([&](AtomId b) { r |= s_.compose(a, b); }); });
        return r;
    }

    auto FiniteRa::carrier_size() const -> std::uint64_t
    {
        if (!explicit_)
            throw UsageError("carrier is lazy; it has 2^" + std::to_string(s_.size()) + " elements");
        return std::uint64_t{1} << s_.size();
    }

    auto FiniteRa::element(std::uint64_t i) const -> AtomSet
    {
        if (i >= carrier_size())
            throw UsageError("element index out of range");
        AtomSet r(s_.size());
        for (std::size_t a = 0; a < s_.size(); ++a)
            if ((i >> a) & 1U)
                r.insert(static_cast<AtomId>(a));
        return r;
    }

    auto complex_algebra(const RaAtomStructure & s, const ComplexOptions & opt) -> FiniteRa
    {
        if (s.size() > opt.budget && !opt.lazy)
            throw BudgetExceeded("complex algebra carrier over budget " + std::to_string(opt.budget) + " atoms",
                                 s.size());
        return FiniteRa(s, s.size() <= opt.budget);
    }
}
