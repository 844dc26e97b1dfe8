#pragma once

#include "atom_set.hpp"
#include "exec.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace atomlab
{
    struct Triple
    {
        AtomId a, b, c;
        friend auto operator==(const Triple &, const Triple &) -> bool = default;
        friend auto operator<=>(const Triple &, const Triple &) = default;
    };

    /// Finite relation-algebra atom structure. (a,b,c) consistent means c <= a;b.
    /// Immutable; copies share storage.
    class RaAtomStructure
    {
    public:
        using Rule = std::function<bool(AtomId, AtomId, AtomId)>;
        /// Optional fast path for the dense table: sets the bits of row (a,b).
        using RowFill = std::function<void(AtomId, AtomId, std::uint64_t *)>;

        /// Structures with at most this many atoms get a dense composition table.
        static constexpr std::size_t dense_limit = 1024;

        RaAtomStructure() = default;

        static auto from_triples(std::vector<std::string> names, std::vector<AtomId> identities,
                                 std::vector<AtomId> converse, const std::vector<Triple> & triples) -> RaAtomStructure;

        /// `doc` is the {"rule", "params"} document used for serialization; may be null.
        static auto from_rule(std::vector<std::string> names, std::vector<AtomId> identities,
                              std::vector<AtomId> converse, Rule rule, nlohmann::json doc = nullptr,
                              RowFill fill = nullptr) -> RaAtomStructure;

        auto size() const -> std::size_t { return impl_ ? impl_->names.size() : 0; }
        auto name(AtomId a) const -> const std::string & { return impl_->names.at(a); }
        auto names() const -> const std::vector<std::string> & { return impl_->names; }
        auto find(const std::string & name) const -> std::optional<AtomId>;
        auto identities() const -> const std::vector<AtomId> & { return impl_->identities; }
        auto identity_set() const -> const AtomSet & { return impl_->identity_set; }
        auto is_identity(AtomId a) const -> bool { return impl_->identity_set.contains(a); }
        auto converse(AtomId a) const -> AtomId { return impl_->converse[a]; }
        auto converse_map() const -> const std::vector<AtomId> & { return impl_->converse; }
        auto consistent(AtomId a, AtomId b, AtomId c) const -> bool
        {
            if (impl_->table.empty())
                return impl_->rule(a, b, c);
            return (row(a, b)[c >> 6] >> (c & 63)) & 1U;
        }
        /// Raw row of the dense table. Only valid when dense().
        auto row(AtomId a, AtomId b) const -> const std::uint64_t *
        {
            return impl_->table.data() + (static_cast<std::size_t>(a) * impl_->names.size() + b) * impl_->words;
        }
        auto row_words() const -> std::size_t { return impl_->words; }
        auto dense() const -> bool { return !impl_->table.empty(); }
        auto rule_doc() const -> const nlohmann::json & { return impl_->doc; }

        /// {c : consistent(a,b,c)}.
        auto compose(AtomId a, AtomId b) const -> AtomSet;

        /// out |= compose(a, b). `out` must have this structure's universe.
        void compose_into(AtomId a, AtomId b, AtomSet & out) const;

        /// Every consistent triple, lexicographic. Only sensible for small structures.
        auto triples() const -> std::vector<Triple>;

    private:
        struct Impl
        {
            std::vector<std::string> names;
            std::vector<AtomId> identities;
            AtomSet identity_set;
            std::vector<AtomId> converse;
            Rule rule;
            nlohmann::json doc;
            std::size_t words = 0;
            std::vector<std::uint64_t> table;  // row (a,b) holds the bitset of c
        };

        static auto make(std::vector<std::string> names, std::vector<AtomId> identities,
                         std::vector<AtomId> converse) -> std::shared_ptr<Impl>;
        void fill_table();

        std::shared_ptr<const Impl> impl_;
    };

    struct Violation
    {
        std::string law;
        std::vector<AtomId> witness;
        friend auto operator==(const Violation &, const Violation &) -> bool = default;
    };

    /// Law violations. Associativity is not one of the atom-structure laws checked here;
    /// it is reported on its own for small structures.
    struct ValidationReport
    {
        std::vector<Violation> violations;
        bool associativity_checked = false;
        std::vector<Violation> associativity_failures;
        auto ok() const -> bool { return violations.empty(); }
        auto associative() const -> bool { return associativity_checked && associativity_failures.empty(); }
        auto count(const std::string & law) const -> std::size_t;
    };

    struct ValidateOptions
    {
        std::size_t associativity_limit = 128;
        std::size_t max_witnesses_per_law = 16;
        Exec exec = Exec::parallel;
    };

    /// Checks converse involution, identity law, Peircean law and permutation invariance for
    /// self-converse structures. On small structures associativity is reported separately.
    /// Exec::serial is the plain triple scan; Exec::parallel compares bit-matrix transposes.
    /// Throws StructuralError on a malformed converse map.
    auto validate_atom_structure(const RaAtomStructure & s, const ValidateOptions & opt = {}) -> ValidationReport;

    /// Checked entry point: throws StructuralError on an unknown id.
    auto compose_atoms(const RaAtomStructure & s, AtomId a, AtomId b) -> AtomSet;

    /// Complex algebra over an atom structure. Elements are atom sets.
    class FiniteRa
    {
    public:
        FiniteRa(RaAtomStructure s, bool explicit_carrier) : s_(std::move(s)), explicit_(explicit_carrier) {}

        auto structure() const -> const RaAtomStructure & { return s_; }
        auto explicit_carrier() const -> bool { return explicit_; }

        auto bottom() const -> AtomSet { return AtomSet(s_.size()); }
        auto top() const -> AtomSet { return AtomSet::full(s_.size()); }
        auto identity() const -> AtomSet { return s_.identity_set(); }
        auto atom(AtomId a) const -> AtomSet;

        auto join(const AtomSet & x, const AtomSet & y) const -> AtomSet { return x | y; }
        auto meet(const AtomSet & x, const AtomSet & y) const -> AtomSet { return x & y; }
        auto complement(const AtomSet & x) const -> AtomSet { return x.complement(); }
        auto converse(const AtomSet & x) const -> AtomSet;
        auto compose(const AtomSet & x, const AtomSet & y) const -> AtomSet;

        /// Number of elements, 2^atoms. Only for explicit carriers.
        auto carrier_size() const -> std::uint64_t;
        /// The i-th element in binary order. Only for explicit carriers.
        auto element(std::uint64_t i) const -> AtomSet;

    private:
        RaAtomStructure s_;
        bool explicit_;
    };

    struct ComplexOptions
    {
        std::size_t budget = 16;
        bool lazy = false;
    };

    /// Throws BudgetExceeded when atoms > budget and lazy mode is off.
    auto complex_algebra(const RaAtomStructure & s, const ComplexOptions & opt = {}) -> FiniteRa;
}
