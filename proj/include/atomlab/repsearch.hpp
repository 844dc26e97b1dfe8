#pragma once

#include "ca_structure.hpp"
#include "exec.hpp"
#include "ra_core.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace atomlab
{
    /// Square representation of a relation-algebra atom structure: an atom per ordered pair
    /// of base points, row-major.
    struct RaRepresentation
    {
        int base = 0;
        std::vector<AtomId> label;

        auto at(int x, int y) const -> AtomId { return label[static_cast<std::size_t>(x) * base + y]; }
        auto to_json() const -> nlohmann::json;
        static auto from_json(const nlohmann::json & j) -> RaRepresentation;
        friend auto operator==(const RaRepresentation &, const RaRepresentation &) -> bool = default;
    };

    /// Square representation of a CA_n atom structure: an atom per n-tuple of base points,
    /// first coordinate most significant.
    struct CaRepresentation
    {
        int n = 3;
        int base = 0;
        std::vector<AtomId> label;

        auto to_json() const -> nlohmann::json;
        static auto from_json(const nlohmann::json & j) -> CaRepresentation;
        friend auto operator==(const CaRepresentation &, const CaRepresentation &) -> bool = default;
    };

    struct RepSearchOptions
    {
        int max_base = 8;
        std::size_t node_budget = 20'000'000;  // per base size
        Exec exec = Exec::serial;              // parallel: base sizes searched concurrently
    };

    /// Outcome of a search. Without a representation this only says none exists up to
    /// `exhausted_up_to`; it is not a non-representability claim.
    template <class Rep>
    struct RepSearchResult
    {
        std::optional<Rep> rep;
        int exhausted_up_to = 0;   // every base size <= this was fully searched
        bool budget_hit = false;   // some base size was abandoned
        std::string refusal;       // precondition failure, nothing searched
        std::size_t nodes = 0;
        auto to_json() const -> nlohmann::json;
    };

    using RaSearchResult = RepSearchResult<RaRepresentation>;
    using CaSearchResult = RepSearchResult<CaRepresentation>;

    auto find_square_representation(const RaAtomStructure & s, const RepSearchOptions & opt = {}) -> RaSearchResult;
    auto find_ca_representation(const CaAtomStructure & f, const RepSearchOptions & opt = {}) -> CaSearchResult;

    struct RepCheck
    {
        bool ok = false;
        std::string violation;
        std::vector<int> witness;  // base points
        auto to_json() const -> nlohmann::json;
    };

    /// Full enumeration of the representation conditions. Throws StructuralError on a shape mismatch.
    auto verify_representation(const RaAtomStructure & s, const RaRepresentation & r) -> RepCheck;
    auto verify_representation(const CaAtomStructure & f, const CaRepresentation & r) -> RepCheck;

    /// Copy of `r` with a fresh point duplicating point `p` (every relation to it copied), or
    /// nullopt when the duplicate would need a non-identity label on the new diagonal pair.
    auto pad_representation(const RaAtomStructure & s, const RaRepresentation & r, int p)
        -> std::optional<RaRepresentation>;

    /// Hash of the structure's tables, used to key the "nothing up to B" cache.
    auto structure_hash(const RaAtomStructure & s) -> std::uint64_t;
    auto structure_hash(const CaAtomStructure & f) -> std::uint64_t;
}
