#pragma once

#include "atom_set.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace atomlab
{
    /// Atom structure of an n-dimensional cylindric-type algebra.
    ///
    /// cls[i][a] is the id of the ≡_i class of atom a (ids dense from 0), so each ≡_i is an
    /// equivalence by construction. diag[i][j] is the atom set below d_ij.
    /// transposition[i][j] (i < j) maps a to a∘[i,j]; replacement[i][j] (i != j) maps a to
    /// a∘[i/j], so s_[i,j] and s_i^j act on atom sets by preimage. Either family may be absent.
    class CaAtomStructure
    {
    public:
        struct Data
        {
            int n = 0;
            std::vector<std::string> names;
            std::vector<std::vector<int>> cls;
            std::vector<std::vector<AtomSet>> diag;
            std::vector<std::vector<std::vector<AtomId>>> transposition;
            std::vector<std::vector<std::vector<AtomId>>> replacement;
            nlohmann::json doc;
        };

        CaAtomStructure() = default;

        /// Checks shapes and ranges; throws StructuralError.
        static auto from_data(Data d) -> CaAtomStructure;

        auto dim() const -> int { return d_->n; }
        auto size() const -> std::size_t { return d_->names.size(); }
        auto name(AtomId a) const -> const std::string & { return d_->names.at(a); }
        auto names() const -> const std::vector<std::string> & { return d_->names; }
        auto cls(int i, AtomId a) const -> int { return d_->cls[i][a]; }
        auto class_ids(int i) const -> const std::vector<int> & { return d_->cls[i]; }
        auto class_count(int i) const -> int { return counts_[i]; }
        /// Members of ≡_i class c, ascending.
        auto class_members(int i, int c) const -> const std::vector<AtomId> &;
        auto same(int i, AtomId a, AtomId b) const -> bool { return d_->cls[i][a] == d_->cls[i][b]; }
        auto diagonal(int i, int j) const -> const AtomSet & { return d_->diag[i][j]; }
        auto has_transpositions() const -> bool { return !d_->transposition.empty(); }
        auto transpose(int i, int j, AtomId a) const -> AtomId;
        auto has_replacements() const -> bool { return !d_->replacement.empty(); }
        auto replace(int i, int j, AtomId a) const -> AtomId { return d_->replacement[i][j][a]; }
        auto doc() const -> const nlohmann::json & { return d_->doc; }
        auto data() const -> const Data & { return *d_; }

    private:
        std::shared_ptr<const Data> d_;
        std::vector<int> counts_;
        std::shared_ptr<const std::vector<std::vector<std::vector<AtomId>>>> members_;
    };
}
