#include "atomlab/ca_structure.hpp"

#include "atomlab/error.hpp"

namespace atomlab
{
    auto CaAtomStructure::from_data(Data d) -> CaAtomStructure
    {
        const int n = d.n;
        const std::size_t N = d.names.size();
        if (n < 1)
            throw StructuralError("dimension must be positive");
        if (N == 0)
            throw StructuralError("no atoms");
        if (d.cls.size() != static_cast<std::size_t>(n))
            throw StructuralError("need one class map per dimension");
        CaAtomStructure s;
        s.counts_.assign(n, 0);
        auto members = std::make_shared<std::vector<std::vector<std::vector<AtomId>>>>(n);
        for (int i = 0; i < n; ++i) {
            if (d.cls[i].size() != N)
                throw StructuralError("class map " + std::to_string(i) + " has wrong length");
            int mx = -1;
            for (int c : d.cls[i]) {
                if (c < 0)
                    throw StructuralError("negative class id");
                mx = std::max(mx, c);
            }
            (*members)[i].resize(mx + 1);
            for (std::size_t a = 0; a < N; ++a)
                (*members)[i][d.cls[i][a]].push_back(static_cast<AtomId>(a));
            for (auto & m : (*members)[i])
                if (m.empty())
                    throw StructuralError("class ids of dimension " + std::to_string(i) + " are not dense");
            s.counts_[i] = mx + 1;
        }
        if (d.diag.size() != static_cast<std::size_t>(n))
            throw StructuralError("need an n by n diagonal table");
        for (auto & row : d.diag) {
            if (row.size() != static_cast<std::size_t>(n))
                throw StructuralError("need an n by n diagonal table");
            for (auto & x : row)
                if (x.universe() != N)
                    throw StructuralError("diagonal over the wrong universe");
        }
        auto check_map = [N](const std::vector<AtomId> & m) {
            if (m.size() != N)
                throw StructuralError("substitution map has wrong length");
            for (AtomId a : m)
                if (a < 0 || static_cast<std::size_t>(a) >= N)
                    throw StructuralError("substitution map out of range");
        };
        if (!d.transposition.empty()) {
            if (d.transposition.size() != static_cast<std::size_t>(n))
                throw StructuralError("need an n by n transposition table");
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    check_map(d.transposition.at(i).at(j));
        }
        if (!d.replacement.empty()) {
            if (d.replacement.size() != static_cast<std::size_t>(n))
                throw StructuralError("need an n by n replacement table");
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j)
                        check_map(d.replacement.at(i).at(j));
        }
        s.members_ = std::move(members);
        s.d_ = std::make_shared<const Data>(std::move(d));
        return s;
    }

    auto CaAtomStructure::class_members(int i, int c) const -> const std::vector<AtomId> &
    {
        return (*members_)[i][c];
    }

    auto CaAtomStructure::transpose(int i, int j, AtomId a) const -> AtomId
    {
        if (i == j)
            return a;
        if (i > j)
            std::swap(i, j);
        return d_->transposition[i][j][a];
    }
}
