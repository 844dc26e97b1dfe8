#pragma once

#include "ca_structure.hpp"
#include "exec.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace atomlab
{
    struct HirschParams
    {
        int m = 3;
        int n = 3;
        int r = 0;
    };

    /// kappa(x,0) = 0, kappa(x,y+1) = 1 + x*kappa(x,y). Throws Error on overflow.
    auto hirsch_kappa(std::uint64_t x, std::uint64_t y) -> std::uint64_t;
    /// psi(n,r) = kappa((n-1)r, (n-1)r) + 1.
    auto hirsch_psi(std::uint64_t n, std::uint64_t r) -> std::uint64_t;
    /// |Bin(n,r)| = 1 + (n-1) r psi(n,r).
    auto hirsch_bin_size(std::uint64_t n, std::uint64_t r) -> std::uint64_t;

    /// Bin(n,r). Id is 0, a^k(i,j) is 1 + (i r + j) psi + k.
    class HirschBin
    {
    public:
        static constexpr int id = 0;
        static constexpr std::uint64_t max_size = 512;

        /// Throws BudgetExceeded above max_size.
        HirschBin(int n, int r);

        auto size() const -> int { return size_; }
        auto psi() const -> int { return psi_; }
        auto encode(int i, int j, int k) const -> int { return 1 + (i * r_ + j) * psi_ + k; }
        auto colour(int b) const -> int { return (b - 1) / psi_ / r_; }
        auto index(int b) const -> int { return (b - 1) / psi_ % r_; }
        auto copy(int b) const -> int { return (b - 1) % psi_; }
        auto name(int b) const -> std::string;
        auto find(const std::string & name) const -> std::optional<int>;
        /// Membership of the ordered triple in Forb.
        auto forbidden(int l, int mu, int rho) const -> bool;

    private:
        int n_, r_, psi_, size_;
    };

    struct HirschOptions
    {
        std::uint64_t budget = 4'000'000;  // most atoms F(m,n,r) may have
        /// Ordered triples added to Forb. Only for mutation experiments.
        std::vector<std::array<int, 3>> extra_forbidden;
        Exec exec = Exec::parallel;
    };

    /// C(m,n,r): the complex algebra over the atoms F(m,n,r). Atoms are listed in ascending
    /// order of their entries (x<y) read column by column: (0,1), (0,2), (1,2), (0,3), ...
    class HirschAlgebra
    {
    public:
        auto params() const -> const HirschParams & { return p_; }
        auto bin() const -> const HirschBin & { return bin_; }
        auto m() const -> int { return p_.m; }
        auto size() const -> std::size_t { return keys_.size(); }
        auto entry(AtomId f, int x, int y) const -> int;
        /// Full m*m matrix, row major.
        auto matrix(AtomId f) const -> std::vector<int>;
        auto find(const std::vector<int> & matrix) const -> std::optional<AtomId>;
        /// Membership in F(m,n,r) of an arbitrary m*m matrix.
        auto valid(const std::vector<int> & matrix) const -> bool;
        /// No ordering of the three edges is forbidden.
        auto triangle_ok(int p, int q, int s) const -> bool
        {
            return tri_[(static_cast<std::size_t>(p) * bin_.size() + q) * bin_.size() + s] != 0;
        }
        auto forbidden(int l, int mu, int rho) const -> bool;
        /// f tau, if it lies in F(m,n,r).
        auto substitute(AtomId f, const std::vector<int> & tau) const -> std::optional<AtomId>;
        /// ≡_x, diagonals, transpositions and replacements. Substitution families that are not
        /// closed (possible only with planted Forb triples) are left out.
        auto structure() const -> const CaAtomStructure & { return ca_; }

    private:
        friend auto hirsch_algebra(const HirschParams &, const HirschOptions &) -> HirschAlgebra;
        HirschAlgebra(HirschParams p, HirschBin b) : p_(p), bin_(b) {}

        auto key_of(const std::vector<int> & matrix) const -> std::uint64_t;

        HirschParams p_;
        HirschBin bin_;
        std::vector<char> tri_;
        std::vector<std::array<int, 3>> extra_;
        std::vector<std::uint64_t> keys_;  // ascending; one per atom
        std::vector<std::uint16_t> cells_; // upper triangle per atom, column order
        CaAtomStructure ca_;
    };

    /// Enumerates F(m,n,r). Throws UsageError on m < 3 or n < 2, BudgetExceeded above budget.
    auto hirsch_algebra(const HirschParams & p, const HirschOptions & opt = {}) -> HirschAlgebra;

    struct CommutativityWitness
    {
        bool found = false;
        std::vector<int> h;  // m*m
        int rule = 0;        // 0 f=g, 1 g[y/z], 2 f[x/z], 3 least free colour
        std::string diagnostic;
    };

    /// Given f ≡_xy g, builds h with f ≡_x h ≡_y g by the three-case construction.
    auto commutativity_witness(const HirschAlgebra & alg, AtomId f, AtomId g, int x, int y) -> CommutativityWitness;

    enum class NeatPath
    {
        automatic,
        materialized,
        column_profile
    };

    struct NeatReductReport
    {
        std::string path;
        std::uint64_t small_atoms = 0;
        std::uint64_t large_atoms = 0;
        bool injective = false;
        bool surjective = false;
        bool diagonals = false;
        bool cylindrifiers = false;
        bool substitutions = false;
        std::size_t violations = 0;
        std::string first_violation;
        std::vector<std::pair<int, AtomId>> cylindrifier_failures;  // (x, atom of F(m,n,r))
    };

    /// Verifies X -> {f in F(m',n,r) : f restricted to m x m in X} is an isomorphism
    /// C(m,n,r) -> Nr_m C(m',n,r). The column-profile path (m = 3, m' = 4) never materializes
    /// F(m',n,r). Throws VerificationError on any failed check.
    auto hirsch_neat_reduct_iso(const HirschParams & p, int m_large, NeatPath path = NeatPath::automatic,
                                const HirschOptions & opt = {}) -> NeatReductReport;

    /// Same checks, reporting violations instead of throwing.
    auto neat_reduct_check(const HirschParams & p, int m_large, NeatPath path = NeatPath::automatic,
                           const HirschOptions & opt = {}) -> NeatReductReport;

    /// Atoms of `large` whose restriction is atom f of `small`, ascending.
    auto neat_image(const HirschAlgebra & small, const HirschAlgebra & large, AtomId f) -> std::vector<AtomId>;
}
