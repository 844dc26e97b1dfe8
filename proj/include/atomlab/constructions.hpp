#pragma once

#include "graphs.hpp"
#include "ra_core.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace atomlab
{
    /// Monk's alpha(G): atoms 1' and (v, colour). Atom id of (v,c) is 1 + v*colours + c.
    auto monk_ra(const SimpleGraph & g, int colours) -> RaAtomStructure;

    /// Split-red rainbow atom structure: identity, greens g_i, one white w, reds r^s_{jk}
    /// over index pairs j <= k with s < copies.
    auto rainbow_ra(const LinearOrderSpec & greens, const LinearOrderSpec & reds, int copies) -> RaAtomStructure;

    /// Some ordering of (i,j,k) is an arithmetic progression.
    auto evenly_distributed(long long i, long long j, long long k) -> bool;

    /// a <= b;c for every a in U, b in V, c in W.
    auto safe(const std::vector<AtomId> & U, const std::vector<AtomId> & V, const std::vector<AtomId> & W,
              const RaAtomStructure & base) -> bool;

    struct BlurSpec
    {
        std::vector<AtomId> I;               // non-identity atoms of the base
        std::vector<std::vector<AtomId>> J;  // blurs; equal sets may repeat as copies
        int t = 3;                           // omega-copies materialized
    };

    /// Rebuilds a structure from its {"rule", "params"} document.
    auto structure_from_rule(const nlohmann::json & doc) -> RaAtomStructure;

    /// The F(l, mu) family over the base monk_ra(K_1, i_size): J = l-subsets of I, each in mu copies.
    auto f_family_spec(int l, int mu, int i_size, int t) -> BlurSpec;
    auto f_family_base(int i_size) -> RaAtomStructure;

    /// Atom bookkeeping for a blow-up: Id is 0, then atoms ordered by (i, W, P).
    class BlurIndex
    {
    public:
        BlurIndex(const BlurSpec & spec);

        auto size() const -> std::size_t { return 1 + static_cast<std::size_t>(spec_.t) * slots_.size(); }
        auto slots() const -> std::size_t { return slots_.size(); }
        auto slot(int w, AtomId p) const -> int;
        auto slot_block(int s) const -> int { return slots_[s].first; }
        auto slot_colour(int s) const -> AtomId { return slots_[s].second; }
        auto atom(int i, int w, AtomId p) const -> AtomId { return 1 + i * static_cast<int>(slots_.size()) + slot(w, p); }
        auto index_of(AtomId a) const -> int { return (a - 1) / static_cast<int>(slots_.size()); }
        auto slot_of(AtomId a) const -> int { return (a - 1) % static_cast<int>(slots_.size()); }
        auto spec() const -> const BlurSpec & { return spec_; }

    private:
        BlurSpec spec_;
        std::vector<std::pair<int, AtomId>> slots_;  // (block, colour)
        std::map<std::pair<int, AtomId>, int> slot_of_;
    };

    /// Throws UsageError when J has an empty blur, does not cover I, or t < 3.
    void check_blur_spec(const BlurSpec & spec, const RaAtomStructure & base);

    /// Truncated blow-up-and-blur atom structure.
    auto blur_structure(const BlurSpec & spec, const RaAtomStructure & base) -> RaAtomStructure;

    /// H^P (all atoms of colour P) and E^W (all atoms of blur W) on the truncation.
    auto blur_partition_h(const BlurSpec & spec, AtomId p) -> AtomSet;
    auto blur_partition_e(const BlurSpec & spec, int w) -> AtomSet;

    struct BlurConditionResult
    {
        int condition;
        bool holds;
        std::string witness;
    };

    /// Evaluates the five complex-blur conditions by enumeration. Condition (4) is skipped
    /// (reported as holding with witness "skipped") when the search exceeds `budget` steps.
    auto check_complex_blur(const BlurSpec & spec, const RaAtomStructure & base, int n,
                            std::uint64_t budget = 200'000'000) -> std::vector<BlurConditionResult>;

    /// Element of the blur term algebra: per block, a finite set or a cofinite one.
    /// For a cofinite block the stored pairs are the excluded atoms.
    struct CofiniteSet
    {
        struct Block
        {
            bool cofinite = false;
            std::set<std::pair<long long, AtomId>> part;  // (index i, colour P)
            friend auto operator==(const Block &, const Block &) -> bool = default;
        };

        bool identity = false;
        std::vector<Block> blocks;

        friend auto operator==(const CofiniteSet &, const CofiniteSet &) -> bool = default;
    };

    /// Boolean and relational operations on CofiniteSet, with a truncated cross-check.
    class TermAlgebraBlur
    {
    public:
        TermAlgebraBlur(BlurSpec spec, RaAtomStructure base);

        auto spec() const -> const BlurSpec & { return spec_; }
        auto truncation() const -> const RaAtomStructure & { return trunc_; }
        auto index() const -> const BlurIndex & { return idx_; }

        auto bottom() const -> CofiniteSet;
        auto top() const -> CofiniteSet;
        auto identity() const -> CofiniteSet;
        auto block(int w) const -> CofiniteSet;
        auto singleton(long long i, int w, AtomId p) const -> CofiniteSet;

        auto join(const CofiniteSet & x, const CofiniteSet & y) const -> CofiniteSet;
        auto meet(const CofiniteSet & x, const CofiniteSet & y) const -> CofiniteSet;
        auto complement(const CofiniteSet & x) const -> CofiniteSet;
        auto converse(const CofiniteSet & x) const -> CofiniteSet { return x; }
        auto contains(const CofiniteSet & x, long long i, int w, AtomId p) const -> bool;

        /// Exact symbolic composition. Throws StructuralError if a block of the result is
        /// neither finite nor cofinite.
        auto compose_symbolic(const CofiniteSet & x, const CofiniteSet & y) const -> CofiniteSet;

        /// Symbolic composition, cross-checked on the truncation when every explicit index
        /// is below t/4. Throws TruncationMismatch on disagreement.
        auto compose(const CofiniteSet & x, const CofiniteSet & y) const -> CofiniteSet;

        /// Restriction to indices below `window` as an atom set of the truncation.
        auto restrict(const CofiniteSet & x, int window) const -> AtomSet;

        /// Block-level generators: Id, full blocks, singletons and their block complements
        /// with index below t/4.
        auto generators() const -> std::vector<CofiniteSet>;

        struct CrossCheck
        {
            std::size_t pairs = 0;
            std::size_t mismatches = 0;
            std::string first_mismatch;
        };

        /// Compares symbolic and truncated composition on every pair of generators over the
        /// window t/2. Does not throw; reports counts.
        auto cross_check_generators(Exec exec = Exec::parallel) const -> CrossCheck;

        struct JoinCheck
        {
            std::size_t triples = 0;
            std::size_t missing = 0;  // a_i^{P,W} not below H^Q;H^R for a consistent (Q,R,P)
            std::size_t extra = 0;    // a_i^{P,W} below H^Q;H^R although P is not below Q;R
            std::string first_failure;
        };

        /// Checks the map P -> join of H^P on every base pair at the truncation (window t/2).
        auto hp_join_check() const -> JoinCheck;

    private:
        auto column(const CofiniteSet & x, int slot) const -> std::pair<bool, std::set<long long>>;
        void truncated_compose_into(const AtomSet & x, const AtomSet & y, AtomSet & out) const;

        BlurSpec spec_;
        RaAtomStructure base_;
        BlurIndex idx_;
        RaAtomStructure trunc_;
        std::vector<std::vector<std::vector<char>>> safe_;  // safe_[s][z][w]
    };
}
