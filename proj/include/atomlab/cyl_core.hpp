#pragma once

#include "ca_structure.hpp"
#include "exec.hpp"
#include "ra_core.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace atomlab
{
    /// n x n grid of atoms, row major.
    struct BasicMatrix
    {
        int n = 0;
        std::vector<AtomId> m;
        auto at(int i, int j) const -> AtomId { return m[i * n + j]; }
        friend auto operator==(const BasicMatrix &, const BasicMatrix &) -> bool = default;
        friend auto operator<=>(const BasicMatrix &, const BasicMatrix &) = default;
    };

    /// First violated matrix invariant, or nullopt.
    auto basic_matrix_violation(const RaAtomStructure & s, const BasicMatrix & M) -> std::optional<std::string>;

    /// All n x n basic matrices in lexicographic order. Throws BudgetExceeded when more than
    /// `budget` would be produced.
    auto basic_matrices(const RaAtomStructure & s, int n, std::size_t budget = 4'000'000, Exec exec = Exec::parallel)
        -> std::vector<BasicMatrix>;

    /// Frame of a set of basic matrices: M ≡_i N iff they agree off row and column i,
    /// D_ij = {M : M_ij is an identity}. Substitutions are included when the set is closed under them.
    auto matrix_structure(const RaAtomStructure & s, const std::vector<BasicMatrix> & mats) -> CaAtomStructure;

    /// M ≡_ij N relation used by the amalgamation clause.
    using PairRelation = std::function<bool(const BasicMatrix &, const BasicMatrix &, int i, int j)>;

    /// Default reading: agreement on every entry whose index pair avoids i and j.
    auto agree_off(const BasicMatrix & a, const BasicMatrix & b, int i, int j) -> bool;

    struct BasisOptions
    {
        PairRelation relation;            // empty: agree_off, with a linear-time check
        bool require_transpositions = false;
        Exec exec = Exec::parallel;
    };

    struct BasisReport
    {
        bool holds = true;
        std::string failure;  // "amalgamation" or "transposition"
        int i = -1, j = -1;
        std::size_t m_index = 0, n_index = 0;  // indices into the input set
        std::size_t pairs_checked = 0;
    };

    /// For all M ≡_ij N there is L in the set with M ≡_i L ≡_j N, and optionally closure
    /// under node transpositions.
    auto is_cylindric_basis(const std::vector<BasicMatrix> & mats, int n, const BasisOptions & opt = {})
        -> BasisReport;

    /// Finite complex algebra over a CA atom structure. Elements are atom sets.
    class ComplexCa
    {
    public:
        explicit ComplexCa(CaAtomStructure f) : f_(std::move(f)) {}

        auto frame() const -> const CaAtomStructure & { return f_; }
        auto bottom() const -> AtomSet { return AtomSet(f_.size()); }
        auto top() const -> AtomSet { return AtomSet::full(f_.size()); }
        auto atom(AtomId a) const -> AtomSet;
        auto cyl(int i, const AtomSet & x) const -> AtomSet;
        auto diag(int i, int j) const -> AtomSet { return f_.diagonal(i, j); }
        /// s_[i,j] X = {a : a∘[i,j] in X}.
        auto swap(int i, int j, const AtomSet & x) const -> AtomSet;
        /// s_i^j X = {a : a∘[i/j] in X}. Falls back to c_i(d_ij . X) without replacement maps.
        auto subst(int i, int j, const AtomSet & x) const -> AtomSet;

    private:
        CaAtomStructure f_;
    };

    /// Throws BudgetExceeded above `budget` atoms.
    auto complex_ca(const CaAtomStructure & f, std::size_t budget = 1u << 22) -> ComplexCa;

    enum class Signature
    {
        Sc,
        CA,
        PA,
        PEA
    };

    auto signature_name(Signature s) -> std::string;
    auto parse_signature(const std::string & s) -> Signature;

    struct CaViolation
    {
        std::string law;
        std::vector<int> dims;
        std::vector<AtomId> atoms;
    };

    struct CaAxiomReport
    {
        std::vector<CaViolation> violations;
        std::vector<CaViolation> commutativity_failures;
        std::size_t atoms = 0;
        auto ok() const -> bool { return violations.empty(); }
        auto commutative() const -> bool { return commutativity_failures.empty(); }
        auto count(const std::string & law) const -> std::size_t;
    };

    /// Atom-level check of the signature's axioms (sufficient by additivity). Commutativity of
    /// cylindrifiers is reported separately.
    auto ca_axiom_check(const CaAtomStructure & f, Signature sig, std::size_t max_witnesses = 8) -> CaAxiomReport;

    /// c_x c_y = c_y c_x on atoms: each component of the (≡_x class, ≡_y class) incidence graph
    /// must be complete bipartite.
    auto commutativity_failures(const CaAtomStructure & f, std::size_t max_witnesses = 8) -> std::vector<CaViolation>;

    // ---------------------------------------------------------------- rainbow

    enum class ColourKind
    {
        green0,     // g_0^i, i a tint (an element of N^-1 written 0, -1, -2, ...)
        green,      // g_j, 1 <= j <= n-2
        white,      // w_i, i <= n-2
        red,        // r_kl, directed: the reverse edge carries r_lk
        shade_red,  // rho; never in atoms
    };

    struct Colour
    {
        ColourKind kind = ColourKind::white;
        int a = 0;
        int b = 0;
        auto is_green() const -> bool { return kind == ColourKind::green0 || kind == ColourKind::green; }
        auto reversed() const -> Colour { return kind == ColourKind::red ? Colour{kind, b, a} : *this; }
        auto name() const -> std::string;
        static auto parse(const std::string & s) -> Colour;
        friend auto operator==(const Colour &, const Colour &) -> bool = default;
        friend auto operator<=>(const Colour &, const Colour &) = default;
    };

    /// Truncated rainbow palette: tints G subset of N^-1, reds indexed 0..reds-1.
    struct Palette
    {
        int n = 3;
        std::vector<int> tints;    // ascending, each <= 0
        bool plain_greens = true;  // g_1 .. g_{n-2}
        std::vector<int> whites{0, 1};
        int reds = 0;
        bool shade_red = false;

        /// Every edge colour of the palette, in a fixed order.
        auto colours() const -> std::vector<Colour>;
        auto has(const Colour & c) const -> bool;
        auto tint_index(int tint) const -> int;
        auto to_json() const -> nlohmann::json;
        static auto from_json(const nlohmann::json & j) -> Palette;
    };

    /// One-white palette: no greens, no reds, only w_0.
    auto one_white_palette(int n = 3) -> Palette;
    /// Tints 0, -1, ..., -(tints-1), all whites, `reds` reds.
    auto rainbow_palette(int n, int tints, int reds) -> Palette;

    /// Complete graph labelled by palette colours, plus yellow shades on (n-1)-sets of nodes
    /// without green edges. Shades are masks over palette tint indices.
    struct ColouredGraph
    {
        int nodes = 0;
        std::vector<std::optional<Colour>> edge;  // nodes*nodes, edge[x*nodes+y]
        std::map<std::vector<int>, std::uint64_t> yellow;

        explicit ColouredGraph(int k = 0) : nodes(k), edge(static_cast<std::size_t>(k) * k) {}
        auto label(int x, int y) const -> const std::optional<Colour> & { return edge[x * nodes + y]; }
        /// Sets (x,y) and the reverse edge.
        void set(int x, int y, Colour c);
        auto to_json(const Palette & p) const -> nlohmann::json;
        static auto from_json(const nlohmann::json & j, const Palette & p) -> ColouredGraph;
        friend auto operator==(const ColouredGraph &, const ColouredGraph &) -> bool = default;
    };

    /// The triangle (x,y,z) is one of the forbidden triples.
    auto forbidden_triangle(const ColouredGraph & g, int x, int y, int z) -> bool;

    struct Cone
    {
        std::vector<int> base;  // x_0 .. x_{n-2}
        int apex;
        int tint;
        friend auto operator==(const Cone &, const Cone &) -> bool = default;
    };

    /// Every n-node subset that is an i-cone, in lexicographic order of (apex, base).
    auto find_cones(const ColouredGraph & g, int n) -> std::vector<Cone>;

    /// Violations of the four coloured-graph clauses. Throws StructuralError on a colour outside
    /// the palette.
    auto coloured_graph_check(const ColouredGraph & g, const Palette & p) -> std::vector<Violation>;

    struct RainbowCa
    {
        CaAtomStructure structure;
        std::vector<std::vector<int>> surjection;  // restricted-growth map n -> nodes
        std::vector<ColouredGraph> graphs;
    };

    /// Atoms are surjections from n onto valid coloured graphs, up to isomorphism. A surjection
    /// determines its node order, so the restricted-growth form is canonical. n = 3 only.
    auto rainbow_ca_atoms(const Palette & p, std::size_t budget = 200'000) -> RainbowCa;
}
