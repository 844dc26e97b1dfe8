#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace atomlab
{
    /// Loop-free undirected graph on vertices 0..n-1.
    class SimpleGraph
    {
    public:
        SimpleGraph() = default;
        explicit SimpleGraph(int n) : n_(n), adj_(static_cast<std::size_t>(n) * n, 0) {}

        auto vertices() const -> int { return n_; }
        auto adjacent(int u, int v) const -> bool { return adj_[static_cast<std::size_t>(u) * n_ + v] != 0; }
        void add_edge(int u, int v);
        auto edges() const -> std::vector<std::pair<int, int>>;
        auto edge_count() const -> std::size_t { return edges().size(); }

        friend auto operator==(const SimpleGraph &, const SimpleGraph &) -> bool = default;

    private:
        int n_ = 0;
        std::vector<std::uint8_t> adj_;
    };

    enum class OrderKind
    {
        naturals,
        reversed_naturals,
        finite_chain
    };

    /// Truncated index order: indices 0..t-1 with the usual order, or the reverse one for N^-1.
    struct LinearOrderSpec
    {
        OrderKind kind = OrderKind::finite_chain;
        int t = 1;

        auto size() const -> int { return t; }
        /// Strict order on indices, as the order the spec names.
        auto less(int i, int j) const -> bool { return kind == OrderKind::reversed_naturals ? i > j : i < j; }
        void check() const;
    };

    auto complete_graph(int k) -> SimpleGraph;
    auto disjoint_cliques(const std::vector<int> & sizes) -> SimpleGraph;
    /// i ~ j iff 0 < |i-j| < N.
    auto band_graph(int m, int N) -> SimpleGraph;
    auto cycle_graph(int k) -> SimpleGraph;
    auto path_graph(int k) -> SimpleGraph;
    auto seeded_random_graph(int m, double p, std::uint64_t seed) -> SimpleGraph;

    struct ChromaticResult
    {
        bool exceeded = false;
        int chi = 0;
        std::vector<int> colouring;
    };

    /// Exact chromatic number by backtracking. Graphs over `max_vertices` give exceeded = true.
    auto chromatic_number(const SimpleGraph & g, int max_vertices = 20) -> ChromaticResult;

    /// Shortest cycle length; nullopt for forests.
    auto girth(const SimpleGraph & g) -> std::optional<int>;
}
