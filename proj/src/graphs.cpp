#include "atomlab/graphs.hpp"

#include "atomlab/error.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <random>

namespace atomlab
{
    void SimpleGraph::add_edge(int u, int v)
    {
        if (u < 0 || v < 0 || u >= n_ || v >= n_)
            throw StructuralError("edge endpoint out of range");
        if (u == v)
            throw StructuralError("loops are not allowed");
        adj_[static_cast<std::size_t>(u) * n_ + v] = 1;
        adj_[static_cast<std::size_t>(v) * n_ + u] = 1;
    }

    auto SimpleGraph::edges() const -> std::vector<std::pair<int, int>>
    {
        std::vector<std::pair<int, int>> out;
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v)
                if (adjacent(u, v))
                    out.emplace_back(u, v);
        return out;
    }

    void LinearOrderSpec::check() const
    {
        if (t < 1)
            throw UsageError("linear order truncation must be >= 1");
    }

    auto complete_graph(int k) -> SimpleGraph
    {
        if (k < 1)
            throw UsageError("complete_graph needs k >= 1");
        SimpleGraph g(k);
        for (int u = 0; u < k; ++u)
            for (int v = u + 1; v < k; ++v)
                g.add_edge(u, v);
        return g;
    }

    auto disjoint_cliques(const std::vector<int> & sizes) -> SimpleGraph
    {
        int n = 0;
        for (auto s : sizes) {
            if (s < 1)
                throw UsageError("clique sizes must be >= 1");
            n += s;
        }
        if (n < 1)
            throw UsageError("disjoint_cliques needs at least one clique");
        SimpleGraph g(n);
        int base = 0;
        for (auto s : sizes) {
            for (int u = 0; u < s; ++u)
                for (int v = u + 1; v < s; ++v)
                    g.add_edge(base + u, base + v);
            base += s;
        }
        return g;
    }

    auto band_graph(int m, int N) -> SimpleGraph
    {
        if (m < 1 || N < 1)
            throw UsageError("band_graph needs m, N >= 1");
        SimpleGraph g(m);
        for (int u = 0; u < m; ++u)
            for (int v = u + 1; v < m && v - u < N; ++v)
                g.add_edge(u, v);
        return g;
    }

    auto cycle_graph(int k) -> SimpleGraph
    {
        if (k < 3)
            throw UsageError("cycle_graph needs k >= 3");
        SimpleGraph g(k);
        for (int u = 0; u < k; ++u)
            g.add_edge(u, (u + 1) % k);
        return g;
    }

    auto path_graph(int k) -> SimpleGraph
    {
        if (k < 1)
            throw UsageError("path_graph needs k >= 1");
        SimpleGraph g(k);
        for (int u = 0; u + 1 < k; ++u)
            g.add_edge(u, u + 1);
        return g;
    }

    auto seeded_random_graph(int m, double p, std::uint64_t seed) -> SimpleGraph
    {
        if (m < 1 || p < 0.0 || p > 1.0)
            throw UsageError("seeded_random_graph needs m >= 1 and 0 <= p <= 1");
        std::mt19937_64 rng(seed);
        // Threshold on raw 64-bit draws keeps the output independent of the library's distributions.
        const auto thresh = static_cast<long double>(p) * static_cast<long double>(std::numeric_limits<std::uint64_t>::max());
        SimpleGraph g(m);
        for (int u = 0; u < m; ++u)
            for (int v = u + 1; v < m; ++v) {
                auto draw = rng();
                if (p >= 1.0 || static_cast<long double>(draw) < thresh)
                    g.add_edge(u, v);
            }
        return g;
    }

    namespace
    {
        auto colour_with(const SimpleGraph & g, const std::vector<int> & order, int k, std::vector<int> & col,
                         std::size_t pos) -> bool
        {
            if (pos == order.size())
                return true;
            const int v = order[pos];
            int used = 0;
            for (std::size_t i = 0; i < pos; ++i)
                used = std::max(used, col[order[i]] + 1);
            // New colour classes are only opened in order, which removes colour symmetry.
            for (int c = 0; c < std::min(k, used + 1); ++c) {
                bool ok = true;
                for (std::size_t i = 0; i < pos && ok; ++i)
                    if (col[order[i]] == c && g.adjacent(v, order[i]))
                        ok = false;
                if (!ok)
                    continue;
                col[v] = c;
                if (colour_with(g, order, k, col, pos + 1))
                    return true;
            }
            col[v] = -1;
            return false;
        }
    }

    auto chromatic_number(const SimpleGraph & g, int max_vertices) -> ChromaticResult
    {
        ChromaticResult r;
        const int n = g.vertices();
        if (n > max_vertices) {
            r.exceeded = true;
            return r;
        }
        if (n == 0)
            return r;
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            int da = 0, db = 0;
            for (int v = 0; v < n; ++v) {
                da += g.adjacent(a, v);
                db += g.adjacent(b, v);
            }
            return da > db;
        });
        for (int k = 1; k <= n; ++k) {
            std::vector<int> col(n, -1);
            if (colour_with(g, order, k, col, 0)) {
                r.chi = k;
                r.colouring = col;
                return r;
            }
        }
        return r;
    }

    auto girth(const SimpleGraph & g) -> std::optional<int>
    {
        const int n = g.vertices();
        int best = std::numeric_limits<int>::max();
        for (int s = 0; s < n; ++s) {
            std::vector<int> dist(n, -1), parent(n, -1);
            std::queue<int> q;
            dist[s] = 0;
            q.push(s);
            while (!q.empty()) {
                int u = q.front();
                q.pop();
                for (int v = 0; v < n; ++v) {
                    if (!g.adjacent(u, v))
                        continue;
                    if (dist[v] < 0) {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        q.push(v);
                    }
                    else if (parent[u] != v) {
                        best = std::min(best, dist[u] + dist[v] + 1);
                    }
                }
            }
        }
        if (best == std::numeric_limits<int>::max())
            return std::nullopt;
        return best;
    }
}
