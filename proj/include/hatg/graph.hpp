#pragma once

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "hatg/common.hpp"

namespace hatg {

/// Which named family a graph was generated from, if any. Used to attach
/// family-specific bounds (e.g. the Sylvester bound for layered clique-trees)
/// without re-deriving the structure from the adjacency.
struct FamilyTag {
    enum class Kind { none, clique, path, cycle, tree, book, layered };
    Kind kind = Kind::none;
    int a = 0;  // clique/path/cycle: n; book: spine d; layered: depth d
    int b = 0;  // book: page count n; layered: branching N
};

/// Finite simple undirected graph on vertices 0..n-1.
/// Immutable after construction; adjacency lists are sorted ascending.
class Graph {
public:
    explicit Graph(int n, const std::vector<std::pair<int, int>>& edges = {},
                   FamilyTag family = {})
        : n_(n), adj_(size_t(std::max(n, 0))), family_(family) {
        if (n < 1) throw format_error("graph: vertex count must be >= 1");
        for (auto [u, v] : edges) {
            if (u < 0 || u >= n || v < 0 || v >= n)
                throw format_error("graph: edge endpoint out of range");
            if (u == v) throw format_error("graph: self-loops not allowed");
            adj_[size_t(u)].push_back(v);
            adj_[size_t(v)].push_back(u);
        }
        for (auto& a : adj_) {
            std::sort(a.begin(), a.end());
            if (std::adjacent_find(a.begin(), a.end()) != a.end())
                throw format_error("graph: duplicate edge");
        }
    }

    int order() const { return n_; }
    const std::vector<int>& neighbors(int v) const { return adj_[size_t(v)]; }
    int degree(int v) const { return int(adj_[size_t(v)].size()); }

    bool has_edge(int u, int v) const {
        const auto& a = adj_[size_t(u)];
        return std::binary_search(a.begin(), a.end(), v);
    }

    int max_degree() const {
        int m = 0;
        for (int v = 0; v < n_; ++v) m = std::max(m, degree(v));
        return m;
    }

    u64 edge_count() const {
        u64 twice = 0;
        for (const auto& a : adj_) twice += a.size();
        return twice / 2;
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> es;
        for (int u = 0; u < n_; ++u)
            for (int v : adj_[size_t(u)])
                if (u < v) es.emplace_back(u, v);
        return es;
    }

    const FamilyTag& family() const { return family_; }

private:
    int n_;
    std::vector<std::vector<int>> adj_;
    FamilyTag family_;
};

/// A left-to-right ordering of the vertices: perm[i] is the vertex at
/// position i, so perm.front() is the leftmost vertex.
struct Ordering {
    std::vector<int> perm;

    /// position_of[v] = position of vertex v.
    std::vector<int> positions() const {
        std::vector<int> pos(perm.size(), -1);
        for (size_t i = 0; i < perm.size(); ++i) {
            int v = perm[i];
            if (v < 0 || size_t(v) >= perm.size() || pos[size_t(v)] != -1)
                throw format_error("ordering: not a permutation");
            pos[size_t(v)] = int(i);
        }
        return pos;
    }
};

inline Ordering identity_ordering(int n) {
    Ordering o;
    o.perm.resize(size_t(n));
    std::iota(o.perm.begin(), o.perm.end(), 0);
    return o;
}

inline void validate_ordering(const Graph& g, const Ordering& ord) {
    if (int(ord.perm.size()) != g.order())
        throw format_error("ordering: length does not match graph order");
    ord.positions();  // throws unless a permutation
}

/// Neighbors of v that precede v in the ordering.
inline std::vector<int> left_neighbors(const Graph& g, const Ordering& ord, int v) {
    auto pos = ord.positions();
    std::vector<int> left;
    for (int u : g.neighbors(v))
        if (pos[size_t(u)] < pos[size_t(v)]) left.push_back(u);
    return left;
}

/// Number of edges in the longest path whose vertices appear left to right.
/// depth(v) = 0 if v has no left-neighbor, else 1 + max depth over left-neighbors.
inline int ordering_depth(const Graph& g, const Ordering& ord) {
    validate_ordering(g, ord);
    auto pos = ord.positions();
    int n = g.order();
    std::vector<int> depth(size_t(n), 0);
    int best = 0;
    for (int i = 0; i < n; ++i) {
        int v = ord.perm[size_t(i)];
        int d = 0;
        for (int u : g.neighbors(v))
            if (pos[size_t(u)] < i) d = std::max(d, depth[size_t(u)] + 1);
        depth[size_t(v)] = d;
        best = std::max(best, d);
    }
    return best;
}

/// Largest number of left-neighbors any vertex has under this ordering,
/// i.e. the d for which the ordering witnesses d-degeneracy.
inline int ordering_max_left_degree(const Graph& g, const Ordering& ord) {
    validate_ordering(g, ord);
    auto pos = ord.positions();
    int best = 0;
    for (int v = 0; v < g.order(); ++v) {
        int c = 0;
        for (int u : g.neighbors(v))
            if (pos[size_t(u)] < pos[size_t(v)]) ++c;
        best = std::max(best, c);
    }
    return best;
}

struct DegeneracyResult {
    int d;
    Ordering ordering;  // every vertex has at most d left-neighbors
};

/// Min-degree peeling. Ties are broken by smallest vertex index, so the
/// result is deterministic. The returned ordering is the reverse of the
/// removal order, which makes each removal degree a left-degree.
inline DegeneracyResult degeneracy(const Graph& g) {
    int n = g.order();
    std::vector<int> deg(size_t(n), 0);
    for (int v = 0; v < n; ++v) deg[size_t(v)] = g.degree(v);
    std::vector<bool> removed(size_t(n), false);
    std::vector<int> removal;
    removal.reserve(size_t(n));
    int d = 0;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (!removed[size_t(v)] && (best == -1 || deg[size_t(v)] < deg[size_t(best)]))
                best = v;
        d = std::max(d, deg[size_t(best)]);
        removed[size_t(best)] = true;
        removal.push_back(best);
        for (int u : g.neighbors(best))
            if (!removed[size_t(u)]) --deg[size_t(u)];
    }
    Ordering ord;
    ord.perm.assign(removal.rbegin(), removal.rend());
    return {d, std::move(ord)};
}

/// The ordering bounds and adversaries default to. Family instances are
/// numbered so that the identity ordering already witnesses their degeneracy
/// (e.g. breadth-first for layered trees, spine-first for books); graphs of
/// unknown provenance fall back to min-degree peeling.
inline Ordering canonical_ordering(const Graph& g) {
    if (g.family().kind != FamilyTag::Kind::none) return identity_ordering(g.order());
    return degeneracy(g).ordering;
}

// ---------------------------------------------------------------------------
// Named families. Canonical vertex numbering is documented per family.
// ---------------------------------------------------------------------------

inline Graph make_clique(int n) {
    std::vector<std::pair<int, int>> es;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) es.emplace_back(u, v);
    return Graph(n, es, {FamilyTag::Kind::clique, n, 0});
}

inline Graph make_path(int n) {
    std::vector<std::pair<int, int>> es;
    for (int v = 1; v < n; ++v) es.emplace_back(v - 1, v);
    return Graph(n, es, {FamilyTag::Kind::path, n, 0});
}

inline Graph make_cycle(int n) {
    if (n < 3) throw format_error("cycle: need at least 3 vertices");
    std::vector<std::pair<int, int>> es;
    for (int v = 0; v < n; ++v) es.emplace_back(v, (v + 1) % n);
    return Graph(n, es, {FamilyTag::Kind::cycle, n, 0});
}

/// Tree from a parent vector: parent[0] is ignored (root), parent[i] < i.
inline Graph make_tree(const std::vector<int>& parent) {
    int n = int(parent.size());
    if (n < 1) throw format_error("tree: need at least 1 vertex");
    std::vector<std::pair<int, int>> es;
    for (int v = 1; v < n; ++v) {
        if (parent[size_t(v)] < 0 || parent[size_t(v)] >= v)
            throw format_error("tree: parent[v] must lie in [0, v)");
        es.emplace_back(parent[size_t(v)], v);
    }
    return Graph(n, es, {FamilyTag::Kind::tree, n, 0});
}

/// Book graph: a d-clique (spine, vertices 0..d-1) complete to n mutually
/// nonadjacent pages (vertices d..d+n-1).
inline Graph make_book(int d, int n) {
    if (d < 1 || n < 1) throw format_error("book: spine and page counts must be >= 1");
    auto total = checked_add(u64(d), u64(n));
    if (!total || *total > u64(std::numeric_limits<int>::max()))
        throw overflow_error("book: vertex count overflows");
    std::vector<std::pair<int, int>> es;
    for (int u = 0; u < d; ++u)
        for (int v = u + 1; v < d; ++v) es.emplace_back(u, v);
    for (int u = 0; u < d; ++u)
        for (int p = 0; p < n; ++p) es.emplace_back(u, d + p);
    return Graph(d + n, es, {FamilyTag::Kind::book, d, n});
}

/// Index arithmetic for the complete N-ary tree of depth d, numbered
/// breadth-first with the root at 0. Level k starts at offset
/// (N^k - 1)/(N - 1) (or k when N = 1).
struct LayeredTree {
    int d;
    int N;
    std::vector<u64> level_offset;  // level_offset[k], plus a final total count

    LayeredTree(int depth, int branching) : d(depth), N(branching) {
        if (d < 1 || N < 1) throw format_error("layered: depth and branching must be >= 1");
        level_offset.resize(size_t(d) + 2);
        u64 off = 0, width = 1;
        for (int k = 0; k <= d; ++k) {
            level_offset[size_t(k)] = off;
            auto next = checked_add(off, width);
            if (!next || *next > u64(std::numeric_limits<int>::max()))
                throw overflow_error("layered: vertex count overflows");
            off = *next;
            if (k < d) {
                auto w = checked_mul(width, u64(N));
                if (!w) throw overflow_error("layered: vertex count overflows");
                width = *w;
            }
        }
        level_offset[size_t(d) + 1] = off;
    }

    int vertex_count() const { return int(level_offset[size_t(d) + 1]); }

    int depth_of(int v) const {
        int k = 0;
        while (u64(v) >= level_offset[size_t(k) + 1]) ++k;
        return k;
    }

    int parent(int v) const {
        int k = depth_of(v);
        u64 j = u64(v) - level_offset[size_t(k)];
        return int(level_offset[size_t(k) - 1] + j / u64(N));
    }

    int child(int v, int j) const {
        int k = depth_of(v);
        u64 off = u64(v) - level_offset[size_t(k)];
        return int(level_offset[size_t(k) + 1] + off * u64(N) + u64(j));
    }

    /// Index of v among the children of its parent.
    int sibling_index(int v) const {
        int k = depth_of(v);
        return int((u64(v) - level_offset[size_t(k)]) % u64(N));
    }

    /// Ancestors of v ordered root first (ascending vertex index).
    std::vector<int> ancestors(int v) const {
        std::vector<int> up;
        while (v != 0) {
            v = parent(v);
            up.push_back(v);
        }
        return {up.rbegin(), up.rend()};
    }
};

/// Layered clique-tree: the complete N-ary tree of depth d with every vertex
/// additionally joined to each of its ancestors. Breadth-first numbering, so
/// the identity ordering lists every vertex after all of its ancestors.
inline Graph make_layered(int d, int N) {
    LayeredTree t(d, N);
    int n = t.vertex_count();
    std::vector<std::pair<int, int>> es;
    for (int v = 1; v < n; ++v)
        for (int a : t.ancestors(v)) es.emplace_back(a, v);
    return Graph(n, es, {FamilyTag::Kind::layered, d, N});
}

// ---------------------------------------------------------------------------
// Text format: first line "n m", then m lines "u v" with 0-based endpoints.
// ---------------------------------------------------------------------------

inline Graph read_graph(std::istream& in) {
    long long n = 0, m = 0;
    if (!(in >> n >> m)) throw format_error("graph file: expected header \"n m\"");
    if (n < 1 || n > std::numeric_limits<int>::max())
        throw format_error("graph file: bad vertex count");
    if (m < 0) throw format_error("graph file: bad edge count");
    std::vector<std::pair<int, int>> es;
    es.reserve(size_t(m));
    for (long long i = 0; i < m; ++i) {
        long long u = 0, v = 0;
        if (!(in >> u >> v)) throw format_error("graph file: truncated edge list");
        es.emplace_back(int(u), int(v));
    }
    return Graph(int(n), es);
}

inline void write_graph(std::ostream& out, const Graph& g) {
    auto es = g.edges();
    out << g.order() << ' ' << es.size() << '\n';
    for (auto [u, v] : es) out << u << ' ' << v << '\n';
}

}  // namespace hatg
