#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "hatg/adversary.hpp"
#include "hatg/common.hpp"
#include "hatg/engine.hpp"
#include "hatg/graph.hpp"

namespace hatg {

// ---------------------------------------------------------------------------
// Clique strategy: vertex i guesses the color that would make the total of
// all colors congruent to i mod n. Exactly one vertex is correct on every
// assignment, so the strategy wins K_n with q = n.
// ---------------------------------------------------------------------------

class CliqueRule : public ComputedRule {
public:
    int guess(const Graph&, int q, int v, std::span<const int> visible) const override {
        long long sum = 0;
        for (int c : visible) sum += c;
        long long r = (static_cast<long long>(v) - sum) % q;
        return int((r + q) % q);
    }
    std::string name() const override { return "clique"; }
    std::vector<long long> params() const override { return {}; }
};

inline Strategy clique_strategy(int n) {
    Strategy s(n, n);
    auto rule = std::make_shared<CliqueRule>();
    for (int v = 0; v < n; ++v) s.set_rule(v, rule);
    return s;
}

// ---------------------------------------------------------------------------
// Color tuples. A tuple lists colors along a root-to-vertex chain, root
// first. Tuples of equal width compare lexicographically, and the rank
// encoding below (first coordinate most significant) matches that order.
// ---------------------------------------------------------------------------

using ColorTuple = std::vector<int>;

inline ColorTuple tuple_from_rank(u64 rank, int width, int q) {
    ColorTuple t(size_t(width), 0);
    for (int j = width - 1; j >= 0; --j) {
        t[size_t(j)] = int(rank % u64(q));
        rank /= u64(q);
    }
    return t;
}

inline u64 tuple_rank(const ColorTuple& t, int q) {
    u64 r = 0;
    for (int c : t) r = r * u64(q) + u64(c);
    return r;
}

/// The candidate-count sequence for depth d and palette size q:
/// r_i = s_{i+1} - 2 for i < d and r_d = q^{d+1}, which gives
/// r_{d-1} = q - 1 when q = s_d - 1 (the palette the construction targets).
/// For d = 1 any q >= 2 is accepted with r_0 = q - 1; deeper constructions
/// require the exact Sylvester palette.
struct RSequence {
    int d;
    int q;
    std::vector<u64> r;  // r[0..d]
};

inline RSequence r_sequence(int d, int q = -1) {
    if (d < 1) throw precondition_error("r_sequence: depth must be >= 1");
    u64 proper_q = sylvester(d) - 1;
    if (q < 0) q = int(proper_q);
    if (q < 2) throw precondition_error("r_sequence: need q >= 2");
    RSequence rs{d, q, std::vector<u64>(size_t(d) + 1)};
    if (u64(q) == proper_q) {
        for (int i = 0; i < d; ++i) rs.r[size_t(i)] = sylvester(i + 1) - 2;
    } else if (d == 1) {
        rs.r[0] = u64(q) - 1;
    } else {
        throw precondition_error("r_sequence: depth >= 2 requires q = s_d - 1 = " +
                                 std::to_string(proper_q));
    }
    auto top = checked_pow(u64(q), u64(d) + 1);
    if (!top) throw overflow_error("r_sequence: q^(d+1) exceeds 64 bits");
    rs.r[size_t(d)] = *top;
    return rs;
}

/// Colors appearing at the given tuple coordinate in at least min_count
/// members of R, ascending. When |R| < (t+1)(t+2) and min_count = t+1, the
/// result has at most t+1 elements by pigeonhole.
inline std::vector<int> abundant_colors(const std::vector<ColorTuple>& R, int position,
                                        u64 min_count) {
    std::map<int, u64> counts;
    for (const auto& t : R) {
        if (position < 0 || size_t(position) >= t.size())
            throw precondition_error("abundant_colors: position out of range");
        ++counts[t[size_t(position)]];
    }
    std::vector<int> out;
    for (auto [c, k] : counts)
        if (k >= min_count) out.push_back(c);
    return out;
}

/// Order-preserving injection from a sorted color set into a sorted tuple
/// set: the k-th smallest color maps to the k-th smallest tuple.
struct OrderInjection {
    std::vector<int> colors;        // ascending
    std::vector<ColorTuple> tuples; // ascending, at least as many as colors

    const ColorTuple& apply(int color) const {
        auto it = std::lower_bound(colors.begin(), colors.end(), color);
        if (it == colors.end() || *it != color)
            throw precondition_error("injection: color not in domain");
        return tuples[size_t(it - colors.begin())];
    }

    std::optional<int> invert(const ColorTuple& t) const {
        auto it = std::lower_bound(tuples.begin(), tuples.begin() + long(colors.size()), t);
        if (it == tuples.begin() + long(colors.size()) || *it != t) return std::nullopt;
        return colors[size_t(it - tuples.begin())];
    }
};

inline OrderInjection make_phi(std::vector<int> colors, std::vector<ColorTuple> tuples) {
    if (!std::is_sorted(colors.begin(), colors.end()) ||
        !std::is_sorted(tuples.begin(), tuples.end()))
        throw precondition_error("injection: inputs must be sorted");
    if (colors.size() > tuples.size())
        throw internal_error("injection: more colors than target tuples");
    return {std::move(colors), std::move(tuples)};
}

// ---------------------------------------------------------------------------
// k-subsets of {0..M-1} in lexicographic order of their sorted element lists.
// ---------------------------------------------------------------------------

inline u64 subset_count(u64 M, u64 k) {
    auto c = binomial(M, k);
    if (!c) throw overflow_error("subset_count: binomial exceeds 64 bits");
    return *c;
}

inline std::vector<u64> subset_unrank(u64 M, u64 k, u64 rank) {
    if (rank >= subset_count(M, k))
        throw precondition_error("subset_unrank: rank out of range");
    std::vector<u64> out;
    out.reserve(size_t(k));
    u64 a = 0;
    for (u64 slot = 0; slot < k; ++slot) {
        u64 remaining = k - slot - 1;
        while (true) {
            u64 block = subset_count(M - 1 - a, remaining);
            if (rank < block) break;
            rank -= block;
            ++a;
        }
        out.push_back(a);
        ++a;
    }
    return out;
}

/// Deterministic assignment of k-subsets of a universe of size M to child
/// indices: child j receives the subset of rank j mod C(M, k). With at least
/// C(M, k) children every subset is assigned at least once.
struct SubsetAssignment {
    u64 universe;
    u64 k;
    u64 total;  // C(universe, k)

    SubsetAssignment(u64 M, u64 subset_size) : universe(M), k(subset_size),
                                               total(subset_count(M, subset_size)) {
        if (k > M) throw precondition_error("subset assignment: k > universe");
    }

    std::vector<u64> subset_for(u64 child_index) const {
        return subset_unrank(universe, k, child_index % total);
    }
};

// ---------------------------------------------------------------------------
// The guessing strategy for layered clique-trees.
// ---------------------------------------------------------------------------

/// At most r_i candidate colorings of the root-to-v chain, deduced from the
/// colors of v's descendants. Contains the true chain coloring whenever every
/// descendant of v guesses wrong.
struct CandidateSet {
    int width;                      // chain length: depth(v) + 1
    std::vector<ColorTuple> tuples; // sorted, exactly r_i entries after padding
};

/// Strategy on the layered clique-tree of depth d and branching N.
///
/// Every vertex sees its whole subtree and its whole ancestor chain. Working
/// bottom-up, a vertex w at depth i+1 deduces a set R_w of r_{i+1} candidate
/// colorings for its own chain from the assumption that all its descendants
/// guess wrong. Colors appearing in at least r_i + 1 candidates at w's own
/// coordinate are "abundant"; the pigeonhole bound r_{i+1} < (r_i+1)(r_i+2)
/// keeps the abundant set no larger than the preassigned subset S_w, so the
/// order isomorphism phi_w between them is defined. w guesses
/// phi_w^{-1}(chain colors) when that preimage exists, else color 0. The
/// parent in turn shrinks its own candidate set: if some child's color is
/// not abundant, the matching candidates of that child are few; otherwise
/// the chain coloring avoids every phi_w(color of w), and since the S_w
/// range over all (r_i+1)-subsets, few assignments avoid them all.
class LayeredRule : public ComputedRule {
public:
    LayeredRule(int d, int N, int q = -1)
        : tree_(d, N), rs_(r_sequence(d, q)) {
        for (int i = 0; i + 1 <= d; ++i) {
            auto M = checked_pow(u64(rs_.q), u64(i) + 1);
            if (!M) throw overflow_error("layered rule: q^(i+1) exceeds 64 bits");
            auto c = binomial(*M, rs_.r[size_t(i)] + 1);
            if (!c || u64(N) < *c)
                throw precondition_error(
                    "layered rule: branching too small at depth " + std::to_string(i + 1) +
                    ": need N >= C(" + std::to_string(*M) + ", " +
                    std::to_string(rs_.r[size_t(i)] + 1) + ")" +
                    (c ? " = " + std::to_string(*c) : " which exceeds 64 bits"));
        }
    }

    int depth() const { return tree_.d; }
    int branching() const { return tree_.N; }
    int palette() const { return rs_.q; }
    const RSequence& r_sequence_values() const { return rs_; }
    const LayeredTree& tree() const { return tree_; }

    /// The preassigned tuple subset for a non-root vertex, sorted.
    std::vector<ColorTuple> subset_tuples_for(int v) const {
        int i = tree_.depth_of(v) - 1;
        if (i < 0) throw precondition_error("subset_tuples_for: root has no subset");
        u64 M = *checked_pow(u64(rs_.q), u64(i) + 1);
        SubsetAssignment assign(M, rs_.r[size_t(i)] + 1);
        std::vector<ColorTuple> out;
        for (u64 rank : assign.subset_for(u64(tree_.sibling_index(v))))
            out.push_back(tuple_from_rank(rank, i + 1, rs_.q));
        return out;
    }

    /// f_v: candidate colorings of the root-to-v chain given the colors of
    /// v's descendants (other entries of `colors` are ignored).
    CandidateSet candidate_set(int v, const std::vector<int>& colors) const {
        int i = tree_.depth_of(v);
        int width = i + 1;
        if (i == tree_.d) {
            // deepest level: every chain coloring is a candidate
            std::vector<ColorTuple> all;
            u64 count = rs_.r[size_t(i)];
            all.reserve(size_t(count));
            for (u64 rank = 0; rank < count; ++rank)
                all.push_back(tuple_from_rank(rank, width, rs_.q));
            return {width, std::move(all)};
        }

        std::vector<std::vector<int>> child_abundant((size_t(tree_.N)));
        std::vector<CandidateSet> child_sets((size_t(tree_.N)));
        for (int j = 0; j < tree_.N; ++j) {
            int w = tree_.child(v, j);
            int cw = colors[size_t(w)];
            if (cw < 0 || cw >= rs_.q)
                throw precondition_error("candidate_set: descendant color missing");
            child_sets[size_t(j)] = candidate_set(w, colors);
            child_abundant[size_t(j)] = abundant_colors(
                child_sets[size_t(j)].tuples, width, rs_.r[size_t(i)] + 1);
            if (!std::binary_search(child_abundant[size_t(j)].begin(),
                                    child_abundant[size_t(j)].end(), cw)) {
                // some child wears a scarce color: its matching candidates,
                // restricted to the chain above it, are already few
                std::vector<ColorTuple> restricted;
                for (const auto& t : child_sets[size_t(j)].tuples)
                    if (t[size_t(width)] == cw)
                        restricted.emplace_back(t.begin(), t.begin() + width);
                return padded(std::move(restricted), width, rs_.r[size_t(i)]);
            }
        }

        // every child's color is abundant: collect the tuples phi_w(color of w)
        // and keep the chain assignments avoiding all of them
        std::set<ColorTuple> bad;
        for (int j = 0; j < tree_.N; ++j) {
            int w = tree_.child(v, j);
            auto phi = make_phi(child_abundant[size_t(j)], subset_tuples_for(w));
            bad.insert(phi.apply(colors[size_t(w)]));
        }
        std::vector<ColorTuple> good;
        u64 count = *checked_pow(u64(rs_.q), u64(width));
        for (u64 rank = 0; rank < count; ++rank) {
            ColorTuple t = tuple_from_rank(rank, width, rs_.q);
            if (!bad.count(t)) {
                good.push_back(std::move(t));
                if (good.size() > rs_.r[size_t(i)])
                    throw internal_error("candidate_set: good assignments exceed r_i");
            }
        }
        return padded(std::move(good), width, rs_.r[size_t(i)]);
    }

    int guess(const Graph& g, int q, int v, std::span<const int> visible) const override {
        if (q != rs_.q) throw format_error("layered rule: palette mismatch");
        if (g.order() != tree_.vertex_count())
            throw format_error("layered rule: graph order mismatch");
        std::vector<int> colors(size_t(g.order()), -1);
        const auto& nb = g.neighbors(v);
        for (size_t k = 0; k < nb.size(); ++k) colors[size_t(nb[k])] = visible[k];

        if (v == 0) {
            CandidateSet cs = candidate_set(0, colors);
            return cs.tuples.front()[0];  // least remaining candidate for the root color
        }
        int i = tree_.depth_of(v) - 1;
        CandidateSet rw = candidate_set(v, colors);
        auto cw = abundant_colors(rw.tuples, rw.width - 1, rs_.r[size_t(i)] + 1);
        auto phi = make_phi(cw, subset_tuples_for(v));
        ColorTuple chain;
        for (int a : tree_.ancestors(v)) chain.push_back(colors[size_t(a)]);
        auto c = phi.invert(chain);
        return c ? *c : 0;
    }

    std::string name() const override { return "gdn"; }
    std::vector<long long> params() const override {
        return {tree_.d, tree_.N, rs_.q};
    }

private:
    /// Sorted and topped up to exactly `target` tuples with the
    /// lexicographically least unused ones.
    CandidateSet padded(std::vector<ColorTuple> tuples, int width, u64 target) const {
        if (tuples.size() > target)
            throw internal_error("candidate_set: size exceeds r_i before padding");
        std::sort(tuples.begin(), tuples.end());
        std::set<ColorTuple> present(tuples.begin(), tuples.end());
        u64 rank = 0;
        while (present.size() < target) {
            ColorTuple t = tuple_from_rank(rank++, width, rs_.q);
            present.insert(std::move(t));
        }
        return {width, {present.begin(), present.end()}};
    }

    LayeredTree tree_;
    RSequence rs_;
};

/// Strategy object for the layered clique-tree; q defaults to s_d - 1.
inline Strategy gdn_strategy(int d, int N, int q = -1) {
    auto rule = std::make_shared<LayeredRule>(d, N, q);
    LayeredTree tree(d, N);
    Strategy s(tree.vertex_count(), rule->palette());
    for (int v = 0; v < tree.vertex_count(); ++v) s.set_rule(v, rule);
    return s;
}

/// Branching-factor requirements for the layered strategy: the subset bound
/// max_i C(q^{i+1}, r_i + 1) the construction actually consumes, and the
/// cruder headline bound q^{dq}. Empty fields exceed 64 bits.
struct MinBranching {
    std::optional<u64> subsets_bound;
    std::optional<u64> headline_bound;
};

inline MinBranching min_N(int d, int q = -1) {
    RSequence rs = r_sequence(d, q);
    MinBranching out;
    out.subsets_bound = u64{0};
    for (int i = 0; i < d; ++i) {
        auto M = checked_pow(u64(rs.q), u64(i) + 1);
        auto c = M ? binomial(*M, rs.r[size_t(i)] + 1) : std::nullopt;
        if (!c) {
            out.subsets_bound = std::nullopt;
            break;
        }
        out.subsets_bound = std::max(*out.subsets_bound, *c);
    }
    out.headline_bound = checked_pow(u64(rs.q), u64(d) * u64(rs.q));
    return out;
}

}  // namespace hatg
