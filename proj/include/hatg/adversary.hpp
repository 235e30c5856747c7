#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "hatg/common.hpp"
#include "hatg/engine.hpp"
#include "hatg/graph.hpp"

namespace hatg {

/// Sylvester's sequence: s_0 = 2, s_k = s_{k-1}^2 - s_{k-1} + 1.
/// Exact in 64 bits up to k = 6; larger k throws.
inline u64 sylvester(int k) {
    if (k < 0) throw precondition_error("sylvester: negative index");
    u64 s = 2;
    for (int i = 1; i <= k; ++i) {
        auto sq = checked_mul(s, s);
        if (!sq) throw overflow_error("sylvester: value exceeds 64 bits at k=" + std::to_string(i));
        s = *sq - s + 1;
    }
    return s;
}

/// Per-vertex adversary budgets: t_v = 1 + product of t_u over the
/// left-neighbors u of v (empty product = 1). Every budget is >= 2.
struct BudgetVector {
    std::vector<u128> t;  // indexed by vertex

    u128 max() const {
        u128 m = 0;
        for (u128 x : t) m = std::max(m, x);
        return m;
    }
};

inline BudgetVector budgets(const Graph& g, const Ordering& ord) {
    validate_ordering(g, ord);
    auto pos = ord.positions();
    BudgetVector b;
    b.t.assign(size_t(g.order()), 0);
    for (int i = 0; i < g.order(); ++i) {
        int v = ord.perm[size_t(i)];
        u128 prod = 1;
        for (int u : g.neighbors(v)) {
            if (pos[size_t(u)] >= i) continue;
            auto m = checked_mul128(prod, b.t[size_t(u)]);
            if (!m) throw overflow_error("budgets: overflow at vertex " + std::to_string(v));
            prod = *m;
        }
        auto s = checked_add128(prod, 1);
        if (!s) throw overflow_error("budgets: overflow at vertex " + std::to_string(v));
        b.t[size_t(v)] = *s;
    }
    return b;
}

/// a_0 = 2, a_k = a_{k-1}^d + 1; a_D bounds every budget in a d-degenerate
/// ordering of depth D. nullopt when the value exceeds 128 bits.
inline std::optional<u128> depth_budget_bound(int d, int D) {
    if (d < 0 || D < 0) throw precondition_error("depth_budget_bound: negative argument");
    u128 a = 2;
    for (int k = 1; k <= D; ++k) {
        auto p = checked_pow128(a, u64(d));
        if (!p) return std::nullopt;
        auto s = checked_add128(*p, 1);
        if (!s) return std::nullopt;
        a = *s;
    }
    return a;
}

/// True when depth_budget_bound(d, D) <= 2^(d^(D+1)). The right side may
/// exceed any machine word; values representable in 128 bits compare against
/// it trivially once the exponent reaches 128.
inline bool depth_bound_within_power(int d, int D) {
    auto a = depth_budget_bound(d, D);
    if (!a) return false;  // not representable; cannot certify
    auto expo = checked_pow(u64(d), u64(D) + 1);
    if (!expo) return true;
    if (*expo >= 128) return true;
    return *a <= (u128(1) << *expo);
}

struct FoolOptions {
    u64 max_enumeration = 10'000'000;  // cap on the budget box of one vertex
};

/// Builds a hat assignment on which every vertex guesses wrong, assuming the
/// palette has at least max budget colors. Vertices are processed right to
/// left; for each one the adversary enumerates every way the not-yet-fixed
/// left-neighbors could be colored inside their budgets, collects the guesses
/// the vertex could make, and gives it the least color in [0, t_v) that
/// dodges all of them. The guess set has at most t_v - 1 elements, so a
/// dodging color always exists.
inline HatAssignment fool(const Graph& g, const Ordering& ord, const Palette& pal,
                          const Strategy& s, const FoolOptions& opt = {}) {
    validate_strategy(g, pal, s);
    BudgetVector b = budgets(g, ord);
    if (u128(pal.q) < b.max())
        throw precondition_error("fool: palette must have at least max-budget (" +
                                 to_string(b.max()) + ") colors");
    auto pos = ord.positions();
    int n = g.order();
    HatAssignment chi(size_t(n), -1);

    std::vector<int> visible, left_idx, left_cap, counter;
    std::vector<bool> could_guess;
    for (int i = n - 1; i >= 0; --i) {
        int v = ord.perm[size_t(i)];
        const auto& nb = g.neighbors(v);
        visible.assign(nb.size(), 0);
        left_idx.clear();
        left_cap.clear();
        u64 box = 1;
        for (size_t k = 0; k < nb.size(); ++k) {
            if (pos[size_t(nb[k])] < i) {
                left_idx.push_back(int(k));
                left_cap.push_back(int(u64(b.t[size_t(nb[k])])));
                box *= u64(left_cap.back());
                if (box > opt.max_enumeration)
                    throw budget_error("fool: enumeration for vertex " + std::to_string(v) +
                                       " exceeds budget " + std::to_string(opt.max_enumeration));
            } else {
                visible[k] = chi[size_t(nb[k])];
            }
        }
        int tv = int(u64(b.t[size_t(v)]));
        could_guess.assign(size_t(pal.q), false);
        counter.assign(left_idx.size(), 0);
        while (true) {
            for (size_t k = 0; k < left_idx.size(); ++k)
                visible[size_t(left_idx[k])] = counter[k];
            could_guess[size_t(s.guess(g, v, visible))] = true;
            size_t k = 0;
            while (k < counter.size() && counter[k] + 1 == left_cap[k]) counter[k++] = 0;
            if (k == counter.size()) break;
            ++counter[k];
        }
        int pick = -1;
        for (int c = 0; c < tv; ++c)
            if (!could_guess[size_t(c)]) {
                pick = c;
                break;
            }
        if (pick < 0) throw internal_error("fool: no dodging color, budget recursion violated");
        chi[size_t(v)] = pick;
    }
    return chi;
}

/// Named numeric upper-bound witnesses for one graph/ordering. Fields that
/// overflow their exact computation are left empty.
struct BoundReport {
    int degeneracy = 0;   // max left-degree of the ordering used
    int depth = 0;        // depth of the ordering used
    int max_degree = 0;
    u64 lll_bound = 0;    // ceil(e * max_degree)
    std::optional<u128> budget_bound;   // max_v t_v; HG < budget_bound
    std::optional<u128> depth_bound;    // a_depth for d = degeneracy
    std::optional<u64> sylvester_bound; // s_d for layered family instances
};

/// Computes all bounds for the given ordering (default: canonical_ordering).
inline BoundReport bound_report(const Graph& g, const std::optional<Ordering>& ordering = {}) {
    Ordering ord = ordering ? *ordering : canonical_ordering(g);
    validate_ordering(g, ord);
    BoundReport r;
    r.degeneracy = ordering_max_left_degree(g, ord);
    r.depth = ordering_depth(g, ord);
    r.max_degree = g.max_degree();
    r.lll_bound = u64(std::ceil(std::numbers::e_v<double> * double(r.max_degree)));
    try {
        r.budget_bound = budgets(g, ord).max();
    } catch (const overflow_error&) {
        r.budget_bound = std::nullopt;
    }
    r.depth_bound = depth_budget_bound(r.degeneracy, r.depth);
    if (g.family().kind == FamilyTag::Kind::layered) {
        try {
            r.sylvester_bound = sylvester(g.family().a);
        } catch (const overflow_error&) {
            r.sylvester_bound = std::nullopt;
        }
    }
    return r;
}

}  // namespace hatg
