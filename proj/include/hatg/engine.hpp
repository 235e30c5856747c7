#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hatg/common.hpp"
#include "hatg/graph.hpp"

namespace hatg {

/// Colors are 0..q-1.
struct Palette {
    int q;
    explicit Palette(int colors) : q(colors) {
        if (q < 1) throw format_error("palette: need at least 1 color");
    }
};

/// One color per vertex.
using HatAssignment = std::vector<int>;

/// A guessing rule evaluated on demand. `visible` lists the colors of the
/// vertex's neighbors in ascending vertex index.
class ComputedRule {
public:
    virtual ~ComputedRule() = default;
    virtual int guess(const Graph& g, int q, int v, std::span<const int> visible) const = 0;
    virtual std::string name() const = 0;
    virtual std::vector<long long> params() const = 0;
};

/// Deterministic per-vertex guessing rules. Each vertex is backed either by
/// an explicit table indexed by the visible context (neighbors in ascending
/// vertex index, last neighbor varying fastest) or by a ComputedRule.
class Strategy {
public:
    Strategy(int n, int q) : n_(n), q_(q), tables_(size_t(n)), rules_(size_t(n)) {
        if (n < 1) throw format_error("strategy: need at least 1 vertex");
        if (q < 1) throw format_error("strategy: need at least 1 color");
    }

    int order() const { return n_; }
    int colors() const { return q_; }

    void set_table(int v, std::vector<int> table) {
        for (int gss : table)
            if (gss < 0 || gss >= q_) throw format_error("strategy: guess outside palette");
        tables_[size_t(v)] = std::move(table);
        rules_[size_t(v)] = nullptr;
        has_table_[size_t(v)] = true;
    }

    void set_rule(int v, std::shared_ptr<const ComputedRule> r) {
        rules_[size_t(v)] = std::move(r);
        tables_[size_t(v)].clear();
        has_table_[size_t(v)] = false;
    }

    bool has_table(int v) const { return has_table_[size_t(v)]; }
    const std::vector<int>& table(int v) const { return tables_[size_t(v)]; }
    const ComputedRule* rule(int v) const { return rules_[size_t(v)].get(); }
    std::shared_ptr<const ComputedRule> rule_ptr(int v) const { return rules_[size_t(v)]; }

    bool fully_tabulated() const {
        for (int v = 0; v < n_; ++v)
            if (!has_table_[size_t(v)]) return false;
        return true;
    }

    int guess(const Graph& g, int v, std::span<const int> visible) const {
        if (has_table_[size_t(v)]) {
            size_t idx = 0;
            for (int c : visible) idx = idx * size_t(q_) + size_t(c);
            return tables_[size_t(v)][idx];
        }
        const ComputedRule* r = rules_[size_t(v)].get();
        if (!r) throw internal_error("strategy: vertex has neither table nor rule");
        return r->guess(g, q_, v, visible);
    }

private:
    int n_, q_;
    std::vector<std::vector<int>> tables_;
    std::vector<std::shared_ptr<const ComputedRule>> rules_;
    std::vector<bool> has_table_ = std::vector<bool>(size_t(n_), false);
};

inline Strategy tabulated_strategy(int n, int q, std::vector<std::vector<int>> tables) {
    Strategy s(n, q);
    if (int(tables.size()) != n) throw format_error("strategy: table count mismatch");
    for (int v = 0; v < n; ++v) s.set_table(v, std::move(tables[size_t(v)]));
    return s;
}

/// Checks that the strategy fits the graph and palette: matching sizes and
/// per-vertex table lengths of exactly q^deg(v).
inline void validate_strategy(const Graph& g, const Palette& pal, const Strategy& s) {
    if (s.order() != g.order()) throw format_error("strategy: vertex count does not match graph");
    if (s.colors() != pal.q) throw format_error("strategy: palette size mismatch");
    for (int v = 0; v < g.order(); ++v) {
        if (!s.has_table(v)) {
            if (!s.rule(v)) throw format_error("strategy: vertex has neither table nor rule");
            continue;
        }
        auto want = checked_pow(u64(pal.q), u64(g.degree(v)));
        if (!want || s.table(v).size() != *want)
            throw format_error("strategy: table length != q^deg(v) for vertex " + std::to_string(v));
    }
}

inline void validate_assignment(const Graph& g, const Palette& pal, const HatAssignment& chi) {
    if (int(chi.size()) != g.order()) throw format_error("assignment: length does not match graph");
    for (int c : chi)
        if (c < 0 || c >= pal.q) throw format_error("assignment: color outside palette");
}

/// Vertices whose guess equals their own hat color, ascending.
inline std::vector<int> evaluate(const Graph& g, const Palette& pal, const Strategy& s,
                                 const HatAssignment& chi) {
    validate_strategy(g, pal, s);
    validate_assignment(g, pal, chi);
    std::vector<int> correct;
    std::vector<int> visible;
    for (int v = 0; v < g.order(); ++v) {
        visible.clear();
        for (int u : g.neighbors(v)) visible.push_back(chi[size_t(u)]);
        if (s.guess(g, v, visible) == chi[size_t(v)]) correct.push_back(v);
    }
    return correct;
}

/// Expands every vertex rule into an explicit table by enumerating the
/// visible contexts (ascending neighbor index, last neighbor fastest).
inline Strategy tabulate(const Graph& g, const Palette& pal, const Strategy& s) {
    validate_strategy(g, pal, s);
    Strategy out(g.order(), pal.q);
    for (int v = 0; v < g.order(); ++v) {
        int deg = g.degree(v);
        auto entries = checked_pow(u64(pal.q), u64(deg));
        if (!entries || *entries > (u64(1) << 28))
            throw budget_error("tabulate: table for vertex " + std::to_string(v) + " too large");
        std::vector<int> table(size_t(*entries), 0);
        std::vector<int> visible(size_t(deg), 0);
        for (u64 idx = 0; idx < *entries; ++idx) {
            u64 rest = idx;
            for (int k = deg - 1; k >= 0; --k) {
                visible[size_t(k)] = int(rest % u64(pal.q));
                rest /= u64(pal.q);
            }
            table[size_t(idx)] = s.guess(g, v, visible);
        }
        out.set_table(v, std::move(table));
    }
    return out;
}

struct VerifyOutcome {
    bool winning;
    std::optional<HatAssignment> counterexample;  // lexicographically least, if any
};

struct VerifyOptions {
    u64 max_colorings = u64(1) << 40;
    int jobs = 1;
};

namespace detail {

/// Incremental evaluator over the odometer enumeration of colorings.
/// Coloring index = sum of chi[v] * q^(n-1-v), so index order is
/// lexicographic order on assignments.
class SweepState {
public:
    SweepState(const Graph& g, int q, const Strategy& s) : g_(g), q_(q), s_(s) {
        int n = g.order();
        chi_.assign(size_t(n), 0);
        guess_.assign(size_t(n), 0);
        is_correct_.assign(size_t(n), false);
        // weight of neighbor k (ascending) inside v's context index
        ctx_.assign(size_t(n), 0);
        ctx_weight_.resize(size_t(n));
        for (int v = 0; v < n; ++v) {
            int deg = g.degree(v);
            ctx_weight_[size_t(v)].resize(size_t(deg));
            u64 w = 1;
            for (int k = deg - 1; k >= 0; --k) {
                ctx_weight_[size_t(v)][size_t(k)] = w;
                w *= u64(q_);
            }
        }
        // for each vertex p, the (neighbor u, weight of p inside u's context)
        influence_.resize(size_t(n));
        for (int u = 0; u < n; ++u) {
            const auto& nb = g.neighbors(u);
            for (size_t k = 0; k < nb.size(); ++k)
                influence_[size_t(nb[k])].emplace_back(u, ctx_weight_[size_t(u)][k]);
        }
    }

    /// Position the sweep at the coloring with the given index.
    void reset(u64 index) {
        int n = g_.order();
        for (int v = n - 1; v >= 0; --v) {
            chi_[size_t(v)] = int(index % u64(q_));
            index /= u64(q_);
        }
        correct_count_ = 0;
        std::vector<int> visible;
        for (int v = 0; v < n; ++v) {
            u64 ctx = 0;
            visible.clear();
            for (int u : g_.neighbors(v)) visible.push_back(chi_[size_t(u)]);
            for (size_t k = 0; k < visible.size(); ++k)
                ctx += u64(visible[size_t(k)]) * ctx_weight_[size_t(v)][k];
            ctx_[size_t(v)] = ctx;
            guess_[size_t(v)] =
                s_.has_table(v) ? s_.table(v)[size_t(ctx)] : s_.guess(g_, v, visible);
            set_correct(v, guess_[size_t(v)] == chi_[size_t(v)]);
        }
    }

    bool nobody_correct() const { return correct_count_ == 0; }
    const std::vector<int>& coloring() const { return chi_; }

    /// Advance to the next coloring (caller guarantees one exists).
    void advance() {
        int p = g_.order() - 1;
        while (chi_[size_t(p)] == q_ - 1) {
            set_digit(p, 0);
            --p;
        }
        set_digit(p, chi_[size_t(p)] + 1);
    }

private:
    void set_correct(int v, bool c) {
        if (c != is_correct_[size_t(v)]) {
            is_correct_[size_t(v)] = c;
            correct_count_ += c ? 1 : -1;
        }
    }

    void set_digit(int p, int val) {
        int old = chi_[size_t(p)];
        chi_[size_t(p)] = val;
        set_correct(p, guess_[size_t(p)] == val);
        for (auto [u, w] : influence_[size_t(p)]) {
            ctx_[size_t(u)] += u64(val) * w - u64(old) * w;
            if (s_.has_table(u)) {
                guess_[size_t(u)] = s_.table(u)[size_t(ctx_[size_t(u)])];
            } else {
                scratch_.clear();
                for (int x : g_.neighbors(u)) scratch_.push_back(chi_[size_t(x)]);
                guess_[size_t(u)] = s_.guess(g_, u, scratch_);
            }
            set_correct(u, guess_[size_t(u)] == chi_[size_t(u)]);
        }
    }

    const Graph& g_;
    int q_;
    const Strategy& s_;
    std::vector<int> chi_, guess_;
    std::vector<bool> is_correct_;
    int correct_count_ = 0;
    std::vector<u64> ctx_;
    std::vector<std::vector<u64>> ctx_weight_;
    std::vector<std::vector<std::pair<int, u64>>> influence_;
    std::vector<int> scratch_;
};

/// First index in [begin, end) whose coloring defeats every guesser.
inline std::optional<u64> first_fooling_index(const Graph& g, int q, const Strategy& s,
                                              u64 begin, u64 end) {
    SweepState sweep(g, q, s);
    sweep.reset(begin);
    for (u64 idx = begin; idx < end; ++idx) {
        if (sweep.nobody_correct()) return idx;
        if (idx + 1 < end) sweep.advance();
    }
    return std::nullopt;
}

}  // namespace detail

/// Exhaustive check over all q^n hat assignments. Winning means every
/// assignment has at least one correct guesser; otherwise the
/// lexicographically least fooling assignment is returned. With jobs > 1 the
/// index space is split into contiguous ranges and the least hit wins, so the
/// outcome is identical to the single-threaded sweep.
inline VerifyOutcome verify_winning(const Graph& g, const Palette& pal, const Strategy& s,
                                    const VerifyOptions& opt = {}) {
    validate_strategy(g, pal, s);
    auto total128 = checked_pow128(u128(pal.q), u64(g.order()));
    if (!total128 || *total128 > u128(opt.max_colorings))
        throw budget_error("verify_winning: q^n = " +
                           (total128 ? to_string(*total128) : std::string("2^128 or more")) +
                           " colorings exceeds budget " + std::to_string(opt.max_colorings));
    u64 total = u64(*total128);

    int jobs = std::max(1, opt.jobs);
    if (u64(jobs) > total) jobs = int(total);
    std::optional<u64> found;
    if (jobs == 1) {
        found = detail::first_fooling_index(g, pal.q, s, 0, total);
    } else {
        std::vector<std::optional<u64>> hits((size_t(jobs)));
        std::vector<std::thread> workers;
        u64 chunk = total / u64(jobs), extra = total % u64(jobs);
        u64 begin = 0;
        for (int j = 0; j < jobs; ++j) {
            u64 len = chunk + (u64(j) < extra ? 1 : 0);
            u64 end = begin + len;
            workers.emplace_back([&, j, begin, end] {
                hits[size_t(j)] = detail::first_fooling_index(g, pal.q, s, begin, end);
            });
            begin = end;
        }
        for (auto& t : workers) t.join();
        for (const auto& h : hits)
            if (h && (!found || *h < *found)) found = h;
    }

    if (!found) return {true, std::nullopt};
    HatAssignment chi(size_t(g.order()));
    u64 idx = *found;
    for (int v = g.order() - 1; v >= 0; --v) {
        chi[size_t(v)] = int(idx % u64(pal.q));
        idx /= u64(pal.q);
    }
    return {false, chi};
}

}  // namespace hatg
