#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "hatg/common.hpp"
#include "hatg/engine.hpp"
#include "hatg/graph.hpp"

namespace hatg {

enum class SynthesisStatus { winning_strategy_found, proven_impossible, budget_exceeded };

struct SynthesisStats {
    u64 nodes = 0;  // decisions plus conflicts explored
    double seconds = 0;
};

struct SynthesisResult {
    SynthesisStatus status;
    std::optional<Strategy> strategy;  // present iff a winning strategy was found
    SynthesisStats stats;
};

struct SynthesisOptions {
    u64 max_nodes = 100'000'000;
    u64 max_variables = 10'000'000;   // guess-table cells across all vertices
    u64 max_colorings = u64(1) << 22; // cover constraints
};

namespace detail {

/// Decides "is there a winning strategy for (g, q)" by exhausting the
/// defining constraint system: one decision variable per (vertex, visible
/// context) cell with domain [q], and per hat assignment the constraint that
/// some vertex's cell carries that assignment's color at that vertex.
///
/// Cells are split into booleans cell=c; each assignment contributes the
/// cover clause OR_v (cell_v(assignment) = color_v(assignment)) and each
/// cell carries pairwise at-most-one clauses, so models are exactly the
/// winning strategies (cells never forced true anywhere default to color 0).
/// The clause engine is a self-contained conflict-learning search: watched
/// literals, first-UIP learning with backjumping, activity-guided decisions
/// and deterministic geometric restarts. Tie-breaking is by lowest index
/// everywhere, so runs are reproducible. Impossibility is reported only when
/// the space is exhausted (a conflict at decision level zero).
class CoverSolver {
public:
    CoverSolver(const Graph& g, int q, const SynthesisOptions& opt)
        : g_(g), q_(q), opt_(opt), n_(g.order()) {
        auto total = checked_pow(u64(q_), u64(n_));
        if (!total || *total > opt_.max_colorings)
            throw budget_error("synthesis: q^n exceeds the coloring budget " +
                               std::to_string(opt_.max_colorings));
        colorings_ = *total;

        cell_offset_.assign(size_t(n_) + 1, 0);
        for (int v = 0; v < n_; ++v) {
            auto tbl = checked_pow(u64(q_), u64(g_.degree(v)));
            auto off = tbl ? checked_add(cell_offset_[size_t(v)], *tbl) : std::nullopt;
            if (!off || *off > opt_.max_variables)
                throw budget_error("synthesis: table-cell count exceeds budget " +
                                   std::to_string(opt_.max_variables));
            cell_offset_[size_t(v) + 1] = *off;
        }
        cell_count_ = cell_offset_[size_t(n_)];

        pos_weight_.assign(size_t(n_), 0);
        u64 w = 1;
        for (int v = n_ - 1; v >= 0; --v) {
            pos_weight_[size_t(v)] = w;
            w *= u64(q_);
        }
    }

    SynthesisResult run() {
        auto t0 = std::chrono::steady_clock::now();
        SynthesisResult res{SynthesisStatus::proven_impossible, std::nullopt, {}};
        int verdict;
        if (q_ > n_) {
            // every cell covers at most q^(n-deg-1) assignments, q^(n-1) per
            // vertex in total, so n q^(n-1) < q^n rules the game out at once
            verdict = -1;
        } else {
            build();
            verdict = solve();
        }
        res.stats.nodes = nodes_;
        res.stats.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (verdict == 0) {
            res.status = SynthesisStatus::budget_exceeded;
        } else if (verdict > 0) {
            res.status = SynthesisStatus::winning_strategy_found;
            res.strategy = extract();
        }
        return res;
    }

private:
    // --- literals ------------------------------------------------------
    // boolean variable per (cell, color); literal = 2*bool_var + negated
    using Lit = u32;
    static constexpr u32 kNoReason = ~u32(0);

    u64 bool_var(u64 cell, int c) const { return cell * u64(q_) + u64(c); }
    static Lit pos(u64 bv) { return Lit(bv << 1); }
    static Lit neg(u64 bv) { return Lit(bv << 1 | 1); }
    static u64 lit_var(Lit l) { return l >> 1; }
    static bool lit_negated(Lit l) { return l & 1; }

    int lit_value(Lit l) const {  // -1 unassigned, 0 false, 1 true
        int v = value_[size_t(lit_var(l))];
        if (v < 0) return -1;
        return v ^ int(lit_negated(l));
    }

    int digit(u64 coloring, int v) const {
        return int((coloring / pos_weight_[size_t(v)]) % u64(q_));
    }

    u64 cell_of(int v, u64 coloring) const {
        u64 ctx = 0;
        for (int u : g_.neighbors(v)) ctx = ctx * u64(q_) + u64(digit(coloring, u));
        return cell_offset_[size_t(v)] + ctx;
    }

    // --- clause database -------------------------------------------------
    void build() {
        u64 bools = cell_count_ * u64(q_);
        value_.assign(size_t(bools), int8_t(-1));
        level_.assign(size_t(bools), 0);
        reason_.assign(size_t(bools), kNoReason);
        activity_.assign(size_t(bools), 0.0);
        saved_phase_.assign(size_t(bools), 1);
        seen_.assign(size_t(bools), 0);
        watches_.assign(size_t(bools) * 2, {});

        std::vector<Lit> lits;
        for (u64 x = 0; x < colorings_; ++x) {
            lits.clear();
            for (int v = 0; v < n_; ++v)
                lits.push_back(pos(bool_var(cell_of(v, x), digit(x, v))));
            add_clause(lits);
        }
        for (u64 cell = 0; cell < cell_count_; ++cell)
            for (int c1 = 0; c1 < q_; ++c1)
                for (int c2 = c1 + 1; c2 < q_; ++c2) {
                    lits = {neg(bool_var(cell, c1)), neg(bool_var(cell, c2))};
                    add_clause(lits);
                }
    }

    void add_clause(const std::vector<Lit>& lits) {
        if (lits.size() == 1) {
            if (lit_value(lits[0]) == 0) throw internal_error("synthesis: unit clash at setup");
            if (lit_value(lits[0]) < 0) enqueue(lits[0], kNoReason);
            return;
        }
        u32 id = u32(clauses_.size());
        clauses_.push_back(lits);
        watches_[lits[0]].push_back(id);
        watches_[lits[1]].push_back(id);
    }

    u32 learn_clause(std::vector<Lit> lits) {
        u32 id = u32(clauses_.size());
        clauses_.push_back(std::move(lits));
        const auto& cl = clauses_.back();
        if (cl.size() >= 2) {
            watches_[cl[0]].push_back(id);
            watches_[cl[1]].push_back(id);
        }
        return id;
    }

    // --- assignment trail -------------------------------------------------
    void enqueue(Lit l, u32 reason) {
        u64 bv = lit_var(l);
        value_[size_t(bv)] = int8_t(lit_negated(l) ? 0 : 1);
        level_[size_t(bv)] = u32(levels_.size());
        reason_[size_t(bv)] = reason;
        saved_phase_[size_t(bv)] = int8_t(lit_negated(l) ? 0 : 1);
        trail_.push_back(l);
    }

    /// Returns the conflicting clause id, or kNoReason.
    u32 propagate() {
        while (qhead_ < trail_.size()) {
            Lit p = trail_[qhead_++];
            Lit fp = p ^ 1;  // now false
            auto& ws = watches_[fp];
            size_t i = 0, keep = 0;
            u32 confl = kNoReason;
            while (i < ws.size()) {
                u32 cid = ws[i++];
                auto& cl = clauses_[cid];
                if (cl[0] == fp) std::swap(cl[0], cl[1]);
                if (lit_value(cl[0]) == 1) {  // satisfied
                    ws[keep++] = cid;
                    continue;
                }
                bool moved = false;
                for (size_t k = 2; k < cl.size(); ++k) {
                    if (lit_value(cl[k]) != 0) {
                        std::swap(cl[1], cl[k]);
                        watches_[cl[1]].push_back(cid);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[keep++] = cid;  // stays watched here
                if (lit_value(cl[0]) == 0) {
                    confl = cid;  // all literals false
                    while (i < ws.size()) ws[keep++] = ws[i++];
                    break;
                }
                enqueue(cl[0], cid);
            }
            ws.resize(keep);
            if (confl != kNoReason) {
                qhead_ = trail_.size();
                return confl;
            }
        }
        return kNoReason;
    }

    int current_level() const { return int(levels_.size()); }

    void new_level() { levels_.push_back(u32(trail_.size())); }

    void backjump(int level) {
        if (current_level() <= level) return;
        size_t floor = levels_[size_t(level)];
        for (size_t i = trail_.size(); i-- > floor;) {
            u64 bv = lit_var(trail_[i]);
            value_[size_t(bv)] = -1;
            reason_[size_t(bv)] = kNoReason;
            heap_.push({activity_[size_t(bv)], bv});
        }
        trail_.resize(floor);
        levels_.resize(size_t(level));
        qhead_ = trail_.size();
    }

    // --- conflict analysis (first UIP) ------------------------------------
    void bump(u64 bv) {
        activity_[size_t(bv)] += act_inc_;
        if (activity_[size_t(bv)] > 1e100) {
            for (auto& a : activity_) a *= 1e-100;
            act_inc_ *= 1e-100;
        }
        heap_.push({activity_[size_t(bv)], bv});
    }

    /// Produces the learned clause (first literal is the asserting one) and
    /// the backjump level.
    int analyze(u32 confl, std::vector<Lit>& learnt) {
        learnt.assign(1, 0);
        int counter = 0;
        size_t index = trail_.size();
        Lit p = 0;
        bool first = true;
        std::vector<u64> touched;
        while (true) {
            const auto& cl = clauses_[confl];
            for (size_t k = first ? 0 : 1; k < cl.size(); ++k) {
                u64 bv = lit_var(cl[k]);
                if (seen_[size_t(bv)] || level_[size_t(bv)] == 0) continue;
                seen_[size_t(bv)] = 1;
                touched.push_back(bv);
                bump(bv);
                if (int(level_[size_t(bv)]) == current_level())
                    ++counter;
                else
                    learnt.push_back(cl[k]);
            }
            while (!seen_[size_t(lit_var(trail_[index - 1]))]) --index;
            p = trail_[--index];
            seen_[size_t(lit_var(p))] = 0;
            --counter;
            first = false;
            if (counter <= 0) break;
            confl = reason_[size_t(lit_var(p))];
        }
        learnt[0] = p ^ 1;

        int bj = 0;
        for (size_t k = 1; k < learnt.size(); ++k)
            bj = std::max(bj, int(level_[size_t(lit_var(learnt[k]))]));
        // move a literal of the backjump level into the second watch slot
        if (learnt.size() >= 2) {
            size_t best = 1;
            for (size_t k = 2; k < learnt.size(); ++k)
                if (level_[size_t(lit_var(learnt[k]))] > level_[size_t(lit_var(learnt[best]))])
                    best = k;
            std::swap(learnt[1], learnt[best]);
        }
        for (u64 bv : touched) seen_[size_t(bv)] = 0;
        act_inc_ *= 1.05;
        return bj;
    }

    // --- decisions ---------------------------------------------------------
    struct HeapEntry {
        double act;
        u64 bv;
        bool operator<(const HeapEntry& o) const {
            if (act != o.act) return act < o.act;
            return bv > o.bv;  // prefer the lowest index
        }
    };

    bool decide() {
        while (!heap_.empty()) {
            auto [act, bv] = heap_.top();
            heap_.pop();
            if (value_[size_t(bv)] >= 0 || act != activity_[size_t(bv)]) continue;
            new_level();
            enqueue(saved_phase_[size_t(bv)] ? pos(bv) : neg(bv), kNoReason);
            return true;
        }
        for (u64 bv = 0; bv < value_.size(); ++bv)  // heap may be stale
            if (value_[size_t(bv)] < 0) {
                new_level();
                enqueue(saved_phase_[size_t(bv)] ? pos(bv) : neg(bv), kNoReason);
                return true;
            }
        return false;  // full model
    }

    // --- main loop ----------------------------------------------------------
    /// 1 = model found, -1 = unsatisfiable, 0 = budget.
    int solve() {
        for (u64 bv = 0; bv < value_.size(); ++bv) heap_.push({0.0, bv});
        u64 conflicts_since_restart = 0, restart_limit = 256;
        std::vector<Lit> learnt;
        while (true) {
            u32 confl = propagate();
            if (confl != kNoReason) {
                ++nodes_;
                ++conflicts_since_restart;
                if (current_level() == 0) return -1;
                int bj = analyze(confl, learnt);
                backjump(bj);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], kNoReason);
                } else {
                    u32 cid = learn_clause(learnt);
                    enqueue(learnt[0], cid);
                }
                if (nodes_ >= opt_.max_nodes) return 0;
            } else {
                if (conflicts_since_restart >= restart_limit) {
                    conflicts_since_restart = 0;
                    restart_limit += restart_limit / 2;
                    backjump(0);
                    continue;
                }
                ++nodes_;
                if (nodes_ >= opt_.max_nodes) return 0;
                if (!decide()) return 1;
            }
        }
    }

    Strategy extract() const {
        Strategy s(n_, q_);
        for (int v = 0; v < n_; ++v) {
            std::vector<int> table(size_t(cell_offset_[size_t(v) + 1] - cell_offset_[size_t(v)]),
                                   0);
            for (u64 i = 0; i < table.size(); ++i) {
                u64 cell = cell_offset_[size_t(v)] + i;
                for (int c = 0; c < q_; ++c)
                    if (value_[size_t(bool_var(cell, c))] == 1) {
                        table[size_t(i)] = c;  // at most one color is true
                        break;
                    }
            }
            s.set_table(v, std::move(table));
        }
        return s;
    }

    const Graph& g_;
    int q_;
    SynthesisOptions opt_;
    int n_;
    u64 colorings_ = 0, cell_count_ = 0;
    std::vector<u64> cell_offset_, pos_weight_;

    std::vector<std::vector<Lit>> clauses_;
    std::vector<std::vector<u32>> watches_;  // indexed by literal
    std::vector<int8_t> value_, saved_phase_;
    std::vector<u32> level_, reason_;
    std::vector<char> seen_;
    std::vector<double> activity_;
    std::priority_queue<HeapEntry> heap_;
    std::vector<Lit> trail_;
    std::vector<u32> levels_;  // trail size at the start of each level
    size_t qhead_ = 0;
    double act_inc_ = 1.0;
    u64 nodes_ = 0;
};

}  // namespace detail

/// Decides whether the players have a winning strategy on g with q colors.
/// Sound and complete within the budgets; found strategies are re-checked
/// with verify_winning before being returned.
inline SynthesisResult exists_winning_strategy(const Graph& g, int q,
                                               const SynthesisOptions& opt = {}) {
    if (q < 1) throw precondition_error("synthesis: need q >= 1");
    detail::CoverSolver solver(g, q, opt);
    SynthesisResult res = solver.run();
    if (res.status == SynthesisStatus::winning_strategy_found) {
        VerifyOptions vo;
        vo.max_colorings = std::max<u64>(opt.max_colorings, u64(1) << 26);
        auto check = verify_winning(g, Palette(q), *res.strategy, vo);
        if (!check.winning) throw internal_error("synthesis: extracted strategy fails recheck");
    }
    return res;
}

struct HgOptions : SynthesisOptions {
    /// Stop scanning upward at the first impossible q. Winnability looks
    /// monotone in q but is treated as a heuristic, not a theorem; the
    /// default decides every q independently.
    bool monotonic_shortcut = false;
};

struct HgResult {
    int hg = 0;
    u64 total_nodes = 0;
    std::vector<std::pair<int, SynthesisStatus>> per_q;
};

/// Largest q <= q_max for which a winning strategy exists. Throws
/// budget_error if any required decision exceeds its budget.
inline HgResult hat_guessing_number(const Graph& g, int q_max, const HgOptions& opt = {}) {
    if (q_max < 1) throw precondition_error("hat_guessing_number: need q_max >= 1");
    HgResult out;
    for (int q = 1; q <= q_max; ++q) {
        SynthesisResult r = exists_winning_strategy(g, q, opt);
        out.total_nodes += r.stats.nodes;
        out.per_q.emplace_back(q, r.status);
        if (r.status == SynthesisStatus::budget_exceeded)
            throw budget_error("hat_guessing_number: budget exceeded at q = " +
                               std::to_string(q) + " after " +
                               std::to_string(out.total_nodes) + " nodes");
        if (r.status == SynthesisStatus::winning_strategy_found)
            out.hg = q;
        else if (opt.monotonic_shortcut)
            break;
    }
    return out;
}

}  // namespace hatg
