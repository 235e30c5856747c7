#pragma once

#include <algorithm>
#include <cassert>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include "hatg/common.hpp"
#include "hatg/engine.hpp"
#include "hatg/graph.hpp"

namespace hatg {

/// Finite set of distinct points in N^d.
struct PointSet {
    int d;
    std::vector<std::vector<int>> points;

    PointSet(int dim, std::vector<std::vector<int>> pts) : d(dim), points(std::move(pts)) {
        if (d < 1) throw format_error("point set: dimension must be >= 1");
        for (const auto& p : points) {
            if (int(p.size()) != d) throw format_error("point set: wrong point dimension");
            for (int c : p)
                if (c < 0) throw format_error("point set: negative coordinate");
        }
        auto sorted = points;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw format_error("point set: duplicate point");
    }

    size_t size() const { return points.size(); }
};

/// Assignment of each point to an axis in 1..d. Valid when no two points
/// assigned the same axis lie on a common line parallel to that axis.
struct Cover {
    std::vector<int> axis;  // per point, 1-based
};

/// The sole arbiter of cover validity, independent of how a cover was made.
inline bool cover_valid(const PointSet& ps, const Cover& cover) {
    if (cover.axis.size() != ps.size()) return false;
    std::set<std::vector<int>> used_lines;  // axis followed by the fixed coordinates
    for (size_t i = 0; i < ps.size(); ++i) {
        int a = cover.axis[i];
        if (a < 1 || a > ps.d) return false;
        std::vector<int> key{a};
        for (int j = 0; j < ps.d; ++j)
            if (j != a - 1) key.push_back(ps.points[i][size_t(j)]);
        if (!used_lines.insert(key).second) return false;
    }
    return true;
}

/// Relabels coordinate values by their rank within each axis. Only line
/// incidence matters for coverability, so this changes nothing but the range.
inline PointSet compress(const PointSet& ps) {
    std::vector<std::vector<int>> out(ps.size(), std::vector<int>(size_t(ps.d), 0));
    for (int j = 0; j < ps.d; ++j) {
        std::vector<int> vals;
        for (const auto& p : ps.points) vals.push_back(p[size_t(j)]);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (size_t i = 0; i < ps.size(); ++i)
            out[i][size_t(j)] = int(std::lower_bound(vals.begin(), vals.end(),
                                                     ps.points[i][size_t(j)]) -
                                    vals.begin());
    }
    return PointSet(ps.d, std::move(out));
}

namespace detail {

/// Hopcroft-Karp maximum bipartite matching.
class BipartiteMatcher {
public:
    BipartiteMatcher(int left, int right) : adj_(size_t(left)), nl_(left), nr_(right) {}

    void add_edge(int l, int r) { adj_[size_t(l)].push_back(r); }

    int max_matching() {
        match_l_.assign(size_t(nl_), -1);
        match_r_.assign(size_t(nr_), -1);
        int matched = 0;
        while (bfs()) {
            for (int l = 0; l < nl_; ++l)
                if (match_l_[size_t(l)] < 0 && dfs(l)) ++matched;
        }
        return matched;
    }

    int matched_right(int l) const { return match_l_[size_t(l)]; }

private:
    static constexpr int kInf = std::numeric_limits<int>::max();

    bool bfs() {
        std::vector<int> queue;
        dist_.assign(size_t(nl_), kInf);
        for (int l = 0; l < nl_; ++l)
            if (match_l_[size_t(l)] < 0) {
                dist_[size_t(l)] = 0;
                queue.push_back(l);
            }
        bool reachable = false;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int l = queue[qi];
            for (int r : adj_[size_t(l)]) {
                int l2 = match_r_[size_t(r)];
                if (l2 < 0) {
                    reachable = true;
                } else if (dist_[size_t(l2)] == kInf) {
                    dist_[size_t(l2)] = dist_[size_t(l)] + 1;
                    queue.push_back(l2);
                }
            }
        }
        return reachable;
    }

    bool dfs(int l) {
        for (int r : adj_[size_t(l)]) {
            int l2 = match_r_[size_t(r)];
            if (l2 < 0 || (dist_[size_t(l2)] == dist_[size_t(l)] + 1 && dfs(l2))) {
                match_l_[size_t(l)] = r;
                match_r_[size_t(r)] = l;
                return true;
            }
        }
        dist_[size_t(l)] = kInf;
        return false;
    }

    std::vector<std::vector<int>> adj_;
    std::vector<int> match_l_, match_r_, dist_;
    int nl_, nr_;
};

}  // namespace detail

/// Decides coverability as a capacity-1 assignment problem: one slot per
/// (axis, line) pair, one node per point, each point eligible for the d lines
/// through it. The set is coverable iff the points admit a perfect matching
/// into line slots; a maximum matching below |S| is a proof of
/// non-coverability, in which case nothing is returned.
inline std::optional<Cover> is_coverable(const PointSet& ps, u64 max_points = 10'000) {
    if (ps.size() > max_points)
        throw budget_error("is_coverable: point count exceeds budget " +
                           std::to_string(max_points));
    std::map<std::vector<int>, int> slot_ids;
    std::vector<int> slot_axis;
    std::vector<std::vector<int>> point_slots(ps.size());
    for (size_t i = 0; i < ps.size(); ++i) {
        for (int a = 1; a <= ps.d; ++a) {
            std::vector<int> key{a};
            for (int j = 0; j < ps.d; ++j)
                if (j != a - 1) key.push_back(ps.points[i][size_t(j)]);
            auto it = slot_ids.find(key);
            if (it == slot_ids.end()) {
                it = slot_ids.emplace(key, int(slot_ids.size())).first;
                slot_axis.push_back(a);
            }
            point_slots[i].push_back(it->second);
        }
    }
    detail::BipartiteMatcher matcher(int(ps.size()), int(slot_ids.size()));
    for (size_t i = 0; i < ps.size(); ++i)
        for (int slot : point_slots[i]) matcher.add_edge(int(i), slot);
    if (matcher.max_matching() != int(ps.size())) return std::nullopt;
    Cover c;
    c.axis.resize(ps.size());
    for (size_t i = 0; i < ps.size(); ++i)
        c.axis[i] = slot_axis[size_t(matcher.matched_right(int(i)))];
    assert(cover_valid(ps, c));
    return c;
}

/// lb(1) = 1, lb(d) = (d+1) lb(d-1) + d, which telescopes to (d+1)! - 1.
/// Every point set of at most this size is coverable, and cover_recursive
/// produces a certificate under that size bound.
inline u64 coverable_lower_bound(int d) {
    if (d < 1) throw precondition_error("coverable_lower_bound: d must be >= 1");
    u64 lb = 1;
    for (int k = 2; k <= d; ++k) {
        auto m = checked_mul(lb, u64(k) + 1);
        auto s = m ? checked_add(*m, u64(k)) : std::nullopt;
        if (!s) throw overflow_error("coverable_lower_bound: overflow");
        lb = *s;
    }
    return lb;
}

namespace detail {

/// One level of the recursive cover. Points live in `dim` dimensions; the
/// returned axes are 1-based within this space.
///
/// A coordinate value is abundant on axis i when at least lb(dim-1) + 1
/// points share it, so at most `dim` values are abundant per axis. Points
/// whose first non-abundant coordinate is axis i are grouped by that
/// coordinate's value into slices of at most lb(dim-1) points, and each
/// slice is covered recursively inside its hyperplane. Points abundant in
/// every coordinate are rank-compressed into a [dim]^dim grid and assigned
/// the axis matching their coordinate-sum residue: along any grid line the
/// sums are pairwise distinct mod dim, so no line is picked twice.
inline std::vector<int> cover_points(const std::vector<std::vector<int>>& pts, int dim) {
    std::vector<int> axis(pts.size(), 0);
    if (pts.empty()) return axis;
    if (dim == 1) {
        if (pts.size() > 1)
            throw internal_error("cover_recursive: several points on one line");
        axis[0] = 1;
        return axis;
    }

    u64 threshold = coverable_lower_bound(dim - 1) + 1;
    std::vector<std::set<int>> abundant((size_t(dim)));
    for (int j = 0; j < dim; ++j) {
        std::map<int, u64> freq;
        for (const auto& p : pts) ++freq[p[size_t(j)]];
        for (auto [val, cnt] : freq)
            if (cnt >= threshold) abundant[size_t(j)].insert(val);
        assert(abundant[size_t(j)].size() <= size_t(dim));  // pigeonhole
    }

    std::map<std::pair<int, int>, std::vector<int>> slices;  // (axis j, value) -> point ids
    std::vector<int> grid_points;                            // abundant in every coordinate
    for (size_t i = 0; i < pts.size(); ++i) {
        int first_sparse = -1;
        for (int j = 0; j < dim; ++j)
            if (!abundant[size_t(j)].count(pts[i][size_t(j)])) {
                first_sparse = j;
                break;
            }
        if (first_sparse < 0)
            grid_points.push_back(int(i));
        else
            slices[{first_sparse, pts[i][size_t(first_sparse)]}].push_back(int(i));
    }

    for (const auto& [key, ids] : slices) {
        int j = key.first;
        assert(u64(ids.size()) < threshold);
        std::vector<std::vector<int>> sub;
        for (int id : ids) {
            std::vector<int> p = pts[size_t(id)];
            p.erase(p.begin() + j);
            sub.push_back(std::move(p));
        }
        std::vector<int> sub_axis = cover_points(sub, dim - 1);
        for (size_t k = 0; k < ids.size(); ++k) {
            int a = sub_axis[k];
            axis[size_t(ids[k])] = a <= j ? a : a + 1;  // re-insert the dropped axis
        }
    }

    for (int id : grid_points) {
        long long sum = 0;
        for (int j = 0; j < dim; ++j) {
            const auto& ab = abundant[size_t(j)];
            int rank = int(std::distance(ab.begin(), ab.find(pts[size_t(id)][size_t(j)]))) + 1;
            sum += rank;
        }
        axis[size_t(id)] = int(sum % dim) + 1;  // residue r picks axis r+1
    }

#ifndef NDEBUG
    // the line families consumed by the slices and by the grid are disjoint
    std::vector<std::set<std::vector<int>>> families;
    for (const auto& [key, ids] : slices) {
        std::set<std::vector<int>> lines;
        for (int id : ids)
            for (int j = 0; j < dim; ++j) {
                if (j == key.first) continue;
                std::vector<int> line{j};
                for (int x = 0; x < dim; ++x)
                    if (x != j) line.push_back(pts[size_t(id)][size_t(x)]);
                lines.insert(std::move(line));
            }
        families.push_back(std::move(lines));
    }
    {
        std::set<std::vector<int>> lines;
        for (int id : grid_points)
            for (int j = 0; j < dim; ++j) {
                std::vector<int> line{j};
                for (int x = 0; x < dim; ++x)
                    if (x != j) line.push_back(pts[size_t(id)][size_t(x)]);
                lines.insert(std::move(line));
            }
        families.push_back(std::move(lines));
    }
    for (size_t a = 0; a < families.size(); ++a)
        for (size_t b = a + 1; b < families.size(); ++b)
            for (const auto& line : families[a]) assert(!families[b].count(line));
#endif

    return axis;
}

}  // namespace detail

/// Constructive cover for any set of at most (d+1)! - 1 points.
inline Cover cover_recursive(const PointSet& ps) {
    u64 lb = coverable_lower_bound(ps.d);
    if (ps.size() > lb)
        throw precondition_error("cover_recursive: more than " + std::to_string(lb) +
                                 " points in dimension " + std::to_string(ps.d));
    Cover c;
    c.axis = detail::cover_points(ps.points, ps.d);
    return c;
}

struct HBounds {
    int d;
    u64 lower;  // (d+1)! - 1
    u64 upper;  // d^(d-2) (d^2 + d - 1)
};

inline HBounds h_bounds(int d) {
    if (d < 1) throw precondition_error("h_bounds: d must be >= 1");
    auto f = factorial(u64(d) + 1);
    if (!f) throw overflow_error("h_bounds: (d+1)! overflows");
    auto p = d == 1 ? std::optional<u64>(1) : checked_pow(u64(d), u64(d) - 2);
    auto up = p ? checked_mul(*p, u64(d) * u64(d) + u64(d) - 1) : std::nullopt;
    if (!up) throw overflow_error("h_bounds: upper bound overflows");
    return {d, *f - 1, *up};
}

/// A non-coverable set of d^(d-2)(d^2+d-1) + 1 points inside the box
/// [d]^(d-1) x [d+1]: the box is kept in lexicographic order and trimmed
/// from the end. Lines in each of the first d-1 directions cover at most
/// d^(d-2)(d+1) points and the last direction at most d^(d-1), one short
/// of the total.
inline PointSet noncoverable_witness(int d) {
    HBounds hb = h_bounds(d);
    u64 keep = hb.upper + 1;
    std::vector<std::vector<int>> pts;
    std::vector<int> cur(size_t(d), 0);
    while (u64(pts.size()) < keep) {
        pts.push_back(cur);
        int j = d - 1;
        while (j >= 0) {
            int limit = (j == d - 1) ? d + 1 : d;
            if (++cur[size_t(j)] < limit) break;
            cur[size_t(j)] = 0;
            --j;
        }
        if (j < 0 && u64(pts.size()) < keep)
            throw internal_error("noncoverable_witness: box smaller than target size");
    }
    return PointSet(d, std::move(pts));
}

// ---------------------------------------------------------------------------
// Book graphs.
// ---------------------------------------------------------------------------

/// Fooling assignment for the book graph B_{d,n} given a non-coverable set S
/// of size q and a strategy with q+1 colors. The adversary colors the spine
/// only with elements of S; each page then has a color it never guesses
/// across S, which silences all pages, and non-coverability of S guarantees
/// a spine coloring on which every spine vertex is wrong too.
inline HatAssignment book_adversary(int d, int n_pages, const PointSet& S,
                                    const Strategy& strategy) {
    Graph book = make_book(d, n_pages);
    if (S.d != d) throw precondition_error("book_adversary: point set dimension != spine size");
    int q = int(S.size());
    if (q < 1) throw precondition_error("book_adversary: empty point set");
    Palette pal(q + 1);
    validate_strategy(book, pal, strategy);

    PointSet cs = compress(S);
    if (is_coverable(cs))
        throw precondition_error("book_adversary: point set is coverable");
    std::vector<std::vector<int>> spine_colorings = cs.points;
    std::sort(spine_colorings.begin(), spine_colorings.end());

    HatAssignment chi(size_t(d + n_pages), 0);
    std::vector<bool> seen;
    for (int v = d; v < d + n_pages; ++v) {
        // a page sees exactly the spine, coordinate j on spine vertex j
        seen.assign(size_t(q) + 1, false);
        for (const auto& s : spine_colorings) seen[size_t(strategy.guess(book, v, s))] = true;
        int qv = 0;
        while (seen[size_t(qv)]) ++qv;  // exists: q points name at most q colors
        chi[size_t(v)] = qv;
    }

    std::vector<int> visible;
    for (const auto& s : spine_colorings) {
        for (int j = 0; j < d; ++j) chi[size_t(j)] = s[size_t(j)];
        bool someone_right = false;
        for (int u = 0; u < d && !someone_right; ++u) {
            visible.clear();
            for (int w : book.neighbors(u)) visible.push_back(chi[size_t(w)]);
            someone_right = strategy.guess(book, u, visible) == chi[size_t(u)];
        }
        if (!someone_right) return chi;
    }
    throw internal_error("book_adversary: no fooling spine coloring found");
}

// ---------------------------------------------------------------------------
// Empirical search for h.
// ---------------------------------------------------------------------------

enum class SearchMode { exhaustive, random };

struct SearchHOptions {
    SearchMode mode = SearchMode::exhaustive;
    u64 budget = 10'000'000;  // max subsets to examine
    u64 seed = 0;
    u64 trials = 1000;  // random mode only
    int jobs = 1;       // exhaustive mode only
};

struct SearchHReport {
    u64 checked = 0;
    u64 coverable = 0;
    u64 noncoverable = 0;
    bool all_coverable = false;
    std::optional<PointSet> witness;  // first non-coverable subset found
};

namespace detail {

inline std::vector<int> cell_to_point(u64 cell, const std::vector<int>& box) {
    std::vector<int> p(box.size());
    for (size_t j = box.size(); j-- > 0;) {
        p[j] = int(cell % u64(box[j]));
        cell /= u64(box[j]);
    }
    return p;
}

}  // namespace detail

/// Probes whether every size-k subset of the given box is coverable.
/// Exhaustive mode enumerates all C(|box|, size) subsets (partitioned into
/// combination-rank ranges across jobs, merged deterministically); random
/// mode samples subsets with a seeded generator and tallies the verdicts.
inline SearchHReport search_h(int d, const std::vector<int>& box, int size,
                              const SearchHOptions& opt = {}) {
    if (int(box.size()) != d) throw precondition_error("search_h: box dimension != d");
    u64 cells = 1;
    for (int b : box) {
        if (b < 1) throw precondition_error("search_h: empty box axis");
        auto m = checked_mul(cells, u64(b));
        if (!m) throw overflow_error("search_h: box size overflows");
        cells = *m;
    }
    if (size < 1 || u64(size) > cells)
        throw precondition_error("search_h: subset size does not fit the box");

    SearchHReport report;
    if (opt.mode == SearchMode::exhaustive) {
        auto total = binomial(cells, u64(size));
        if (!total || *total > opt.budget)
            throw budget_error("search_h: subset count " +
                               (total ? std::to_string(*total) : std::string(">= 2^64")) +
                               " exceeds budget " + std::to_string(opt.budget));
        int jobs = std::max(1, opt.jobs);
        if (u64(jobs) > *total) jobs = int(*total);

        struct Part {
            u64 coverable = 0, noncoverable = 0;
            std::optional<u64> witness_rank;
        };
        std::vector<Part> parts((size_t(jobs)));
        auto worker = [&](int j, u64 begin, u64 end) {
            // unrank the first combination of this range, then step lexicographically
            std::vector<u64> comb;
            {
                u64 rank = begin, a = 0;
                for (int slot = 0; slot < size; ++slot) {
                    while (true) {
                        u64 block = *binomial(cells - 1 - a, u64(size - slot - 1));
                        if (rank < block) break;
                        rank -= block;
                        ++a;
                    }
                    comb.push_back(a++);
                }
            }
            for (u64 r = begin; r < end; ++r) {
                std::vector<std::vector<int>> pts;
                for (u64 cell : comb) pts.push_back(detail::cell_to_point(cell, box));
                PointSet ps(d, std::move(pts));
                if (is_coverable(ps)) {
                    ++parts[size_t(j)].coverable;
                } else {
                    ++parts[size_t(j)].noncoverable;
                    if (!parts[size_t(j)].witness_rank) parts[size_t(j)].witness_rank = r;
                }
                // next combination in lexicographic order
                int k = size - 1;
                while (k >= 0 && comb[size_t(k)] == cells - u64(size - k)) --k;
                if (k < 0) break;
                ++comb[size_t(k)];
                for (int x = k + 1; x < size; ++x) comb[size_t(x)] = comb[size_t(x) - 1] + 1;
            }
        };

        if (jobs == 1) {
            worker(0, 0, *total);
        } else {
            std::vector<std::thread> threads;
            u64 chunk = *total / u64(jobs), extra = *total % u64(jobs);
            u64 begin = 0;
            for (int j = 0; j < jobs; ++j) {
                u64 end = begin + chunk + (u64(j) < extra ? 1 : 0);
                threads.emplace_back(worker, j, begin, end);
                begin = end;
            }
            for (auto& t : threads) t.join();
        }

        std::optional<u64> witness_rank;
        for (const auto& p : parts) {
            report.coverable += p.coverable;
            report.noncoverable += p.noncoverable;
            if (p.witness_rank && (!witness_rank || *p.witness_rank < *witness_rank))
                witness_rank = p.witness_rank;
        }
        report.checked = *total;
        report.all_coverable = report.noncoverable == 0;
        if (witness_rank) {
            std::vector<std::vector<int>> pts;
            for (u64 cell : [&] {
                     std::vector<u64> comb;
                     u64 rank = *witness_rank, a = 0;
                     for (int slot = 0; slot < size; ++slot) {
                         while (true) {
                             u64 block = *binomial(cells - 1 - a, u64(size - slot - 1));
                             if (rank < block) break;
                             rank -= block;
                             ++a;
                         }
                         comb.push_back(a++);
                     }
                     return comb;
                 }())
                pts.push_back(detail::cell_to_point(cell, box));
            report.witness = PointSet(d, std::move(pts));
        }
    } else {
        if (opt.trials > opt.budget)
            throw budget_error("search_h: trial count exceeds budget");
        std::mt19937_64 rng(opt.seed);
        std::vector<u64> cells_pool(size_t(cells), 0);
        for (u64 i = 0; i < cells; ++i) cells_pool[size_t(i)] = i;
        for (u64 t = 0; t < opt.trials; ++t) {
            // partial Fisher-Yates: first `size` entries become the sample
            for (int i = 0; i < size; ++i) {
                u64 j = u64(i) + rng() % (cells - u64(i));
                std::swap(cells_pool[size_t(i)], cells_pool[size_t(j)]);
            }
            std::vector<std::vector<int>> pts;
            for (int i = 0; i < size; ++i)
                pts.push_back(detail::cell_to_point(cells_pool[size_t(i)], box));
            PointSet ps(d, std::move(pts));
            if (is_coverable(ps)) {
                ++report.coverable;
            } else {
                ++report.noncoverable;
                if (!report.witness) report.witness = ps;
            }
        }
        report.checked = opt.trials;
        report.all_coverable = report.noncoverable == 0;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Text formats. Point set: "d k" then k lines of d coordinates.
// Cover: k lines "point-index axis" with 0-based indices and 1-based axes.
// ---------------------------------------------------------------------------

inline PointSet read_pointset(std::istream& in) {
    long long d = 0, k = 0;
    if (!(in >> d >> k)) throw format_error("point set file: expected header \"d k\"");
    if (d < 1 || k < 0) throw format_error("point set file: bad header");
    std::vector<std::vector<int>> pts(size_t(k), std::vector<int>(size_t(d), 0));
    for (auto& p : pts)
        for (auto& c : p) {
            long long x = 0;
            if (!(in >> x)) throw format_error("point set file: truncated");
            if (x < 0) throw format_error("point set file: negative coordinate");
            c = int(x);
        }
    return PointSet(int(d), std::move(pts));
}

inline void write_pointset(std::ostream& out, const PointSet& ps) {
    out << ps.d << ' ' << ps.size() << '\n';
    for (const auto& p : ps.points) {
        for (size_t j = 0; j < p.size(); ++j) out << (j ? " " : "") << p[j];
        out << '\n';
    }
}

inline void write_cover(std::ostream& out, const Cover& c) {
    for (size_t i = 0; i < c.axis.size(); ++i) out << i << ' ' << c.axis[i] << '\n';
}

inline Cover read_cover(std::istream& in, size_t expected_points) {
    Cover c;
    c.axis.assign(expected_points, 0);
    std::vector<bool> seen(expected_points, false);
    for (size_t i = 0; i < expected_points; ++i) {
        long long idx = 0, axis = 0;
        if (!(in >> idx >> axis)) throw format_error("cover file: truncated");
        if (idx < 0 || u64(idx) >= expected_points || seen[size_t(idx)])
            throw format_error("cover file: bad point index");
        seen[size_t(idx)] = true;
        c.axis[size_t(idx)] = int(axis);
    }
    return c;
}

}  // namespace hatg
