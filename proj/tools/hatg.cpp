// Command-line front end: every subcommand prints "key<TAB>value" report
// lines. Exit codes: 0 definitive answer, 1 usage or format error, 2 budget
// exceeded.

#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hatg/hatg.hpp"

namespace {

using namespace hatg;

void emit(const std::string& key, const std::string& value) {
    std::cout << key << '\t' << value << '\n';
}

void emit(const std::string& key, u64 value) { emit(key, std::to_string(value)); }

std::string join(const std::vector<int>& xs, const char* sep = " ") {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(xs[i]);
    }
    return out;
}

/// Family shorthand ("K5", "C7", "P4", "B2,10", "G2,4") or a graph file path.
Graph load_graph(const std::string& spec) {
    static const std::regex one(R"(^([KCP])(\d+)$)");
    static const std::regex two(R"(^([BG])(\d+),(\d+)$)");
    std::smatch m;
    if (std::regex_match(spec, m, one)) {
        int n = std::stoi(m[2]);
        if (m[1] == "K") return make_clique(n);
        if (m[1] == "C") return make_cycle(n);
        return make_path(n);
    }
    if (std::regex_match(spec, m, two)) {
        int a = std::stoi(m[2]), b = std::stoi(m[3]);
        return m[1] == "B" ? make_book(a, b) : make_layered(a, b);
    }
    std::ifstream in(spec);
    if (!in) throw format_error("cannot open graph '" + spec + "' (not a family shorthand either)");
    return read_graph(in);
}

Strategy load_strategy(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open strategy file '" + path + "'");
    return read_strategy(in, g);
}

Ordering load_ordering(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open ordering file '" + path + "'");
    Ordering ord;
    long long v = 0;
    while (in >> v) ord.perm.push_back(int(v));
    validate_ordering(g, ord);
    return ord;
}

PointSet load_pointset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open point set file '" + path + "'");
    return read_pointset(in);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw format_error("cannot write to '" + path + "'");
    return out;
}

const char* status_name(SynthesisStatus st) {
    switch (st) {
        case SynthesisStatus::winning_strategy_found: return "winning-strategy-found";
        case SynthesisStatus::proven_impossible: return "proven-impossible";
        default: return "budget-exceeded";
    }
}

const char* kFormatsFooter =
    "File formats:\n"
    "  graph:     \"n m\" header, then m lines \"u v\" (0-based endpoints).\n"
    "             Anywhere a <graph> is expected a family shorthand also works:\n"
    "             K<n> clique, C<n> cycle, P<n> path, B<d>,<n> book, G<d>,<N> layered.\n"
    "  ordering:  n whitespace-separated vertex ids, leftmost first.\n"
    "  strategy:  \"n q\" header, then per vertex either\n"
    "             \"table <deg> <q^deg guesses>\" (contexts enumerated with ascending\n"
    "             neighbor index, last neighbor fastest-varying) or\n"
    "             \"rule <name> <params>\" (rules: clique | gdn <d> <N> <q>).\n"
    "  point set: \"d k\" header, then k lines of d non-negative coordinates.\n"
    "  cover:     k lines \"point-index axis\" (0-based points, 1-based axes).\n"
    "Reports are \"key<TAB>value\" lines. Exit codes: 0 definitive, 1 usage or\n"
    "format error, 2 budget exceeded.";

int run(int argc, char** argv) {
    CLI::App app{"hat guessing games on graphs: strategies, adversaries, bounds, covers"};
    app.require_subcommand(1);
    app.footer(kFormatsFooter);

    // --- graph ---
    auto* cmd_graph = app.add_subcommand("graph", "echo a graph in the text format");
    std::string g_spec, g_out;
    cmd_graph->add_option("graph", g_spec, "graph file or family shorthand")->required();
    cmd_graph->add_option("--out", g_out, "write to file instead of stdout");
    cmd_graph->callback([&] {
        Graph g = load_graph(g_spec);
        if (g_out.empty()) {
            write_graph(std::cout, g);
        } else {
            auto out = open_out(g_out);
            write_graph(out, g);
            emit("graph_file", g_out);
        }
    });

    // --- bounds ---
    auto* cmd_bounds = app.add_subcommand("bounds", "upper-bound report for a graph");
    std::string b_spec, b_ord;
    cmd_bounds->add_option("graph", b_spec, "graph file or family shorthand")->required();
    cmd_bounds->add_option("--ordering", b_ord, "ordering file (default: canonical)");
    cmd_bounds->callback([&] {
        Graph g = load_graph(b_spec);
        std::optional<Ordering> ord;
        if (!b_ord.empty()) ord = load_ordering(b_ord, g);
        BoundReport r = bound_report(g, ord);
        emit("graph", b_spec);
        emit("n", u64(g.order()));
        emit("degeneracy", u64(r.degeneracy));
        emit("depth", u64(r.depth));
        emit("max_degree", u64(r.max_degree));
        emit("lll_bound", r.lll_bound);
        emit("budget_bound", r.budget_bound ? to_string(*r.budget_bound) : "overflow");
        emit("depth_bound", r.depth_bound ? to_string(*r.depth_bound) : "overflow");
        if (r.sylvester_bound) emit("sylvester_bound", *r.sylvester_bound);
    });

    // --- fool ---
    auto* cmd_fool = app.add_subcommand("fool", "build an assignment defeating a strategy");
    std::string f_spec, f_strat, f_ord;
    int f_q = 0;
    u64 f_budget = FoolOptions{}.max_enumeration;
    cmd_fool->add_option("graph", f_spec, "graph file or family shorthand")->required();
    cmd_fool->add_option("strategy", f_strat, "strategy file")->required();
    cmd_fool->add_option("q", f_q, "number of colors (at least the max budget)")->required();
    cmd_fool->add_option("--ordering", f_ord, "ordering file (default: canonical)");
    cmd_fool->add_option("--max-enumeration", f_budget, "per-vertex enumeration budget");
    cmd_fool->callback([&] {
        Graph g = load_graph(f_spec);
        Ordering ord = f_ord.empty() ? canonical_ordering(g) : load_ordering(f_ord, g);
        Palette pal(f_q);
        Strategy s = load_strategy(f_strat, g);
        BudgetVector b = budgets(g, ord);
        HatAssignment chi = fool(g, ord, pal, s, {f_budget});
        auto correct = evaluate(g, pal, s, chi);
        emit("graph", f_spec);
        emit("q", u64(f_q));
        emit("max_enumeration", f_budget);
        {
            std::string ts;
            for (size_t i = 0; i < b.t.size(); ++i) ts += (i ? " " : "") + to_string(b.t[i]);
            emit("budgets", ts);
        }
        emit("coloring", join(chi));
        emit("correct_count", u64(correct.size()));
        emit("all_wrong", correct.empty() ? "yes" : "no");
    });

    // --- verify ---
    auto* cmd_verify = app.add_subcommand("verify", "exhaustively check a strategy");
    std::string v_spec, v_strat;
    int v_q = 0, v_jobs = 1;
    bool v_det = false;
    u64 v_budget = VerifyOptions{}.max_colorings;
    cmd_verify->add_option("graph", v_spec, "graph file or family shorthand")->required();
    cmd_verify->add_option("strategy", v_strat, "strategy file")->required();
    cmd_verify->add_option("--q", v_q, "number of colors (default: strategy header)");
    cmd_verify->add_option("--jobs", v_jobs, "worker count");
    cmd_verify->add_flag("--deterministic", v_det, "force sequential sweep");
    cmd_verify->add_option("--max-colorings", v_budget, "coloring budget");
    cmd_verify->callback([&] {
        Graph g = load_graph(v_spec);
        Strategy s = load_strategy(v_strat, g);
        Palette pal(v_q > 0 ? v_q : s.colors());
        VerifyOptions opt;
        opt.max_colorings = v_budget;
        opt.jobs = v_det ? 1 : v_jobs;
        auto out = verify_winning(g, pal, s, opt);
        emit("graph", v_spec);
        emit("q", u64(pal.q));
        emit("max_colorings", v_budget);
        emit("winning", out.winning ? "yes" : "no");
        if (out.counterexample) emit("counterexample", join(*out.counterexample));
    });

    // --- solve ---
    auto* cmd_solve = app.add_subcommand("solve", "search for a winning strategy at fixed q");
    std::string s_spec, s_out;
    int s_q = 0;
    SynthesisOptions s_opt;
    cmd_solve->add_option("graph", s_spec, "graph file or family shorthand")->required();
    cmd_solve->add_option("--q", s_q, "number of colors")->required();
    cmd_solve->add_option("--max-nodes", s_opt.max_nodes, "search node budget");
    cmd_solve->add_option("--out", s_out, "write the witness strategy here");
    cmd_solve->callback([&] {
        Graph g = load_graph(s_spec);
        SynthesisResult r = exists_winning_strategy(g, s_q, s_opt);
        emit("graph", s_spec);
        emit("q", u64(s_q));
        emit("max_nodes", s_opt.max_nodes);
        emit("status", status_name(r.status));
        emit("nodes", r.stats.nodes);
        if (r.strategy && !s_out.empty()) {
            auto out = open_out(s_out);
            write_strategy(out, g, *r.strategy);
            emit("strategy_file", s_out);
        }
        if (r.status == SynthesisStatus::budget_exceeded)
            throw budget_error("solve: node budget exceeded");
    });

    // --- hg ---
    auto* cmd_hg = app.add_subcommand("hg", "hat guessing number up to a color cap");
    std::string h_spec;
    int h_max = 0;
    HgOptions h_opt;
    cmd_hg->add_option("graph", h_spec, "graph file or family shorthand")->required();
    cmd_hg->add_option("--max-q", h_max, "largest q to try")->required();
    cmd_hg->add_option("--max-nodes", h_opt.max_nodes, "search node budget per q");
    cmd_hg->add_flag("--monotonic", h_opt.monotonic_shortcut,
                     "stop at the first impossible q (heuristic shortcut)");
    cmd_hg->callback([&] {
        Graph g = load_graph(h_spec);
        HgResult r = hat_guessing_number(g, h_max, h_opt);
        emit("graph", h_spec);
        emit("max_q", u64(h_max));
        emit("max_nodes", h_opt.max_nodes);
        for (auto [q, st] : r.per_q) emit("q_" + std::to_string(q), status_name(st));
        emit("nodes", r.total_nodes);
        emit("hg", u64(r.hg));
    });

    // --- strategy ---
    auto* cmd_strategy = app.add_subcommand("strategy", "emit a named strategy file");
    cmd_strategy->require_subcommand(1);
    auto* cmd_clique = cmd_strategy->add_subcommand("clique", "modular-sum strategy for K_n");
    int c_n = 0;
    std::string c_out;
    cmd_clique->add_option("--n", c_n, "clique size (palette size equals n)")->required();
    cmd_clique->add_option("--out", c_out, "write to file instead of stdout");
    cmd_clique->callback([&] {
        Graph g = make_clique(c_n);
        Strategy s = tabulate(g, Palette(c_n), clique_strategy(c_n));
        if (c_out.empty()) {
            write_strategy(std::cout, g, s);
        } else {
            auto out = open_out(c_out);
            write_strategy(out, g, s);
            emit("strategy_file", c_out);
        }
    });
    auto* cmd_gdn = cmd_strategy->add_subcommand("gdn", "layered clique-tree strategy");
    int d_d = 0, d_N = 0, d_q = -1;
    std::string d_out;
    cmd_gdn->add_option("--d", d_d, "tree depth")->required();
    cmd_gdn->add_option("--N", d_N, "branching factor")->required();
    cmd_gdn->add_option("--q", d_q, "palette size (default s_d - 1)");
    cmd_gdn->add_option("--out", d_out, "write to file instead of stdout");
    cmd_gdn->callback([&] {
        Graph g = make_layered(d_d, d_N);
        Strategy computed = gdn_strategy(d_d, d_N, d_q);
        Strategy s = tabulate(g, Palette(computed.colors()), computed);
        if (d_out.empty()) {
            write_strategy(std::cout, g, s);
        } else {
            auto out = open_out(d_out);
            write_strategy(out, g, s);
            emit("strategy_file", d_out);
        }
    });

    // --- cover ---
    auto* cmd_cover = app.add_subcommand("cover", "decide coverability of a point set");
    std::string cv_in, cv_out;
    bool cv_recursive = false;
    u64 cv_budget = 10'000;
    cmd_cover->add_option("pointset", cv_in, "point set file")->required();
    cmd_cover->add_option("--out", cv_out, "write a cover certificate here");
    cmd_cover->add_flag("--recursive", cv_recursive,
                        "use the recursive construction instead of matching");
    cmd_cover->add_option("--max-points", cv_budget, "point budget for the matching");
    cmd_cover->callback([&] {
        PointSet ps = load_pointset(cv_in);
        emit("pointset", cv_in);
        emit("d", u64(ps.d));
        emit("points", u64(ps.size()));
        emit("max_points", cv_budget);
        std::optional<Cover> cover;
        if (cv_recursive) {
            cover = cover_recursive(ps);
            emit("method", "recursive");
        } else {
            cover = is_coverable(ps, cv_budget);
            emit("method", "matching");
        }
        emit("coverable", cover ? "yes" : "no");
        if (cover) {
            if (!cover_valid(ps, *cover)) throw internal_error("cover fails validity check");
            emit("cover_valid", "yes");
            if (!cv_out.empty()) {
                auto out = open_out(cv_out);
                write_cover(out, *cover);
                emit("cover_file", cv_out);
            }
        }
    });

    // --- witness ---
    auto* cmd_witness = app.add_subcommand("witness", "emit the non-coverable witness set");
    int w_d = 0;
    std::string w_out;
    cmd_witness->add_option("--d", w_d, "dimension")->required();
    cmd_witness->add_option("--out", w_out, "write the point set here");
    cmd_witness->callback([&] {
        PointSet ps = noncoverable_witness(w_d);
        emit("d", u64(w_d));
        emit("size", u64(ps.size()));
        std::string box;
        for (int j = 0; j < w_d; ++j) box += (j ? "," : "") + std::to_string(j == w_d - 1 ? w_d + 1 : w_d);
        emit("box", box);
        if (w_out.empty()) {
            for (const auto& p : ps.points) emit("point", join(p));
        } else {
            auto out = open_out(w_out);
            write_pointset(out, ps);
            emit("pointset_file", w_out);
        }
    });

    // --- hsearch ---
    auto* cmd_hsearch = app.add_subcommand("hsearch", "probe coverability of box subsets");
    int hs_d = 0, hs_size = 0, hs_jobs = 1;
    bool hs_det = false;
    std::string hs_box, hs_out;
    SearchHOptions hs_opt;
    std::optional<u64> hs_trials;
    cmd_hsearch->add_option("--d", hs_d, "dimension")->required();
    cmd_hsearch->add_option("--box", hs_box, "box sizes, comma separated (e.g. 5,5)")->required();
    cmd_hsearch->add_option("--size", hs_size, "subset size")->required();
    cmd_hsearch->add_option("--random", hs_trials, "sample this many subsets instead");
    cmd_hsearch->add_option("--seed", hs_opt.seed, "random generator seed");
    cmd_hsearch->add_option("--budget", hs_opt.budget, "subset budget");
    cmd_hsearch->add_option("--jobs", hs_jobs, "worker count (exhaustive mode)");
    cmd_hsearch->add_flag("--deterministic", hs_det, "force sequential enumeration");
    cmd_hsearch->add_option("--out", hs_out, "write a non-coverable witness here");
    cmd_hsearch->callback([&] {
        std::vector<int> box;
        std::stringstream ss(hs_box);
        for (std::string part; std::getline(ss, part, ',');) box.push_back(std::stoi(part));
        if (hs_trials) {
            hs_opt.mode = SearchMode::random;
            hs_opt.trials = *hs_trials;
        }
        hs_opt.jobs = hs_det ? 1 : hs_jobs;
        SearchHReport r = search_h(hs_d, box, hs_size, hs_opt);
        emit("d", u64(hs_d));
        emit("box", hs_box);
        emit("size", u64(hs_size));
        emit("mode", hs_opt.mode == SearchMode::exhaustive ? "exhaustive" : "random");
        if (hs_opt.mode == SearchMode::random) emit("seed", hs_opt.seed);
        emit("budget", hs_opt.budget);
        emit("checked", r.checked);
        emit("coverable", r.coverable);
        emit("noncoverable", r.noncoverable);
        emit("all_coverable", r.all_coverable ? "yes" : "no");
        if (r.witness && !hs_out.empty()) {
            auto out = open_out(hs_out);
            write_pointset(out, *r.witness);
            emit("witness_file", hs_out);
        }
    });

    // --- book-fool ---
    auto* cmd_book = app.add_subcommand("book-fool", "defeat a book-graph strategy");
    int bk_d = 0, bk_n = 0;
    std::string bk_strat, bk_points;
    cmd_book->add_option("--d", bk_d, "spine size")->required();
    cmd_book->add_option("--n", bk_n, "page count")->required();
    cmd_book->add_option("strategy", bk_strat, "strategy file on B_{d,n}")->required();
    cmd_book->add_option("--pointset", bk_points,
                         "non-coverable set (default: the witness for d)");
    cmd_book->callback([&] {
        Graph g = make_book(bk_d, bk_n);
        Strategy s = load_strategy(bk_strat, g);
        PointSet ps = bk_points.empty() ? noncoverable_witness(bk_d) : load_pointset(bk_points);
        HatAssignment chi = book_adversary(bk_d, bk_n, ps, s);
        auto correct = evaluate(g, Palette(s.colors()), s, chi);
        emit("d", u64(bk_d));
        emit("n", u64(bk_n));
        emit("pointset_size", u64(ps.size()));
        emit("q", u64(ps.size()));
        emit("colors", u64(s.colors()));
        emit("coloring", join(chi));
        emit("correct_count", u64(correct.size()));
        emit("all_wrong", correct.empty() ? "yes" : "no");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    } catch (const budget_error& e) {
        std::cerr << "error (budget): " << e.what() << '\n';
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
