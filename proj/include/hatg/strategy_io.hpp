#pragma once

#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hatg/common.hpp"
#include "hatg/constructive.hpp"
#include "hatg/engine.hpp"
#include "hatg/graph.hpp"

namespace hatg {

// Strategy file format:
//   n q
// then one line per vertex, either
//   table <deg> <q^deg guesses>     (contexts: ascending neighbor index,
//                                    last neighbor fastest-varying)
//   rule <name> <params...>
// Known rules: "clique" (no params), "gdn <d> <N> <q>".

inline void write_strategy(std::ostream& out, const Graph& g, const Strategy& s) {
    out << s.order() << ' ' << s.colors() << '\n';
    for (int v = 0; v < s.order(); ++v) {
        if (s.has_table(v)) {
            out << "table " << g.degree(v);
            for (int gss : s.table(v)) out << ' ' << gss;
            out << '\n';
        } else {
            const ComputedRule* r = s.rule(v);
            out << "rule " << r->name();
            for (long long p : r->params()) out << ' ' << p;
            out << '\n';
        }
    }
}

namespace detail {

inline std::shared_ptr<const ComputedRule> make_rule(const std::string& name,
                                                     const std::vector<long long>& params,
                                                     const Graph& g, int q) {
    if (name == "clique") {
        if (!params.empty()) throw format_error("strategy file: clique rule takes no params");
        if (q != g.order()) throw format_error("strategy file: clique rule needs q = n");
        return std::make_shared<CliqueRule>();
    }
    if (name == "gdn") {
        if (params.size() != 3) throw format_error("strategy file: gdn rule needs d N q");
        auto rule = std::make_shared<LayeredRule>(int(params[0]), int(params[1]), int(params[2]));
        if (rule->palette() != q) throw format_error("strategy file: gdn palette mismatch");
        Graph expect = make_layered(int(params[0]), int(params[1]));
        if (expect.order() != g.order() || expect.edges() != g.edges())
            throw format_error("strategy file: gdn rule does not match this graph");
        return rule;
    }
    throw format_error("strategy file: unknown rule '" + name + "'");
}

}  // namespace detail

inline Strategy read_strategy(std::istream& in, const Graph& g) {
    long long n = 0, q = 0;
    if (!(in >> n >> q)) throw format_error("strategy file: expected header \"n q\"");
    if (n != g.order()) throw format_error("strategy file: vertex count does not match graph");
    if (q < 1) throw format_error("strategy file: bad palette size");
    Strategy s{int(n), int(q)};
    // rules with identical name+params share one object
    std::map<std::pair<std::string, std::vector<long long>>,
             std::shared_ptr<const ComputedRule>> cache;
    for (int v = 0; v < int(n); ++v) {
        std::string kind;
        if (!(in >> kind)) throw format_error("strategy file: missing line for vertex " +
                                              std::to_string(v));
        if (kind == "table") {
            long long deg = 0;
            if (!(in >> deg)) throw format_error("strategy file: missing degree");
            if (deg != g.degree(v))
                throw format_error("strategy file: degree mismatch at vertex " +
                                   std::to_string(v));
            auto entries = checked_pow(u64(q), u64(deg));
            if (!entries) throw overflow_error("strategy file: table size overflows");
            std::vector<int> table(size_t(*entries), 0);
            for (u64 i = 0; i < *entries; ++i) {
                long long gss = 0;
                if (!(in >> gss)) throw format_error("strategy file: truncated table");
                if (gss < 0 || gss >= q)
                    throw format_error("strategy file: guess outside palette");
                table[size_t(i)] = int(gss);
            }
            s.set_table(v, std::move(table));
        } else if (kind == "rule") {
            std::string name;
            if (!(in >> name)) throw format_error("strategy file: missing rule name");
            std::string rest;
            std::getline(in, rest);
            std::istringstream ps(rest);
            std::vector<long long> params;
            long long p = 0;
            while (ps >> p) params.push_back(p);
            auto key = std::make_pair(name, params);
            auto it = cache.find(key);
            if (it == cache.end())
                it = cache.emplace(key, detail::make_rule(name, params, g, int(q))).first;
            s.set_rule(v, it->second);
        } else {
            throw format_error("strategy file: expected 'table' or 'rule', got '" + kind + "'");
        }
    }
    return s;
}

}  // namespace hatg
