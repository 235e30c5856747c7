#pragma once

// Shared helpers for the test suites: random strategy generation, naive
// oracles kept independent of the engine's incremental sweep, and a tiny
// harness for driving the CLI binary.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "hatg/hatg.hpp"

namespace testutil {

using namespace hatg;

inline Strategy random_tabulated(const Graph& g, int q, std::mt19937_64& rng) {
    Strategy s(g.order(), q);
    for (int v = 0; v < g.order(); ++v) {
        u64 entries = *checked_pow(u64(q), u64(g.degree(v)));
        std::vector<int> table(size_t(entries), 0);
        for (auto& t : table) t = int(rng() % u64(q));
        s.set_table(v, std::move(table));
    }
    return s;
}

/// Direct double loop: materialize each coloring, gather each vertex's
/// visible context, compare the guess. No incremental state.
inline std::vector<int> naive_evaluate(const Graph& g, int q, const Strategy& s,
                                       const std::vector<int>& chi) {
    std::vector<int> correct;
    for (int v = 0; v < g.order(); ++v) {
        std::vector<int> visible;
        for (int u : g.neighbors(v)) visible.push_back(chi[size_t(u)]);
        if (s.guess(g, v, visible) == chi[size_t(v)]) correct.push_back(v);
    }
    return correct;
}

struct NaiveVerify {
    bool winning;
    std::vector<int> counterexample;  // empty when winning
};

inline NaiveVerify naive_verify(const Graph& g, int q, const Strategy& s) {
    int n = g.order();
    u64 total = *checked_pow(u64(q), u64(n));
    std::vector<int> chi(size_t(n), 0);
    for (u64 idx = 0; idx < total; ++idx) {
        u64 rest = idx;
        for (int v = n - 1; v >= 0; --v) {
            chi[size_t(v)] = int(rest % u64(q));
            rest /= u64(q);
        }
        if (naive_evaluate(g, q, s, chi).empty()) return {false, chi};
    }
    return {true, {}};
}

/// Exhaustive enumeration of all strategy profiles; the ground truth for the
/// synthesis search on instances where the profile count is tiny.
inline bool profile_enumeration_winnable(const Graph& g, int q) {
    int n = g.order();
    std::vector<u64> table_sizes(size_t(n), 0);
    std::vector<std::vector<int>> tables((size_t(n)));
    for (int v = 0; v < n; ++v) {
        table_sizes[size_t(v)] = *checked_pow(u64(q), u64(g.degree(v)));
        tables[size_t(v)].assign(size_t(table_sizes[size_t(v)]), 0);
    }
    u64 colorings = *checked_pow(u64(q), u64(n));
    std::vector<int> chi(size_t(n), 0);
    while (true) {
        bool wins = true;
        for (u64 idx = 0; idx < colorings && wins; ++idx) {
            u64 rest = idx;
            for (int v = n - 1; v >= 0; --v) {
                chi[size_t(v)] = int(rest % u64(q));
                rest /= u64(q);
            }
            bool someone = false;
            for (int v = 0; v < n && !someone; ++v) {
                u64 ctx = 0;
                for (int u : g.neighbors(v)) ctx = ctx * u64(q) + u64(chi[size_t(u)]);
                someone = tables[size_t(v)][size_t(ctx)] == chi[size_t(v)];
            }
            wins = someone;
        }
        if (wins) return true;
        // next profile
        int v = 0;
        size_t cell = 0;
        while (v < n) {
            if (cell < tables[size_t(v)].size()) {
                if (++tables[size_t(v)][cell] < q) break;
                tables[size_t(v)][cell] = 0;
                ++cell;
            } else {
                ++v;
                cell = 0;
            }
        }
        if (v == n) return false;
    }
}

struct CliResult {
    int exit_code;
    std::string out;
};

inline std::string hatg_binary() {
#ifdef HATG_BIN_PATH
    return HATG_BIN_PATH;
#else
    const char* env = std::getenv("HATG_BIN");
    return env ? env : "hatg";
#endif
}

inline CliResult run_cli(const std::string& args) {
    std::string cmd = hatg_binary() + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    while (size_t got = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

/// Value of the first report line with this key, or empty.
inline std::string report_value(const std::string& out, const std::string& key) {
    std::istringstream ss(out);
    std::string line;
    while (std::getline(ss, line)) {
        auto tab = line.find('\t');
        if (tab != std::string::npos && line.substr(0, tab) == key)
            return line.substr(tab + 1);
    }
    return "";
}

class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / ("hatg_test_" + std::to_string(::getpid()) + "_" +
                                     std::to_string(counter_++));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

}  // namespace testutil
