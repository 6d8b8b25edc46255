#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mkcs/errors.hpp"
#include "mkcs/rational.hpp"
#include "mkcs/rng.hpp"

namespace mkcs {

// Undirected weighted multigraph. Parallel edges are kept as separate entries
// and always count separately; self-loops and non-positive weights are rejected.
struct WeightedEdge {
    int u = 0;
    int v = 0;
    Rational w;
};

struct WeightedGraph {
    int n = 0;
    std::vector<WeightedEdge> edges;
    std::map<int, std::string> labels;  // optional display names

    void add_edge(int u, int v, Rational w) { edges.push_back({u, v, std::move(w)}); }

    void validate() const {
        if (n < 0) throw InputError("negative vertex count");
        for (const auto& e : edges) {
            if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
                throw InputError("edge endpoint out of range");
            if (e.u == e.v) throw InputError("self-loop not allowed");
            if (e.w <= 0) throw InputError("edge weight must be positive");
        }
    }

    Rational total_weight() const {
        Rational t = 0;
        for (const auto& e : edges) t += e.w;
        return t;
    }

    // multiplicity degree: number of incident edge endpoints
    long long degree(int v) const {
        long long d = 0;
        for (const auto& e : edges) d += (e.u == v) + (e.v == v);
        return d;
    }

    Rational weighted_degree(int v) const {
        Rational d = 0;
        for (const auto& e : edges)
            if (e.u == v || e.v == v) d += e.w;
        return d;
    }

    bool is_unit_weight() const {
        for (const auto& e : edges)
            if (e.w != 1) return false;
        return true;
    }
};

// colors take values 1..k
struct Coloring {
    int k = 0;
    std::vector<int> colors;
};

inline void validate_coloring(const WeightedGraph& g, const Coloring& c) {
    if (c.k < 1) throw InputError("coloring needs k >= 1");
    if (static_cast<int>(c.colors.size()) != g.n)
        throw InputError("coloring does not cover every vertex");
    for (int col : c.colors)
        if (col < 1 || col > c.k) throw InputError("color out of range 1..k");
}

struct ScoreReport {
    Rational proper_weight;
    Rational miscolored_weight;
    Rational fraction_proper;  // 1 by convention on edgeless graphs
};

inline ScoreReport score(const WeightedGraph& g, const Coloring& c) {
    validate_coloring(g, c);
    ScoreReport r{0, 0, 1};
    for (const auto& e : g.edges) {
        if (c.colors[e.u] == c.colors[e.v])
            r.miscolored_weight += e.w;
        else
            r.proper_weight += e.w;
    }
    Rational total = r.proper_weight + r.miscolored_weight;
    if (total != 0) r.fraction_proper = r.proper_weight / total;
    return r;
}

// integer view of the edge weights: w[i] = edges[i].w * scale, scale = lcm of denominators
struct ScaledWeights {
    BigInt scale;
    std::vector<long long> w;
};

inline ScaledWeights scale_weights(const WeightedGraph& g) {
    ScaledWeights s;
    s.scale = 1;
    for (const auto& e : g.edges) s.scale = boost::multiprecision::lcm(s.scale, denominator(e.w));
    BigInt sum = 0;
    s.w.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        BigInt sw = numerator(e.w) * (s.scale / denominator(e.w));
        sum += sw;
        if (sw > std::numeric_limits<long long>::max() / 4)
            throw InputError("edge weights too large to scale to integers");
        s.w.push_back(sw.convert_to<long long>());
    }
    if (sum > std::numeric_limits<long long>::max() / 4)
        throw InputError("total weight too large to scale to integers");
    return s;
}

namespace detail {

struct BnbState {
    const WeightedGraph* g;
    int k;
    std::uint64_t budget;
    std::uint64_t visited = 0;
    std::vector<std::vector<std::pair<int, long long>>> lower_adj;  // per v: (u<v, weight)
    std::vector<int> cur;
    std::vector<int> best;
    long long best_cost = std::numeric_limits<long long>::max();
    bool have_best = false;

    // DFS in vertex-id order, colors ascending, so complete assignments are met in
    // lexicographic order and the first optimum found is the lexicographically
    // smallest one. Color symmetry is broken by capping each vertex's palette at
    // one more than the largest color used so far.
    bool dfs(int v, long long cost, int max_used) {
        if (have_best && cost >= best_cost) return false;
        if (v == g->n) {
            best = cur;
            best_cost = cost;
            have_best = true;
            return best_cost == 0;  // nothing can beat zero; stop the search
        }
        int cap = std::min(k, max_used + 1);
        for (int c = 1; c <= cap; ++c) {
            if (++visited > budget) throw BudgetError("coloring search budget exceeded");
            long long add = 0;
            for (const auto& [u, w] : lower_adj[v])
                if (cur[u] == c) add += w;
            cur[v] = c;
            if (dfs(v + 1, cost + add, std::max(max_used, c))) return true;
        }
        cur[v] = 0;
        return false;
    }
};

}  // namespace detail

// Minimizes miscolored weight exactly. Deterministic: among all optimal colorings
// returns the lexicographically smallest. The budget caps visited search nodes.
inline std::pair<Coloring, ScoreReport> exact_best_coloring(const WeightedGraph& g, int k,
                                                            std::uint64_t budget = 10'000'000) {
    if (k < 1) throw InputError("exact_best_coloring needs k >= 1");
    g.validate();
    detail::BnbState st;
    st.g = &g;
    st.k = k;
    st.budget = budget;
    auto sw = scale_weights(g);
    st.lower_adj.assign(g.n, {});
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        int lo = std::min(e.u, e.v), hi = std::max(e.u, e.v);
        st.lower_adj[hi].push_back({lo, sw.w[i]});
    }
    st.cur.assign(g.n, 0);
    st.dfs(0, 0, 0);
    Coloring c{k, st.best};
    return {c, score(g, c)};
}

inline Rational random_coloring_expectation(const WeightedGraph& g, int k) {
    if (k < 1) throw InputError("random_coloring_expectation needs k >= 1");
    return (Rational(k - 1) / k) * g.total_weight();
}

inline bool is_k_colorable(const WeightedGraph& g, int k, std::uint64_t budget = 10'000'000) {
    return exact_best_coloring(g, k, budget).second.miscolored_weight == 0;
}

// Hill-climbing over single-vertex recolorings, strict improvements only, so the
// result never scores worse than the start and is a local optimum on return.
inline Coloring local_search(const WeightedGraph& g, int k, const Coloring& start,
                             std::uint64_t seed) {
    g.validate();
    validate_coloring(g, start);
    if (start.k != k) throw InputError("start coloring uses a different k");
    auto sw = scale_weights(g);
    std::vector<std::vector<std::pair<int, long long>>> adj(g.n);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        adj[e.u].push_back({e.v, sw.w[i]});
        adj[e.v].push_back({e.u, sw.w[i]});
    }
    std::vector<int> col = start.colors;
    std::vector<int> order(g.n);
    for (int i = 0; i < g.n; ++i) order[i] = i;
    Rng rng(seed);
    bool moved = true;
    while (moved) {
        moved = false;
        rng.shuffle(order);
        for (int v : order) {
            long long cur_cost = 0;
            for (const auto& [u, w] : adj[v])
                if (col[u] == col[v]) cur_cost += w;
            int best_c = col[v];
            long long best_cost = cur_cost;
            for (int c = 1; c <= k; ++c) {  // ascending: first minimum = smallest color
                if (c == col[v]) continue;
                long long cost = 0;
                for (const auto& [u, w] : adj[v])
                    if (col[u] == c) cost += w;
                if (cost < best_cost) {
                    best_cost = cost;
                    best_c = c;
                }
            }
            if (best_c != col[v]) {
                col[v] = best_c;
                moved = true;
            }
        }
    }
    return Coloring{k, col};
}

// --- text formats ---------------------------------------------------------
// graph:    "wgraph <n> <edge-count>" then one "e <u> <v> <weight>" line per edge
// coloring: "k <k>" then one "c <v> <color>" line per vertex
// Weights are exact: integers, fractions "num/den", or exact decimals. No floats.

inline void write_graph(std::ostream& os, const WeightedGraph& g) {
    os << "wgraph " << g.n << " " << g.edges.size() << "\n";
    for (const auto& e : g.edges) os << "e " << e.u << " " << e.v << " " << format_rational(e.w) << "\n";
}

inline WeightedGraph read_graph(std::istream& is) {
    WeightedGraph g;
    std::string tag;
    if (!(is >> tag) || tag != "wgraph") throw InputError("expected 'wgraph' header");
    std::size_t m = 0;
    if (!(is >> g.n >> m)) throw InputError("bad graph header");
    g.edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::string w;
        WeightedEdge e;
        if (!(is >> tag >> e.u >> e.v >> w) || tag != "e") throw InputError("bad edge line");
        e.w = parse_rational(w);
        g.edges.push_back(e);
    }
    g.validate();
    return g;
}

inline void write_coloring(std::ostream& os, const Coloring& c) {
    os << "k " << c.k << "\n";
    for (std::size_t v = 0; v < c.colors.size(); ++v) os << "c " << v << " " << c.colors[v] << "\n";
}

inline Coloring read_coloring(std::istream& is) {
    Coloring c;
    std::string tag;
    if (!(is >> tag >> c.k) || tag != "k") throw InputError("expected 'k <k>' header");
    int v, col;
    std::vector<std::pair<int, int>> entries;
    while (is >> tag) {
        if (tag != "c") throw InputError("bad coloring line");
        if (!(is >> v >> col)) throw InputError("bad coloring line");
        entries.push_back({v, col});
    }
    c.colors.assign(entries.size(), 0);
    for (auto [vv, cc] : entries) {
        if (vv < 0 || vv >= static_cast<int>(entries.size()))
            throw InputError("coloring vertex id out of range");
        c.colors[vv] = cc;
    }
    return c;
}

}  // namespace mkcs
