#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "mkcs/errors.hpp"
#include "mkcs/graph.hpp"
#include "mkcs/rational.hpp"

namespace mkcs {

// 3-coloring -> k-coloring lift for k divisible by 3, on unit-weight inputs.
//
// Every source vertex u becomes a block B_u of k vertices (u, i, j) with
// i in 1..k/3 and j in 1..3. Between blocks, every source edge (u, v) induces a
// unit edge ((u,i,j), (v,i',j)) for all i, i' and matching j. Inside a block all
// C(k,2) pairs are joined at weight (2/3) d_u. Total weight is
//   sum_u [ C(k,2) (2/3) d_u + (3/2) (k/3)^2 d_u ]  <=  k^2 m.
struct TensorLayout {
    int k = 0;
    int n_src = 0;
    std::vector<long long> d;  // source degrees (edge multiplicities count)

    int third() const { return k / 3; }
    // i in 1..k/3, j in 1..3
    int id(int u, int i, int j) const { return u * k + (i - 1) * 3 + (j - 1); }
    struct Pos {
        int u, i, j;
    };
    Pos decompose(int id) const {
        int u = id / k, r = id % k;
        return {u, r / 3 + 1, r % 3 + 1};
    }
    int node_count() const { return n_src * k; }
};

struct TensorOutput {
    WeightedGraph graph;
    TensorLayout layout;
};

inline TensorOutput tensor_build(const WeightedGraph& g, int k) {
    g.validate();
    if (k < 3 || k % 3 != 0)
        throw InputError("tensor lift needs k divisible by 3; pad the output to reach other k");
    if (!g.is_unit_weight()) throw InputError("tensor lift expects a unit-weight graph");
    TensorOutput out;
    TensorLayout& lay = out.layout;
    lay.k = k;
    lay.n_src = g.n;
    lay.d.assign(g.n, 0);
    for (const auto& e : g.edges) {
        lay.d[e.u] += 1;
        lay.d[e.v] += 1;
    }
    WeightedGraph& h = out.graph;
    h.n = lay.node_count();
    const int t = lay.third();
    for (int u = 0; u < g.n; ++u) {
        if (lay.d[u] == 0) continue;  // zero-weight edges are omitted
        Rational w(2 * lay.d[u], 3);
        for (int p = 0; p < k; ++p)
            for (int q = p + 1; q < k; ++q) h.add_edge(u * k + p, u * k + q, w);
    }
    for (const auto& e : g.edges)
        for (int j = 1; j <= 3; ++j)
            for (int i = 1; i <= t; ++i)
                for (int ip = 1; ip <= t; ++ip)
                    h.add_edge(lay.id(e.u, i, j), lay.id(e.v, ip, j), Rational(1));
    h.validate();
    return out;
}

// color rotation on {1,2,3}: 1 -> 2 -> 3 -> 1
inline int rotate3(int c) { return c % 3 + 1; }

// chi_H((u,i,j)) = rotate3^j(chi_G(u)) + 3(i-1): proper source colorings lift to
// proper k-colorings (blocks become rainbows, neighbors in the same copy j
// disagree because the rotation is applied uniformly).
inline Coloring encode_3_to_k(const TensorLayout& lay, const Coloring& cg) {
    if (cg.k != 3) throw InputError("encode_3_to_k expects a 3-coloring");
    if (static_cast<int>(cg.colors.size()) != lay.n_src)
        throw InputError("source coloring does not match layout");
    Coloring ch{lay.k, std::vector<int>(lay.node_count(), 0)};
    for (int u = 0; u < lay.n_src; ++u) {
        int base = cg.colors[u];
        if (base < 1 || base > 3) throw InputError("source color out of range");
        for (int i = 1; i <= lay.third(); ++i) {
            int rot = base;
            for (int j = 1; j <= 3; ++j) {
                rot = rotate3(rot);
                ch.colors[lay.id(u, i, j)] = rot + 3 * (i - 1);
            }
        }
    }
    return ch;
}

// Uncut-weight certificate for a k-coloring of the lifted graph.
// c_within[u] counts monochromatic pairs inside B_u (each of weight (2/3) d_u),
// c_between counts monochromatic between-block edges (unit). The decode returns
// a 3-coloring of the source with miscolored count <= c_total / k.
struct KDecodeCertificate {
    std::vector<long long> c_within;
    long long c_between = 0;
    Rational c_total;
    Rational bound;  // c_total / k
    int chosen_c = 0;
    long long miscolored = 0;
    std::vector<std::uint64_t> sugg;  // per source vertex: bitmask of colors seen in its block
};

inline std::pair<Coloring, KDecodeCertificate> decode_k_to_3(const WeightedGraph& g_src,
                                                             const TensorLayout& lay,
                                                             const Coloring& ch) {
    g_src.validate();
    if (!g_src.is_unit_weight()) throw InputError("decode_k_to_3 expects the unit-weight source");
    if (g_src.n != lay.n_src) throw InputError("source graph does not match layout");
    if (ch.k != lay.k || static_cast<int>(ch.colors.size()) != lay.node_count())
        throw InputError("coloring does not match the lifted graph");
    for (int c : ch.colors)
        if (c < 1 || c > lay.k) throw InputError("color out of range");
    const int k = lay.k, t = lay.third(), n = lay.n_src;

    KDecodeCertificate cert;
    cert.c_within.assign(n, 0);
    // sugg_j[u][j-1]: colors block u shows in copy j; sugg: their union
    std::vector<std::array<std::uint64_t, 3>> sugg_j(n, {0, 0, 0});
    cert.sugg.assign(n, 0);
    for (int u = 0; u < n; ++u) {
        std::vector<int> cnt(k + 1, 0);
        for (int i = 1; i <= t; ++i)
            for (int j = 1; j <= 3; ++j) {
                int c = ch.colors[lay.id(u, i, j)];
                cnt[c] += 1;
                sugg_j[u][j - 1] |= std::uint64_t{1} << c;
            }
        cert.sugg[u] = sugg_j[u][0] | sugg_j[u][1] | sugg_j[u][2];
        for (int c = 1; c <= k; ++c)
            cert.c_within[u] += static_cast<long long>(cnt[c]) * (cnt[c] - 1) / 2;
    }
    for (const auto& e : g_src.edges)
        for (int j = 1; j <= 3; ++j)
            for (int i = 1; i <= t; ++i)
                for (int ip = 1; ip <= t; ++ip)
                    if (ch.colors[lay.id(e.u, i, j)] == ch.colors[lay.id(e.v, ip, j)])
                        cert.c_between += 1;
    cert.c_total = 0;
    for (int u = 0; u < n; ++u) cert.c_total += Rational(2 * lay.d[u], 3) * cert.c_within[u];
    cert.c_total += cert.c_between;
    cert.bound = cert.c_total / k;

    // aggregated source adjacency (multiplicities summed)
    std::vector<std::vector<std::pair<int, long long>>> adj(n);
    {
        std::vector<std::vector<long long>> mult(n);
        for (auto& row : mult) row.assign(n, 0);
        for (const auto& e : g_src.edges) {
            mult[e.u][e.v] += 1;
            mult[e.v][e.u] += 1;
        }
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (mult[u][v] > 0) adj[u].push_back({v, mult[u][v]});
    }

    // Derandomized decode: for each candidate color c, vertices whose block shows
    // c take the smallest copy index j with c in that copy; the rest are filled
    // greedily in id order by conditional expectation (undecided neighbors
    // contribute a constant, so only decided neighbors matter). The best of the
    // k candidates meets the average bound c_total / k.
    std::vector<int> best;
    long long best_cost = -1;
    int best_c = 0;
    std::vector<int> col(n);
    for (int c = 1; c <= k; ++c) {
        const std::uint64_t bit = std::uint64_t{1} << c;
        for (int u = 0; u < n; ++u) {
            col[u] = 0;
            for (int j = 0; j < 3; ++j)
                if (sugg_j[u][j] & bit) {
                    col[u] = j + 1;
                    break;
                }
        }
        for (int u = 0; u < n; ++u) {
            if (col[u] != 0) continue;
            long long cost[4] = {0, 0, 0, 0};
            for (const auto& [v, w] : adj[u])
                if (col[v] != 0) cost[col[v]] += w;
            int pick = 1;
            for (int a = 2; a <= 3; ++a)
                if (cost[a] < cost[pick]) pick = a;
            col[u] = pick;
        }
        long long cost = 0;
        for (const auto& e : g_src.edges)
            if (col[e.u] == col[e.v]) cost += 1;
        if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            best_c = c;
            best = col;
        }
    }
    cert.chosen_c = best_c;
    cert.miscolored = best_cost < 0 ? 0 : best_cost;
    return {Coloring{3, best}, cert};
}

// Padding to k = K + L colors, L in {1, 2}, for unit-weight K-colorable inputs.
// L fresh vertices join every original vertex v at weight d_v / K; for L = 2 the
// two fresh vertices are joined at weight M / (33 K). Total weight becomes
//   M' = M + 2 L M / K + (L - 1) M / (33 K).
struct PaddingLayout {
    int K = 0;
    int L = 0;
    std::vector<int> new_vertices;
    Rational source_weight;
};

inline std::pair<WeightedGraph, PaddingLayout> pad_to_k(const WeightedGraph& g, int K, int k) {
    g.validate();
    if (K < 3 || K % 3 != 0) throw InputError("pad_to_k expects K divisible by 3");
    if (!g.is_unit_weight()) throw InputError("pad_to_k expects a unit-weight graph");
    int L = k - K;
    if (L < 1 || L > 2) throw InputError("pad_to_k covers k = K+1 and k = K+2 only");
    PaddingLayout lay;
    lay.K = K;
    lay.L = L;
    lay.source_weight = g.total_weight();
    WeightedGraph out = g;
    out.n = g.n + L;
    for (int t = 0; t < L; ++t) {
        lay.new_vertices.push_back(g.n + t);
        for (int v = 0; v < g.n; ++v) {
            long long dv = g.degree(v);
            if (dv > 0) out.add_edge(v, g.n + t, Rational(dv, K));
        }
    }
    if (L == 2 && lay.source_weight != 0)
        out.add_edge(g.n, g.n + 1, lay.source_weight / (33 * K));
    out.validate();
    return {out, lay};
}

// Replaces each weighted edge by w * scale parallel unit edges, where scale is
// the least common multiple of the weight denominators. Proper/miscolored
// fractions are preserved for every coloring. The cap bounds total multiplicity.
inline WeightedGraph unweight(const WeightedGraph& g, std::uint64_t cap = 1u << 22) {
    g.validate();
    BigInt scale = 1;
    for (const auto& e : g.edges) scale = boost::multiprecision::lcm(scale, denominator(e.w));
    BigInt total = 0;
    for (const auto& e : g.edges) total += numerator(e.w) * (scale / denominator(e.w));
    if (total > cap) throw BudgetError("unweight multiplicity cap exceeded");
    WeightedGraph out;
    out.n = g.n;
    out.labels = g.labels;
    for (const auto& e : g.edges) {
        BigInt mult = numerator(e.w) * (scale / denominator(e.w));
        long long m = mult.convert_to<long long>();
        for (long long i = 0; i < m; ++i) out.add_edge(e.u, e.v, Rational(1));
    }
    out.validate();
    return out;
}

}  // namespace mkcs
