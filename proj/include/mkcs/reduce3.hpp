#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "mkcs/csp.hpp"
#include "mkcs/errors.hpp"
#include "mkcs/graph.hpp"
#include "mkcs/rational.hpp"

namespace mkcs {

// CSP -> weighted 3-coloring instance.
//
// Nodes: three globals R, T, F; one node per x and z variable; a pair
// (y_j, ybar_j) per y variable; four local nodes (A, A', B, B') per constraint.
//
// Edges: R-T-F triangle at weight m/2 each; per y pair a triangle
// {y_j, ybar_j, R} at weight w_j = (delta(y_j)+delta(ybar_j))/2; spokes x_i-R at
// delta(x_i)/2 and z_l-R at delta(z_l)/2; per constraint ten unit edges
//   A-T, A-x, A-B, B-Y, B-z[zk], A'-F, A'-x, A'-B', B'-Y, B'-z[zl]
// where Y is the node of the constraint's y literal (y_j or ybar_j).
// delta(v) counts unit gadget edges incident to the variable node v.
// Zero-weight edges are omitted. Total weight comes to 33m/2.

enum class EdgeSource { GlobalTriangle, LiteralTriangle, RSpoke, Gadget };

struct EdgeProvenance {
    EdgeSource source = EdgeSource::Gadget;
    // GlobalTriangle: 0..2; LiteralTriangle: y index; RSpoke: variable node id;
    // Gadget: constraint index
    int index = 0;
};

struct GadgetLayout {
    int nx = 0, ny = 0, nz = 0, m = 0;

    static constexpr int R = 0;
    static constexpr int T = 1;
    static constexpr int F = 2;
    int x_node(int i) const { return 3 + i; }
    int y_node(int j) const { return 3 + nx + 2 * j; }
    int ybar_node(int j) const { return 3 + nx + 2 * j + 1; }
    int z_node(int l) const { return 3 + nx + 2 * ny + l; }
    int gadget_base() const { return 3 + nx + 2 * ny + nz; }
    int a_node(int t) const { return gadget_base() + 4 * t; }
    int ap_node(int t) const { return gadget_base() + 4 * t + 1; }
    int b_node(int t) const { return gadget_base() + 4 * t + 2; }
    int bp_node(int t) const { return gadget_base() + 4 * t + 3; }
    int node_count() const { return gadget_base() + 4 * m; }

    std::vector<long long> delta;  // per node id; nonzero only on variable nodes
    std::vector<Rational> wy;      // per y variable: literal-triangle edge weight
};

struct Reduction3Output {
    WeightedGraph graph;
    GadgetLayout layout;
    std::vector<EdgeProvenance> provenance;  // parallel to graph.edges
};

inline Reduction3Output build_3color_instance(const CspInstance& inst) {
    inst.validate();
    Reduction3Output out;
    GadgetLayout& lay = out.layout;
    lay.nx = inst.nx;
    lay.ny = inst.ny;
    lay.nz = inst.nz;
    lay.m = inst.m();
    lay.delta.assign(lay.node_count(), 0);

    // each constraint adds two unit edges at its x node and at its y-literal
    // node, and one at each of its two z nodes
    for (const auto& c : inst.constraints) {
        lay.delta[lay.x_node(c.x)] += 2;
        lay.delta[c.y_negated ? lay.ybar_node(c.y) : lay.y_node(c.y)] += 2;
        lay.delta[lay.z_node(c.zk)] += 1;
        lay.delta[lay.z_node(c.zl)] += 1;
    }
    lay.wy.reserve(lay.ny);
    for (int j = 0; j < lay.ny; ++j)
        lay.wy.push_back(Rational(lay.delta[lay.y_node(j)] + lay.delta[lay.ybar_node(j)], 2));

    WeightedGraph& g = out.graph;
    g.n = lay.node_count();
    auto add = [&](int u, int v, const Rational& w, EdgeSource src, int idx) {
        if (w == 0) return;
        g.add_edge(u, v, w);
        out.provenance.push_back({src, idx});
    };

    Rational half_m(lay.m, 2);
    add(lay.R, lay.T, half_m, EdgeSource::GlobalTriangle, 0);
    add(lay.T, lay.F, half_m, EdgeSource::GlobalTriangle, 1);
    add(lay.F, lay.R, half_m, EdgeSource::GlobalTriangle, 2);
    for (int j = 0; j < lay.ny; ++j) {
        add(lay.y_node(j), lay.ybar_node(j), lay.wy[j], EdgeSource::LiteralTriangle, j);
        add(lay.y_node(j), lay.R, lay.wy[j], EdgeSource::LiteralTriangle, j);
        add(lay.ybar_node(j), lay.R, lay.wy[j], EdgeSource::LiteralTriangle, j);
    }
    for (int i = 0; i < lay.nx; ++i)
        add(lay.x_node(i), lay.R, Rational(lay.delta[lay.x_node(i)], 2), EdgeSource::RSpoke,
            lay.x_node(i));
    for (int l = 0; l < lay.nz; ++l)
        add(lay.z_node(l), lay.R, Rational(lay.delta[lay.z_node(l)], 2), EdgeSource::RSpoke,
            lay.z_node(l));
    for (int t = 0; t < lay.m; ++t) {
        const auto& c = inst.constraints[t];
        int xn = lay.x_node(c.x);
        int yn = c.y_negated ? lay.ybar_node(c.y) : lay.y_node(c.y);
        int A = lay.a_node(t), Ap = lay.ap_node(t), B = lay.b_node(t), Bp = lay.bp_node(t);
        Rational one(1);
        add(A, lay.T, one, EdgeSource::Gadget, t);
        add(A, xn, one, EdgeSource::Gadget, t);
        add(A, B, one, EdgeSource::Gadget, t);
        add(B, yn, one, EdgeSource::Gadget, t);
        add(B, lay.z_node(c.zk), one, EdgeSource::Gadget, t);
        add(Ap, lay.F, one, EdgeSource::Gadget, t);
        add(Ap, xn, one, EdgeSource::Gadget, t);
        add(Ap, Bp, one, EdgeSource::Gadget, t);
        add(Bp, yn, one, EdgeSource::Gadget, t);
        add(Bp, lay.z_node(c.zl), one, EdgeSource::Gadget, t);
    }
    g.validate();
    return out;
}

// Colors a truth assignment into a 3-coloring: T,F,R take colors 1,2,3; variable
// nodes copy T's or F's color by truth value (ybar opposite of y); each local
// pair (A,B) / (A',B') takes the first clash-free pair of suggested colors. A
// violated clause leaves exactly one miscolored unit edge (A-x or A'-x), so the
// coloring miscolors weight exactly m - c when c constraints are satisfied.
inline Coloring encode_assignment(const CspInstance& inst, const GadgetLayout& lay,
                                  const Assignment& a) {
    inst.validate();
    validate_assignment(inst, a);
    Coloring col{3, std::vector<int>(lay.node_count(), 0)};
    auto& ch = col.colors;
    const int cT = 1, cF = 2, cR = 3;
    ch[GadgetLayout::T] = cT;
    ch[GadgetLayout::F] = cF;
    ch[GadgetLayout::R] = cR;
    for (int i = 0; i < lay.nx; ++i) ch[lay.x_node(i)] = a.x[i] ? cT : cF;
    for (int j = 0; j < lay.ny; ++j) {
        ch[lay.y_node(j)] = a.y[j] ? cT : cF;
        ch[lay.ybar_node(j)] = a.y[j] ? cF : cT;
    }
    for (int l = 0; l < lay.nz; ++l) ch[lay.z_node(l)] = a.z[l] ? cT : cF;

    // pick (a_col, b_col) with a_col in [3]\{anchor, chi(x)}, b_col in
    // [3]\{chi(Y), chi(z)}, a_col != b_col; if impossible (the violated clause),
    // fall back to a_col = chi(x), clashing only on the A-x edge
    auto pick = [&](int anchor, int xcol, int ycol, int zcol) -> std::pair<int, int> {
        std::array<bool, 4> sa{}, sb{};
        for (int c = 1; c <= 3; ++c) {
            sa[c] = (c != anchor && c != xcol);
            sb[c] = (c != ycol && c != zcol);
        }
        for (int ca = 1; ca <= 3; ++ca)
            for (int cb = 1; cb <= 3; ++cb)
                if (sa[ca] && sb[cb] && ca != cb) return {ca, cb};
        for (int cb = 1; cb <= 3; ++cb)
            if (sb[cb] && cb != xcol) return {xcol, cb};
        return {xcol, xcol};  // unreachable: sb always has a color != chi(x)
    };

    for (int t = 0; t < lay.m; ++t) {
        const auto& c = inst.constraints[t];
        int xcol = ch[lay.x_node(c.x)];
        int ycol = ch[c.y_negated ? lay.ybar_node(c.y) : lay.y_node(c.y)];
        auto [ca, cb] = pick(cT, xcol, ycol, ch[lay.z_node(c.zk)]);
        ch[lay.a_node(t)] = ca;
        ch[lay.b_node(t)] = cb;
        auto [cap, cbp] = pick(cF, xcol, ycol, ch[lay.z_node(c.zl)]);
        ch[lay.ap_node(t)] = cap;
        ch[lay.bp_node(t)] = cbp;
    }
    return col;
}

struct Decode3Result {
    Assignment assignment;
    Coloring repaired;
    Rational tau;            // miscolored weight of the input coloring
    bool guarantee = false;  // tau < m/2 with distinct anchor colors
};

// Reads a truth assignment back out of any 3-coloring. Repairs first: variable
// nodes sharing R's color move to T's or F's color, y pairs that are not a
// proper (T,F)-type pair get re-paired; each repair tries both options exactly
// and keeps the cheaper one, so total miscolored weight never increases. When
// tau < m/2 the decoded assignment satisfies at least m - tau constraints.
inline Decode3Result decode_coloring(const CspInstance& inst, const Reduction3Output& red,
                                     const Coloring& input) {
    inst.validate();
    const GadgetLayout& lay = red.layout;
    const WeightedGraph& g = red.graph;
    validate_coloring(g, input);
    if (input.k != 3) throw InputError("decode expects a 3-coloring");

    Decode3Result res;
    res.tau = score(g, input).miscolored_weight;
    std::vector<int> ch = input.colors;
    const int cR = ch[GadgetLayout::R], cT = ch[GadgetLayout::T], cF = ch[GadgetLayout::F];
    bool distinct = cR != cT && cR != cF && cT != cF;
    if (!distinct && lay.m > 0 && res.tau < Rational(lay.m, 2))
        throw InputError("anchor colors collide yet tau < m/2: scores are inconsistent");
    res.guarantee = distinct && lay.m > 0 && res.tau < Rational(lay.m, 2);

    std::vector<std::vector<std::pair<int, Rational>>> adj(g.n);
    for (const auto& e : g.edges) {
        adj[e.u].push_back({e.v, e.w});
        adj[e.v].push_back({e.u, e.w});
    }
    auto incident_cost = [&](int v, int col, int skip) {
        Rational c = 0;
        for (const auto& [u, w] : adj[v])
            if (u != skip && ch[u] == col) c += w;
        return c;
    };
    // single variable node: try T's color then F's, keep the cheaper
    auto repair_single = [&](int v) {
        if (ch[v] != cR) return;
        Rational at = incident_cost(v, cT, -1), af = incident_cost(v, cF, -1);
        ch[v] = (af < at) ? cF : cT;
    };
    for (int i = 0; i < lay.nx; ++i) repair_single(lay.x_node(i));
    for (int l = 0; l < lay.nz; ++l) repair_single(lay.z_node(l));
    for (int j = 0; j < lay.ny; ++j) {
        int yv = lay.y_node(j), yb = lay.ybar_node(j);
        if (ch[yv] != cR && ch[yb] != cR && ch[yv] != ch[yb]) continue;
        Rational between = 0;
        for (const auto& [u, w] : adj[yv])
            if (u == yb) between += w;
        // cost of the pair taking (a, b): edges out of each node, plus the
        // connecting edge (proper for a != b)
        auto pair_cost = [&](int a, int b) {
            return incident_cost(yv, a, yb) + incident_cost(yb, b, yv) +
                   (a == b ? between : Rational(0));
        };
        Rational tf = pair_cost(cT, cF), ft = pair_cost(cF, cT);
        if (ft < tf) {
            ch[yv] = cF;
            ch[yb] = cT;
        } else {
            ch[yv] = cT;
            ch[yb] = cF;
        }
    }
    res.repaired = Coloring{3, ch};

    res.assignment.x.reserve(lay.nx);
    res.assignment.y.reserve(lay.ny);
    res.assignment.z.reserve(lay.nz);
    for (int i = 0; i < lay.nx; ++i) res.assignment.x.push_back(ch[lay.x_node(i)] == cT ? 1 : 0);
    for (int j = 0; j < lay.ny; ++j) res.assignment.y.push_back(ch[lay.y_node(j)] == cT ? 1 : 0);
    for (int l = 0; l < lay.nz; ++l) res.assignment.z.push_back(ch[lay.z_node(l)] == cT ? 1 : 0);
    return res;
}

}  // namespace mkcs
