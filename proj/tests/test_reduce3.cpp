#include <catch2/catch_amalgamated.hpp>

#include "mkcs/reduce3.hpp"
#include "mkcs/serialize.hpp"
#include "support/oracles.hpp"

using namespace mkcs;

namespace {

// The ten gadget edges by role, coded here from scratch so the built edge
// list has an independent cross-check. Roles: 0=R 1=T 2=F 3=x 4=Y 5=zk 6=zl
// 7=A 8=A' 9=B 10=B'.
constexpr int kGadgetEdges[10][2] = {{7, 1}, {7, 3}, {7, 9},  {9, 4}, {9, 5},
                                     {8, 2}, {8, 3}, {8, 10}, {10, 4}, {10, 6}};

// Minimum miscolored gadget-edge count over all 3^4 colorings of A, A', B, B'
// given fixed boundary colors (by role), found by plain enumeration.
int min_gadget_miscolored(const std::array<int, 7>& boundary) {
    int best = 10;
    int internal[4];
    for (int m0 = 1; m0 <= 3; ++m0)
        for (int m1 = 1; m1 <= 3; ++m1)
            for (int m2 = 1; m2 <= 3; ++m2)
                for (int m3 = 1; m3 <= 3; ++m3) {
                    internal[0] = m0;  // A
                    internal[1] = m1;  // A'
                    internal[2] = m2;  // B
                    internal[3] = m3;  // B'
                    auto color_of = [&](int role) {
                        return role < 7 ? boundary[role] : internal[role - 7];
                    };
                    int bad = 0;
                    for (const auto& e : kGadgetEdges)
                        if (color_of(e[0]) == color_of(e[1])) ++bad;
                    best = std::min(best, bad);
                }
    return best;
}

}  // namespace

TEST_CASE("gadget layout arithmetic") {
    SECTION("node count and degree table") {
        auto [inst, a] = generate_planted(5, 2, 2, 3, 4);
        auto red = build_3color_instance(inst);
        const auto& lay = red.layout;
        REQUIRE(lay.node_count() == 3 + 2 + 2 * 2 + 3 + 4 * 4);
        REQUIRE(red.graph.n == lay.node_count());
        // per constraint: x +2, chosen literal +2, zk +1, zl +1
        std::vector<long long> want(lay.node_count(), 0);
        for (const auto& c : inst.constraints) {
            want[lay.x_node(c.x)] += 2;
            want[c.y_negated ? lay.ybar_node(c.y) : lay.y_node(c.y)] += 2;
            want[lay.z_node(c.zk)] += 1;
            want[lay.z_node(c.zl)] += 1;
        }
        REQUIRE(lay.delta == want);
        for (int j = 0; j < lay.ny; ++j)
            REQUIRE(lay.wy[j] ==
                    Rational(lay.delta[lay.y_node(j)] + lay.delta[lay.ybar_node(j)], 2));
    }
    SECTION("single-constraint example") {
        CspInstance inst{1, 1, 2, {Constraint{0, 0, false, 0, 1}}};
        auto red = build_3color_instance(inst);
        const auto& lay = red.layout;
        REQUIRE(lay.wy[0] == 1);  // (2+0)/2
        REQUIRE(lay.delta[lay.x_node(0)] == 2);
        REQUIRE(lay.delta[lay.z_node(0)] == 1);
        REQUIRE(lay.delta[lay.z_node(1)] == 1);
    }
    SECTION("degree-sum identities") {
        auto inst = generate_random(8, 3, 2, 2, 6);
        auto red = build_3color_instance(inst);
        const auto& lay = red.layout;
        long long sx = 0, sy = 0, sz = 0;
        for (int i = 0; i < lay.nx; ++i) sx += lay.delta[lay.x_node(i)];
        for (int j = 0; j < lay.ny; ++j)
            sy += lay.delta[lay.y_node(j)] + lay.delta[lay.ybar_node(j)];
        for (int l = 0; l < lay.nz; ++l) sz += lay.delta[lay.z_node(l)];
        REQUIRE(sx == 2 * inst.m());
        REQUIRE(sy == 2 * inst.m());
        REQUIRE(sz == 2 * inst.m());
    }
}

TEST_CASE("built graph weights") {
    SECTION("total weight identity") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto inst = generate_random(seed, 3, 3, 3, 1 + static_cast<int>(seed % 9));
            auto red = build_3color_instance(inst);
            REQUIRE(red.graph.total_weight() == Rational(33 * inst.m(), 2));
        }
    }
    SECTION("empty instance has no edges") {
        CspInstance inst{2, 1, 1, {}};
        auto red = build_3color_instance(inst);
        REQUIRE(red.graph.edges.empty());
        REQUIRE(red.graph.n == 3 + 2 + 2 + 1);
    }
    SECTION("edge composition and provenance") {
        auto [inst, a] = generate_planted(3, 2, 2, 2, 5);
        auto red = build_3color_instance(inst);
        REQUIRE(red.provenance.size() == red.graph.edges.size());
        const auto& lay = red.layout;
        Rational half_m(inst.m(), 2);
        int globals = 0, gadget_units = 0;
        for (std::size_t i = 0; i < red.graph.edges.size(); ++i) {
            const auto& e = red.graph.edges[i];
            switch (red.provenance[i].source) {
                case EdgeSource::GlobalTriangle:
                    REQUIRE(e.w == half_m);
                    ++globals;
                    break;
                case EdgeSource::LiteralTriangle:
                    REQUIRE(e.w == lay.wy[red.provenance[i].index]);
                    break;
                case EdgeSource::RSpoke: {
                    int var = red.provenance[i].index;
                    REQUIRE((e.u == GadgetLayout::R || e.v == GadgetLayout::R));
                    REQUIRE(e.w == Rational(lay.delta[var], 2));
                    break;
                }
                case EdgeSource::Gadget:
                    REQUIRE(e.w == 1);
                    ++gadget_units;
                    break;
            }
        }
        REQUIRE(globals == 3);
        REQUIRE(gadget_units == 10 * inst.m());
    }
}

TEST_CASE("local gadget oracle") {
    // For all 16 truth settings of (x, Y, zk, zl): extendable to fully proper
    // iff the constraint holds; violated settings still reach exactly one
    // miscolored edge. Checked on the built edge list and on the hand-coded
    // role list, which must agree.
    CspInstance inst{1, 1, 2, {Constraint{0, 0, false, 0, 1}}};
    auto red = build_3color_instance(inst);
    const auto& lay = red.layout;

    // gadget edge ids from the built graph
    std::vector<std::pair<int, int>> built;
    for (std::size_t i = 0; i < red.graph.edges.size(); ++i)
        if (red.provenance[i].source == EdgeSource::Gadget)
            built.push_back({red.graph.edges[i].u, red.graph.edges[i].v});
    REQUIRE(built.size() == 10);

    const int cT = 1, cF = 2, cR = 3;
    for (int mask = 0; mask < 16; ++mask) {
        Assignment a{{static_cast<std::uint8_t>(mask & 1)},
                     {static_cast<std::uint8_t>((mask >> 1) & 1)},
                     {static_cast<std::uint8_t>((mask >> 2) & 1),
                      static_cast<std::uint8_t>((mask >> 3) & 1)}};
        bool sat = eval_constraint(inst.constraints[0], a);

        auto truth_color = [&](int b) { return b ? cT : cF; };
        std::array<int, 7> boundary = {cR,
                                       cT,
                                       cF,
                                       truth_color(a.x[0]),
                                       truth_color(a.y[0]),
                                       truth_color(a.z[0]),
                                       truth_color(a.z[1])};
        int want = min_gadget_miscolored(boundary);
        REQUIRE(want == (sat ? 0 : 1));

        // same enumeration over the built edges
        std::vector<int> col(lay.node_count(), 0);
        col[GadgetLayout::R] = cR;
        col[GadgetLayout::T] = cT;
        col[GadgetLayout::F] = cF;
        col[lay.x_node(0)] = truth_color(a.x[0]);
        col[lay.y_node(0)] = truth_color(a.y[0]);
        col[lay.ybar_node(0)] = truth_color(1 - a.y[0]);
        col[lay.z_node(0)] = truth_color(a.z[0]);
        col[lay.z_node(1)] = truth_color(a.z[1]);
        int best = 10;
        for (int m0 = 1; m0 <= 3; ++m0)
            for (int m1 = 1; m1 <= 3; ++m1)
                for (int m2 = 1; m2 <= 3; ++m2)
                    for (int m3 = 1; m3 <= 3; ++m3) {
                        col[lay.a_node(0)] = m0;
                        col[lay.ap_node(0)] = m1;
                        col[lay.b_node(0)] = m2;
                        col[lay.bp_node(0)] = m3;
                        int bad = 0;
                        for (const auto& [u, v] : built)
                            if (col[u] == col[v]) ++bad;
                        best = std::min(best, bad);
                    }
        REQUIRE(best == want);
    }
}

TEST_CASE("encoder") {
    SECTION("planted assignments encode to proper colorings") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            auto [inst, a] = generate_planted(seed, 3, 2, 3, 7);
            auto red = build_3color_instance(inst);
            auto chi = encode_assignment(inst, red.layout, a);
            REQUIRE(score(red.graph, chi).miscolored_weight == 0);
        }
    }
    SECTION("anchors pairwise distinct, variables consistent") {
        auto [inst, a] = generate_planted(4, 2, 2, 2, 4);
        auto red = build_3color_instance(inst);
        auto chi = encode_assignment(inst, red.layout, a);
        REQUIRE(chi.colors[GadgetLayout::T] != chi.colors[GadgetLayout::F]);
        REQUIRE(chi.colors[GadgetLayout::T] != chi.colors[GadgetLayout::R]);
        REQUIRE(chi.colors[GadgetLayout::F] != chi.colors[GadgetLayout::R]);
        for (int j = 0; j < red.layout.ny; ++j)
            REQUIRE(chi.colors[red.layout.y_node(j)] != chi.colors[red.layout.ybar_node(j)]);
    }
    SECTION("arbitrary assignment miscolors at most m - c, all inside gadgets") {
        Rng rng(17);
        for (int it = 0; it < 30; ++it) {
            auto inst = generate_random(100 + it, 2, 2, 2, 6);
            Assignment a;
            for (int i = 0; i < 2; ++i) a.x.push_back(static_cast<std::uint8_t>(rng.flip()));
            for (int i = 0; i < 2; ++i) a.y.push_back(static_cast<std::uint8_t>(rng.flip()));
            for (int i = 0; i < 2; ++i) a.z.push_back(static_cast<std::uint8_t>(rng.flip()));
            auto red = build_3color_instance(inst);
            auto chi = encode_assignment(inst, red.layout, a);
            int c = count_satisfied(inst, a);
            auto rep = score(red.graph, chi);
            REQUIRE(rep.miscolored_weight <= inst.m() - c);
            for (std::size_t i = 0; i < red.graph.edges.size(); ++i) {
                const auto& e = red.graph.edges[i];
                if (chi.colors[e.u] == chi.colors[e.v]) {
                    REQUIRE(red.provenance[i].source == EdgeSource::Gadget);
                    REQUIRE(e.w == 1);
                }
            }
        }
    }
}

TEST_CASE("decoder") {
    SECTION("round trip on planted instances") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            auto [inst, a] = generate_planted(seed, 3, 2, 2, 6);
            auto red = build_3color_instance(inst);
            auto chi = encode_assignment(inst, red.layout, a);
            auto dec = decode_coloring(inst, red, chi);
            REQUIRE(dec.tau == 0);
            REQUIRE(dec.guarantee);
            REQUIRE(count_satisfied(inst, dec.assignment) == inst.m());
        }
    }
    SECTION("perturbed colorings keep the guarantee") {
        Rng rng(23);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto [inst, a] = generate_planted(seed, 2, 2, 2, 6);
            auto red = build_3color_instance(inst);
            auto chi = encode_assignment(inst, red.layout, a);
            for (int flips = 0; flips < 3; ++flips)
                chi.colors[rng.below_int(red.graph.n)] = 1 + rng.below_int(3);
            auto dec = decode_coloring(inst, red, chi);
            REQUIRE(dec.tau == score(red.graph, chi).miscolored_weight);
            if (dec.guarantee) {
                REQUIRE(Rational(count_satisfied(inst, dec.assignment)) >=
                        Rational(inst.m()) - dec.tau);
                REQUIRE(score(red.graph, dec.repaired).miscolored_weight <= dec.tau);
            }
        }
    }
    SECTION("exhaustive sweep of a one-constraint instance") {
        CspInstance inst{1, 1, 2, {Constraint{0, 0, false, 0, 1}}};
        auto red = build_3color_instance(inst);
        auto scaled = scale_weights(red.graph);
        // anchors fixed: every coloring is equivalent to one of these under
        // renaming colors
        oracle::IncrementalSweep sweep(red.graph, scaled.w, 3, 3, {1, 2, 3});
        // note vertex order: ids 0,1,2 are R,T,F; fix colors 1,2,3 there
        long long checked = 0;
        do {
            Rational tau(sweep.miscolored(), scaled.scale);
            if (2 * tau < inst.m()) {
                Coloring chi{3, sweep.colors()};
                auto dec = decode_coloring(inst, red, chi);
                REQUIRE(dec.guarantee);
                REQUIRE(Rational(count_satisfied(inst, dec.assignment)) >=
                        Rational(inst.m()) - tau);
                ++checked;
            }
        } while (sweep.advance());
        REQUIRE(checked > 0);
    }
    SECTION("colliding anchors void the guarantee") {
        CspInstance inst{1, 1, 2, {Constraint{0, 0, false, 0, 1}}};
        auto red = build_3color_instance(inst);
        Coloring chi{3, std::vector<int>(red.graph.n, 1)};
        auto dec = decode_coloring(inst, red, chi);
        REQUIRE_FALSE(dec.guarantee);
        REQUIRE(2 * dec.tau >= inst.m());
    }
    SECTION("wrong palette size rejected") {
        CspInstance inst{1, 1, 2, {Constraint{0, 0, false, 0, 1}}};
        auto red = build_3color_instance(inst);
        Coloring chi{4, std::vector<int>(red.graph.n, 1)};
        REQUIRE_THROWS_AS(decode_coloring(inst, red, chi), InputError);
    }
}

TEST_CASE("reduction layout serialization") {
    auto [inst, a] = generate_planted(55, 2, 2, 2, 3);
    auto red = build_3color_instance(inst);
    auto j = reduce3_layout_to_json(red.layout, red.provenance);
    auto back = reduce3_layout_from_json(j);
    REQUIRE(back.layout.node_count() == red.layout.node_count());
    REQUIRE(back.layout.delta == red.layout.delta);
    REQUIRE(back.layout.wy == red.layout.wy);
    REQUIRE(back.provenance.size() == red.provenance.size());
    for (std::size_t i = 0; i < back.provenance.size(); ++i) {
        REQUIRE(back.provenance[i].source == red.provenance[i].source);
        REQUIRE(back.provenance[i].index == red.provenance[i].index);
    }
}
