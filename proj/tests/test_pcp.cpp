#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "mkcs/pcp.hpp"
#include "mkcs/serialize.hpp"
#include "support/oracles.hpp"

using namespace mkcs;

namespace {

// Position paired with l under pi (the other preimage of pi[l]).
int partner_position(const std::vector<int>& pi, int l) {
    for (int m = 0; m < static_cast<int>(pi.size()); ++m)
        if (m != l && pi[m] == pi[l]) return m;
    throw std::logic_error("no partner");
}

std::vector<int> point_digits(long long p, int k, int n) {
    std::vector<int> d(n);
    for (int t = 0; t < n; ++t) {
        d[t] = static_cast<int>(p % k);
        p /= k;
    }
    return d;
}

}  // namespace

TEST_CASE("label cover generation") {
    SECTION("planted instances are fully satisfiable") {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            auto gen = gen_label_cover(seed, 2, 4, 3, 2, true);
            REQUIRE(gen.planted.has_value());
            REQUIRE(labeling_value(gen.instance, *gen.planted) == 1);
        }
    }
    SECTION("left-regularity and projection shape") {
        auto gen = gen_label_cover(7, 3, 5, 4, 2, false);
        REQUIRE_FALSE(gen.planted.has_value());
        const auto& inst = gen.instance;
        REQUIRE(inst.degree() == 4);
        std::vector<int> deg(inst.nu, 0);
        for (const auto& e : inst.edges) {
            ++deg[e.u];
            std::vector<int> hits(inst.R, 0);
            for (int x : e.pi) ++hits[x];
            for (int h : hits) REQUIRE(h == 2);
        }
        for (int d : deg) REQUIRE(d == 4);
    }
    SECTION("same seed reproduces the instance") {
        auto a = gen_label_cover(11, 2, 5, 3, 2, true);
        auto b = gen_label_cover(11, 2, 5, 3, 2, true);
        REQUIRE(a.instance.edges.size() == b.instance.edges.size());
        for (std::size_t i = 0; i < a.instance.edges.size(); ++i) {
            REQUIRE(a.instance.edges[i].u == b.instance.edges[i].u);
            REQUIRE(a.instance.edges[i].v == b.instance.edges[i].v);
            REQUIRE(a.instance.edges[i].pi == b.instance.edges[i].pi);
        }
        REQUIRE(a.planted->ell_u == b.planted->ell_u);
        REQUIRE(a.planted->ell_v == b.planted->ell_v);
    }
    SECTION("infeasible degree is refused") {
        REQUIRE_THROWS_AS(gen_label_cover(1, 2, 3, 4, 2, true), InputError);
    }
}

TEST_CASE("canonical coordinate permutation") {
    SECTION("already-sorted projections give the identity") {
        std::vector<int> pi{0, 0, 1, 1, 2, 2};
        auto sigma = sigma_for(pi, 3);
        for (int l = 0; l < 6; ++l) REQUIRE(sigma[l] == l);
    }
    SECTION("permutes and aligns blocks") {
        Rng rng(13);
        for (int it = 0; it < 100; ++it) {
            auto gen = gen_label_cover(100 + it, 1, 2, 1, 1 + rng.below_int(3), false);
            const auto& e = gen.instance.edges[0];
            auto sigma = sigma_for(e.pi, gen.instance.R);
            auto sorted = sigma;
            std::sort(sorted.begin(), sorted.end());
            for (int l = 0; l < static_cast<int>(sigma.size()); ++l) {
                REQUIRE(sorted[l] == l);          // bijection
                REQUIRE(e.pi[l] == sigma[l] / 2);  // block i lands on {2i, 2i+1}
            }
        }
    }
    SECTION("rejects malformed projections") {
        REQUIRE_THROWS_AS(sigma_for({0, 0, 0, 1}, 2), InputError);
        REQUIRE_THROWS_AS(sigma_for({0, 0, 1}, 2), InputError);
        REQUIRE_THROWS_AS(sigma_for({0, 0, 2, 2}, 2), InputError);
    }
}

TEST_CASE("dictator tables") {
    SECTION("values read the chosen coordinate") {
        auto tbl = long_code_encode(2, 4, 4);
        REQUIRE(tbl.size() == 256);
        for (long long p = 0; p < 256; ++p) REQUIRE(tbl[p] == point_digits(p, 4, 4)[2] + 1);
        REQUIRE_THROWS_AS(long_code_encode(4, 4, 4), InputError);
    }
    SECTION("composition relabels the dictator coordinate") {
        Rng rng(17);
        for (int it = 0; it < 20; ++it) {
            auto gen = gen_label_cover(300 + it, 1, 2, 1, 2, false);
            auto sigma = sigma_for(gen.instance.edges[0].pi, 2);
            int ell = rng.below_int(4);
            auto composed = compose_table(long_code_encode(ell, 4, 3), sigma, 3);
            REQUIRE(composed == long_code_encode(sigma[ell], 4, 3));
        }
    }
    SECTION("pair regrouping is flat-index invariant") {
        Rng rng(19);
        for (int it = 0; it < 50; ++it) {
            int k = 4 + rng.below_int(3);
            std::vector<int> x(4);
            for (int& v : x) v = rng.below_int(k);
            long long flat_x = 0;
            for (int t = 3; t >= 0; --t) flat_x = flat_x * k + x[t];
            auto y = bar_point(x, k);
            long long flat_y = 0;
            for (int t = 1; t >= 0; --t) flat_y = flat_y * (k * k) + y[t];
            REQUIRE(flat_x == flat_y);
        }
    }
}

TEST_CASE("acceptance probability") {
    SECTION("planted proofs pass with probability exactly one") {
        int combo = 0;
        for (int R : {1, 2})
            for (int k : {4, 6}) {
                ++combo;
                auto gen = gen_label_cover(500 + combo, 1 + combo % 2, 3, 2, R, true);
                auto proof = long_code_proof(gen.instance, *gen.planted, k);
                REQUIRE(acceptance_probability(gen.instance, proof) == 1);
            }
    }
    SECTION("identical constant tables never pass") {
        auto gen = gen_label_cover(41, 2, 3, 2, 1, true);
        LongCodeProof proof;
        proof.k = 4;
        proof.R = 1;
        proof.tables.assign(3, std::vector<int>(16, 2));
        REQUIRE(acceptance_probability(gen.instance, proof) == 0);
    }
    SECTION("random proofs agree with the sampling oracle") {
        Rng rng(47);
        auto gen = gen_label_cover(53, 1, 2, 2, 1, false);
        LongCodeProof proof;
        proof.k = 4;
        proof.R = 1;
        for (int v = 0; v < 2; ++v) {
            std::vector<int> tbl(16);
            for (int& c : tbl) c = 1 + rng.below_int(4);
            proof.tables.push_back(std::move(tbl));
        }
        auto p = acceptance_probability(gen.instance, proof);
        REQUIRE(p >= 0);
        REQUIRE(p <= 1);
        double sampled = oracle::mc_acceptance(gen.instance, proof, 200000, 99);
        REQUIRE(std::abs(sampled - to_double(p)) < 0.01);
    }
    SECTION("budget and parameter refusals") {
        auto gen = gen_label_cover(59, 2, 3, 2, 2, true);
        auto proof = long_code_proof(gen.instance, *gen.planted, 4);
        REQUIRE_THROWS_AS(acceptance_probability(gen.instance, proof, 1000), BudgetError);
        auto p3 = long_code_proof(gen.instance, *gen.planted, 3);
        REQUIRE_THROWS_AS(acceptance_probability(gen.instance, p3), InputError);
        // tables beyond the point cap are rejected before any enumeration
        LongCodeProof huge;
        huge.k = 6;
        huge.R = 9;
        REQUIRE_THROWS_AS(huge.validate(gen.instance), InputError);
        LabelCoverInstance big = gen.instance;
        big.R = 9;
        huge.tables.assign(3, std::vector<int>{});
        REQUIRE_THROWS_AS(huge.validate(big), BudgetError);
    }
}

TEST_CASE("proof perturbations") {
    // one edge per v-side vertex, so each table has a single pairing to respect
    auto gen = gen_label_cover(61, 1, 2, 2, 2, true);
    const auto& inst = gen.instance;
    const int k = 4;
    auto proof = long_code_proof(inst, *gen.planted, k);
    REQUIRE(acceptance_probability(inst, proof) == 1);

    const auto& e = inst.edges[0];
    int lv = gen.planted->ell_v[e.v];
    int partner = partner_position(e.pi, lv);

    long long p = -1;
    std::vector<int> digits;
    for (long long cand = 0; cand < 256 && p < 0; ++cand) {
        digits = point_digits(cand, k, 4);
        if (digits[partner] != digits[lv]) p = cand;
    }
    REQUIRE(p >= 0);

    SECTION("rewriting one entry to the paired coordinate still passes") {
        auto flipped = proof;
        flipped.tables[e.v][p] = digits[partner] + 1;
        REQUIRE(flipped.tables[e.v][p] != proof.tables[e.v][p]);
        REQUIRE(acceptance_probability(inst, flipped) == 1);
    }
    SECTION("rewriting one entry off both pair digits strictly fails") {
        int w = 0;
        while (w == digits[lv] || w == digits[partner]) ++w;
        auto flipped = proof;
        flipped.tables[e.v][p] = w + 1;
        auto acc = acceptance_probability(inst, flipped);
        REQUIRE(acc < 1);
        REQUIRE(acc > 0);
    }
}

TEST_CASE("influence decoding") {
    SECTION("planted proofs decode back to the planted labeling") {
        for (int k : {4, 6}) {
            auto gen = gen_label_cover(67 + k, 2, 3, 2, 2, true);
            auto proof = long_code_proof(gen.instance, *gen.planted, k);
            auto rep = influence_decode(gen.instance, proof);
            for (int u = 0; u < gen.instance.nu; ++u)
                REQUIRE(rep.sugg_u[u] == std::vector<int>{gen.planted->ell_u[u]});
            for (int v = 0; v < gen.instance.nv; ++v)
                REQUIRE(rep.sugg_v[v] == std::vector<int>{gen.planted->ell_v[v]});
            REQUIRE(rep.satisfied == static_cast<long long>(gen.instance.edges.size()));
            REQUIRE(rep.value == 1);
        }
    }
    SECTION("constant tables suggest nothing") {
        auto gen = gen_label_cover(71, 1, 2, 2, 1, true);
        LongCodeProof proof;
        proof.k = 4;
        proof.R = 1;
        proof.tables.assign(2, std::vector<int>(16, 3));
        auto rep = influence_decode(gen.instance, proof);
        for (const auto& s : rep.sugg_u) REQUIRE(s.empty());
        for (const auto& s : rep.sugg_v) REQUIRE(s.empty());
        for (int l : rep.labeling.ell_u) REQUIRE(l == 0);
        for (int l : rep.labeling.ell_v) REQUIRE(l == 0);
    }
    SECTION("suggestion lists respect the counting bound") {
        Rng rng(73);
        const int t = 2;
        const double delta = 0.1;
        for (int it = 0; it < 5; ++it) {
            auto gen = gen_label_cover(80 + it, 2, 3, 2, 2, false);
            LongCodeProof proof;
            proof.k = 4;
            proof.R = 2;
            for (int v = 0; v < 3; ++v) {
                std::vector<int> tbl(256);
                for (int& c : tbl) c = 1 + rng.below_int(4);
                proof.tables.push_back(std::move(tbl));
            }
            auto rep = influence_decode(gen.instance, proof, t, delta);
            for (const auto& s : rep.sugg_u)
                REQUIRE(static_cast<double>(s.size()) <= t / delta);
            for (const auto& s : rep.sugg_v)
                REQUIRE(static_cast<double>(s.size()) <= 2 * t / (delta / 4));
        }
        auto gen = gen_label_cover(90, 1, 2, 2, 1, true);
        auto proof = long_code_proof(gen.instance, *gen.planted, 4);
        REQUIRE_THROWS_AS(influence_decode(gen.instance, proof, -1, 0.1), InputError);
        REQUIRE_THROWS_AS(influence_decode(gen.instance, proof, 2, 0.0), InputError);
    }
}

TEST_CASE("proof bundle serialization") {
    auto gen = gen_label_cover(101, 2, 3, 2, 2, true);
    auto proof = long_code_proof(gen.instance, *gen.planted, 4);

    SECTION("instance round trip") {
        auto j = label_cover_to_json(gen.instance);
        auto back = label_cover_from_json(j);
        REQUIRE(back.nu == gen.instance.nu);
        REQUIRE(back.nv == gen.instance.nv);
        REQUIRE(back.R == gen.instance.R);
        REQUIRE(back.edges.size() == gen.instance.edges.size());
        for (std::size_t i = 0; i < back.edges.size(); ++i)
            REQUIRE(back.edges[i].pi == gen.instance.edges[i].pi);
    }
    SECTION("bundle round trip keeps the planted labeling") {
        ProofBundle bundle{gen.instance, proof, gen.planted};
        auto j = proof_bundle_to_json(bundle.instance, bundle.proof, bundle.planted);
        auto back = proof_bundle_from_json(j);
        REQUIRE(back.proof.k == 4);
        REQUIRE(back.proof.tables == proof.tables);
        REQUIRE(back.planted.has_value());
        REQUIRE(back.planted->ell_v == gen.planted->ell_v);
        REQUIRE(acceptance_probability(back.instance, back.proof) == 1);
    }
    SECTION("malformed bundles are rejected") {
        ProofBundle bundle{gen.instance, proof, gen.planted};
        auto j = proof_bundle_to_json(bundle.instance, bundle.proof, bundle.planted);
        auto broken = j;
        broken.erase("k");
        REQUIRE_THROWS_AS(proof_bundle_from_json(broken), InputError);
        broken = j;
        broken["tables"][0] = Json::array({1, 2, 3});
        REQUIRE_THROWS_AS(proof_bundle_from_json(broken), InputError);
        broken = j;
        broken["instance"]["edges"][0]["pi"] = Json::array({0, 0, 0, 1});
        REQUIRE_THROWS_AS(proof_bundle_from_json(broken), InputError);
    }
}
