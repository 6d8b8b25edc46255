#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mkcs/errors.hpp"
#include "mkcs/fourier.hpp"
#include "mkcs/rational.hpp"
#include "mkcs/rng.hpp"
#include "mkcs/spectral.hpp"

namespace mkcs {

// Bipartite label-cover with exactly-2-to-1 projections: u-side labels live in
// [R], v-side labels in [2R], and each edge carries pi: [2R] -> [R] hitting
// every value exactly twice. Labels are 0-based throughout.
struct LabelCoverEdge {
    int u = 0;
    int v = 0;
    std::vector<int> pi;
};

struct LabelCoverInstance {
    int nu = 0;
    int nv = 0;
    int R = 0;
    std::vector<LabelCoverEdge> edges;

    // Common u-side degree; validate() enforces that it is common.
    int degree() const {
        if (nu == 0) return 0;
        return static_cast<int>(edges.size()) / nu;
    }

    void validate() const {
        if (nu < 1 || nv < 1 || R < 1) throw InputError("label cover needs nu, nv, R >= 1");
        if (edges.empty() || edges.size() % static_cast<std::size_t>(nu) != 0)
            throw InputError("edge count must be a positive multiple of nu");
        std::vector<int> deg(nu, 0);
        for (const auto& e : edges) {
            if (e.u < 0 || e.u >= nu || e.v < 0 || e.v >= nv)
                throw InputError("edge endpoint out of range");
            ++deg[e.u];
            if (static_cast<int>(e.pi.size()) != 2 * R)
                throw InputError("projection must have 2R entries");
            std::vector<int> hits(R, 0);
            for (int x : e.pi) {
                if (x < 0 || x >= R) throw InputError("projection value out of range");
                ++hits[x];
            }
            for (int h : hits)
                if (h != 2) throw InputError("projection is not exactly 2-to-1");
        }
        int d = deg[0];
        for (int x : deg)
            if (x != d) throw InputError("u-side degrees are not uniform");
    }
};

struct Labeling {
    std::vector<int> ell_u;  // values in [R]
    std::vector<int> ell_v;  // values in [2R]
};

inline long long satisfied_edges(const LabelCoverInstance& inst, const Labeling& lab) {
    if (static_cast<int>(lab.ell_u.size()) != inst.nu ||
        static_cast<int>(lab.ell_v.size()) != inst.nv)
        throw InputError("labeling size mismatch");
    long long sat = 0;
    for (const auto& e : inst.edges) {
        int lv = lab.ell_v[e.v];
        if (lv < 0 || lv >= 2 * inst.R) throw InputError("v-label out of range");
        int lu = lab.ell_u[e.u];
        if (lu < 0 || lu >= inst.R) throw InputError("u-label out of range");
        if (e.pi[lv] == lu) ++sat;
    }
    return sat;
}

inline Rational labeling_value(const LabelCoverInstance& inst, const Labeling& lab) {
    return Rational(satisfied_edges(inst, lab), static_cast<long long>(inst.edges.size()));
}

struct GeneratedLabelCover {
    LabelCoverInstance instance;
    std::optional<Labeling> planted;
};

// Random left-regular instance; each u gets `degree` distinct neighbors and a
// fresh random pair-partition as its projection. With `satisfiable`, planted
// labels are drawn first and every projection gets the block containing the
// v-label relabeled onto the u-label, so the planted labeling satisfies all
// edges by construction.
inline GeneratedLabelCover gen_label_cover(std::uint64_t seed, int nu, int nv, int degree, int R,
                                           bool satisfiable) {
    if (nu < 1 || nv < 1 || R < 1) throw InputError("label cover needs nu, nv, R >= 1");
    if (degree < 1 || degree > nv)
        throw InputError("infeasible degree: each u needs that many distinct neighbors");
    Rng rng(seed);
    GeneratedLabelCover out;
    out.instance.nu = nu;
    out.instance.nv = nv;
    out.instance.R = R;

    Labeling lab;
    if (satisfiable) {
        lab.ell_u.resize(nu);
        lab.ell_v.resize(nv);
        for (int u = 0; u < nu; ++u) lab.ell_u[u] = rng.below_int(R);
        for (int v = 0; v < nv; ++v) lab.ell_v[v] = rng.below_int(2 * R);
    }

    std::vector<int> pool(nv);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> positions(2 * R);
    for (int u = 0; u < nu; ++u) {
        rng.shuffle(pool);
        std::vector<int> nbrs(pool.begin(), pool.begin() + degree);
        std::sort(nbrs.begin(), nbrs.end());
        for (int v : nbrs) {
            std::iota(positions.begin(), positions.end(), 0);
            rng.shuffle(positions);
            LabelCoverEdge e;
            e.u = u;
            e.v = v;
            e.pi.assign(2 * R, 0);
            for (int i = 0; i < R; ++i) {
                e.pi[positions[2 * i]] = i;
                e.pi[positions[2 * i + 1]] = i;
            }
            if (satisfiable) {
                int want = lab.ell_u[u];
                int have = e.pi[lab.ell_v[v]];
                if (have != want)
                    for (int& x : e.pi) {
                        if (x == have) x = want;
                        else if (x == want) x = have;
                    }
            }
            out.instance.edges.push_back(std::move(e));
        }
    }
    if (satisfiable) out.planted = std::move(lab);
    out.instance.validate();
    return out;
}

// Canonical coordinate permutation for a 2-to-1 projection: block i's sorted
// preimage pair {a < b} goes to positions {2i, 2i+1}, i.e. sigma[a] = 2i,
// sigma[b] = 2i+1. Then pi(sigma^{-1}(2i)) = pi(sigma^{-1}(2i+1)) = i, so any
// two projections' canonical permutations align block-by-block.
inline std::vector<int> sigma_for(const std::vector<int>& pi, int R) {
    if (static_cast<int>(pi.size()) != 2 * R) throw InputError("projection must have 2R entries");
    std::vector<int> first(R, -1), second(R, -1);
    for (int l = 0; l < 2 * R; ++l) {
        int i = pi[l];
        if (i < 0 || i >= R) throw InputError("projection value out of range");
        if (first[i] < 0) first[i] = l;
        else if (second[i] < 0) second[i] = l;
        else throw InputError("projection is not exactly 2-to-1");
    }
    std::vector<int> sigma(2 * R);
    for (int i = 0; i < R; ++i) {
        if (second[i] < 0) throw InputError("projection is not exactly 2-to-1");
        sigma[first[i]] = 2 * i;
        sigma[second[i]] = 2 * i + 1;
    }
    return sigma;
}

// Table of f composed with sigma under the convention (f.sigma)(x) = f(x.sigma)
// with (x.sigma)_t = x_{sigma(t)}. Tables are flat little-endian over [k]^{2R}.
inline std::vector<int> compose_table(const std::vector<int>& table, const std::vector<int>& sigma,
                                      int k) {
    int n = static_cast<int>(sigma.size());
    long long pts = checked_table_points(k, n);
    if (static_cast<long long>(table.size()) != pts) throw InputError("table size mismatch");
    std::vector<int> out(table.size());
    std::vector<int> digits(n);
    for (long long p = 0; p < pts; ++p) {
        long long rem = p;
        for (int t = 0; t < n; ++t) {
            digits[t] = static_cast<int>(rem % k);
            rem /= k;
        }
        long long src = 0;
        for (int t = n - 1; t >= 0; --t) src = src * k + digits[sigma[t]];
        out[p] = table[src];
    }
    return out;
}

// Dictator table for a label: value at x is coordinate `ell` of x, as a color
// in 1..k. Composition sends the dictator coordinate ell to sigma(ell).
inline std::vector<int> long_code_encode(int ell, int two_r, int k) {
    if (ell < 0 || ell >= two_r) throw InputError("label out of range");
    long long pts = checked_table_points(k, two_r);
    std::vector<int> table(pts);
    long long stride = 1;
    for (int t = 0; t < ell; ++t) stride *= k;
    for (long long p = 0; p < pts; ++p) table[p] = static_cast<int>((p / stride) % k) + 1;
    return table;
}

// One color table per v-side vertex, over [k]^{2R}, values in 1..k.
struct LongCodeProof {
    int k = 0;
    int R = 0;
    std::vector<std::vector<int>> tables;

    void validate(const LabelCoverInstance& inst) const {
        if (k < 2) throw InputError("proof needs k >= 2");
        if (R != inst.R) throw InputError("proof R does not match instance");
        if (static_cast<int>(tables.size()) != inst.nv)
            throw InputError("proof must carry one table per v-side vertex");
        long long pts = checked_table_points(k, 2 * R);
        for (const auto& t : tables) {
            if (static_cast<long long>(t.size()) != pts) throw InputError("table size mismatch");
            for (int c : t)
                if (c < 1 || c > k) throw InputError("table entry out of color range");
        }
    }
};

inline LongCodeProof long_code_proof(const LabelCoverInstance& inst, const Labeling& lab, int k) {
    LongCodeProof proof;
    proof.k = k;
    proof.R = inst.R;
    proof.tables.reserve(inst.nv);
    for (int v = 0; v < inst.nv; ++v)
        proof.tables.push_back(long_code_encode(lab.ell_v[v], 2 * inst.R, k));
    proof.validate(inst);
    return proof;
}

namespace detail {

// Integer numerators of the disjoint-pair operator over the common denominator
// (k-1)(k-2)(k-3): alpha-case entries scale to k-2, beta-case to k-3.
inline std::vector<std::int64_t> pair_operator_numerators(int k) {
    if (k < 4) throw InputError("pair operator needs k >= 4");
    int Q = k * k;
    std::vector<std::int64_t> numer(static_cast<std::size_t>(Q) * Q, 0);
    for (int x = 0; x < Q; ++x) {
        for (int y = 0; y < Q; ++y) {
            switch (dmr_case(x % k, x / k, y % k, y / k)) {
                case DmrCase::Alpha: numer[static_cast<std::size_t>(x) * Q + y] = k - 2; break;
                case DmrCase::Beta: numer[static_cast<std::size_t>(x) * Q + y] = k - 3; break;
                case DmrCase::Zero: break;
            }
        }
    }
    return numer;
}

}  // namespace detail

// Exact acceptance probability of the two-query color test: pick u uniformly,
// v and v' uniformly and independently among u's neighbors, x uniform on
// [k^2]^R, y coordinate-wise from the disjoint-pair operator at x, and accept
// iff the two composed tables disagree: table_v(sigma_v applied to x-as-pairs)
// != table_v'(sigma_v' applied to y-as-pairs).
//
// Computed through the complement: per (u, v, v') the rejection mass is
// sum_x N(x, A(x)) where N(x, j) counts, with integer transition numerators,
// the y with B(y) = j; everything stays integral until the final division by
// |U| * deg^2 * (k^2)^R * ((k-1)(k-2)(k-3))^R. Pair regrouping [k]^{2R} ->
// [k^2]^R is flat-index-invariant, so composed tables are reused directly.
inline Rational acceptance_probability(const LabelCoverInstance& inst, const LongCodeProof& proof,
                                       std::int64_t budget = 100'000'000) {
    inst.validate();
    proof.validate(inst);
    int k = proof.k;
    if (k < 4) throw InputError("acceptance test needs k >= 4");
    int R = inst.R;
    int Q = k * k;
    long long pts = checked_table_points(k, 2 * R);  // == Q^R

    int deg = inst.degree();
    BigInt d1 = BigInt(k - 1) * (k - 2) * (k - 3);
    BigInt per_triple_max = BigInt(pts) * boost::multiprecision::pow(d1, R);
    if (per_triple_max >= (BigInt(1) << 62))
        throw BudgetError("per-triple accumulator would overflow");
    int max_support = (k - 1) * (k - 2);
    BigInt cost = BigInt(inst.nu) * deg * deg * pts * boost::multiprecision::pow(BigInt(max_support), R);
    if (cost > budget) throw BudgetError("verifier enumeration exceeds budget");

    auto numer = detail::pair_operator_numerators(k);
    std::int64_t d1_ll = static_cast<std::int64_t>((k - 1) * (k - 2) * (k - 3));

    // Composed tables, one per edge, in edge order.
    std::vector<std::vector<int>> composed(inst.edges.size());
    std::vector<std::vector<int>> nbr_of(inst.nu);
    for (std::size_t ei = 0; ei < inst.edges.size(); ++ei) {
        const auto& e = inst.edges[ei];
        composed[ei] = compose_table(proof.tables[e.v], sigma_for(e.pi, R), k);
        nbr_of[e.u].push_back(static_cast<int>(ei));
    }

    BigInt reject_num = 0;
    std::vector<std::int64_t> work, next;
    for (int u = 0; u < inst.nu; ++u) {
        for (int ea : nbr_of[u]) {
            const auto& ta = composed[ea];
            for (int eb : nbr_of[u]) {
                const auto& tb = composed[eb];
                // N[p*k + j] starts as the indicator of tb[p] == j+1, then each
                // axis application folds in one coordinate's transition numerators.
                work.assign(static_cast<std::size_t>(pts) * k, 0);
                for (long long p = 0; p < pts; ++p) work[p * k + (tb[p] - 1)] = 1;
                long long stride = 1;
                for (int axis = 0; axis < R; ++axis) {
                    next.assign(static_cast<std::size_t>(pts) * k, 0);
                    for (long long h = 0; h < pts / (stride * Q); ++h) {
                        for (long long lo = 0; lo < stride; ++lo) {
                            long long base = h * stride * Q + lo;
                            for (int x = 0; x < Q; ++x) {
                                auto* dst = &next[static_cast<std::size_t>(base + x * stride) * k];
                                const auto* row = &numer[static_cast<std::size_t>(x) * Q];
                                for (int y = 0; y < Q; ++y) {
                                    std::int64_t w = row[y];
                                    if (w == 0) continue;
                                    const auto* src =
                                        &work[static_cast<std::size_t>(base + y * stride) * k];
                                    for (int j = 0; j < k; ++j) dst[j] += w * src[j];
                                }
                            }
                        }
                    }
                    work.swap(next);
                    stride *= Q;
                }
                std::int64_t acc = 0;
                for (long long p = 0; p < pts; ++p) acc += work[p * k + (ta[p] - 1)];
                reject_num += acc;
            }
        }
    }

    BigInt denom = BigInt(inst.nu) * deg * deg * pts;
    for (int i = 0; i < R; ++i) denom *= d1_ll;
    Rational p = Rational(1) - Rational(reject_num, denom);
    if (p < 0 || p > 1) throw std::logic_error("acceptance probability out of range");
    return p;
}

// Influence-based decoding diagnostic: averages each u's composed neighbor
// tables (as simplex indicator functions over [k^2]^R) into g^u, thresholds
// low-level influences at delta to suggest u-labels, thresholds each v's own
// table influence at level 2t against delta/4 for v-labels, then reads off the
// lowest suggestion per vertex (0 when empty).
struct InfluenceDecodeReport {
    std::vector<std::vector<int>> sugg_u;
    std::vector<std::vector<int>> sugg_v;
    Labeling labeling;
    long long satisfied = 0;
    Rational value;
};

inline InfluenceDecodeReport influence_decode(const LabelCoverInstance& inst,
                                              const LongCodeProof& proof, int t = 2,
                                              double delta = 0.1) {
    inst.validate();
    proof.validate(inst);
    if (t < 0 || delta <= 0) throw InputError("decode needs t >= 0 and delta > 0");
    int k = proof.k;
    int R = inst.R;
    int Q = k * k;
    int deg = inst.degree();

    InfluenceDecodeReport rep;
    rep.sugg_u.resize(inst.nu);
    rep.sugg_v.resize(inst.nv);
    rep.labeling.ell_u.assign(inst.nu, 0);
    rep.labeling.ell_v.assign(inst.nv, 0);

    std::vector<std::vector<int>> nbr_of(inst.nu);
    for (std::size_t ei = 0; ei < inst.edges.size(); ++ei)
        nbr_of[inst.edges[ei].u].push_back(static_cast<int>(ei));

    for (int u = 0; u < inst.nu; ++u) {
        auto g = TabulatedFunction::zeros(Q, R, k);
        for (int ei : nbr_of[u]) {
            const auto& e = inst.edges[ei];
            auto ctbl = compose_table(proof.tables[e.v], sigma_for(e.pi, R), k);
            for (long long p = 0; p < g.points(); ++p) g.at(p, ctbl[p] - 1) += 1.0 / deg;
        }
        auto low = influences(g, t).low_level;
        for (int i = 0; i < R; ++i)
            if (low[i] >= delta) rep.sugg_u[u].push_back(i);
        if (!rep.sugg_u[u].empty()) rep.labeling.ell_u[u] = rep.sugg_u[u].front();
    }

    for (int v = 0; v < inst.nv; ++v) {
        auto f = TabulatedFunction::zeros(k, 2 * R, k);
        for (long long p = 0; p < f.points(); ++p) f.at(p, proof.tables[v][p] - 1) = 1.0;
        auto low = influences(f, 2 * t).low_level;
        for (int l = 0; l < 2 * R; ++l)
            if (low[l] >= delta / 4) rep.sugg_v[v].push_back(l);
        if (!rep.sugg_v[v].empty()) rep.labeling.ell_v[v] = rep.sugg_v[v].front();
    }

    rep.satisfied = satisfied_edges(inst, rep.labeling);
    rep.value = labeling_value(inst, rep.labeling);
    return rep;
}

}  // namespace mkcs
