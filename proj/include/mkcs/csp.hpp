#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mkcs/errors.hpp"
#include "mkcs/rng.hpp"

namespace mkcs {

// Tripartite boolean CSP. Each constraint couples one x variable, one y literal
// and two z variables (indices may coincide):
//     (x OR (Y == z[zk])) AND (NOT x OR (Y == z[zl]))
// where Y is y[y] xor y_negated. z variables are never negated.
struct Constraint {
    int x = 0;
    int y = 0;
    bool y_negated = false;
    int zk = 0;
    int zl = 0;
};

struct CspInstance {
    int nx = 0;
    int ny = 0;
    int nz = 0;
    std::vector<Constraint> constraints;

    int m() const { return static_cast<int>(constraints.size()); }

    void validate() const {
        if (nx < 0 || ny < 0 || nz < 0) throw InputError("negative variable count");
        for (const auto& c : constraints) {
            if (c.x < 0 || c.x >= nx) throw InputError("constraint x index out of range");
            if (c.y < 0 || c.y >= ny) throw InputError("constraint y index out of range");
            if (c.zk < 0 || c.zk >= nz || c.zl < 0 || c.zl >= nz)
                throw InputError("constraint z index out of range");
        }
    }
};

struct Assignment {
    std::vector<std::uint8_t> x, y, z;  // 0/1 values
};

inline void validate_assignment(const CspInstance& inst, const Assignment& a) {
    if (static_cast<int>(a.x.size()) != inst.nx || static_cast<int>(a.y.size()) != inst.ny ||
        static_cast<int>(a.z.size()) != inst.nz)
        throw InputError("assignment shape does not match instance");
    for (auto v : a.x)
        if (v > 1) throw InputError("assignment values must be 0/1");
    for (auto v : a.y)
        if (v > 1) throw InputError("assignment values must be 0/1");
    for (auto v : a.z)
        if (v > 1) throw InputError("assignment values must be 0/1");
}

inline bool eval_constraint(const Constraint& c, const Assignment& a) {
    bool xv = a.x[c.x] != 0;
    bool yv = (a.y[c.y] != 0) != c.y_negated;
    bool c1 = xv || (yv == (a.z[c.zk] != 0));
    bool c2 = !xv || (yv == (a.z[c.zl] != 0));
    return c1 && c2;
}

inline int count_satisfied(const CspInstance& inst, const Assignment& a) {
    inst.validate();
    validate_assignment(inst, a);
    int c = 0;
    for (const auto& con : inst.constraints) c += eval_constraint(con, a) ? 1 : 0;
    return c;
}

// Exhaustive maximizer. Assignments are ordered lexicographically over the
// concatenated bit vector (x, then y, then z); ties go to the smallest.
inline std::pair<Assignment, int> exact_max_sat(const CspInstance& inst,
                                                std::uint64_t budget = 1u << 22) {
    inst.validate();
    int tot = inst.nx + inst.ny + inst.nz;
    if (tot >= 63 || (std::uint64_t{1} << tot) > budget)
        throw BudgetError("assignment enumeration budget exceeded");
    Assignment a;
    a.x.assign(inst.nx, 0);
    a.y.assign(inst.ny, 0);
    a.z.assign(inst.nz, 0);
    Assignment best = a;
    int best_count = -1;
    const std::uint64_t limit = std::uint64_t{1} << tot;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        // bit 0 of the order is the first x variable, and it is the most significant
        // lexicographically, so place it at the top of the mask
        for (int b = 0; b < tot; ++b) {
            std::uint8_t bit = (mask >> (tot - 1 - b)) & 1u;
            if (b < inst.nx)
                a.x[b] = bit;
            else if (b < inst.nx + inst.ny)
                a.y[b - inst.nx] = bit;
            else
                a.z[b - inst.nx - inst.ny] = bit;
        }
        int cnt = 0;
        for (const auto& con : inst.constraints) cnt += eval_constraint(con, a) ? 1 : 0;
        if (cnt > best_count) {
            best_count = cnt;
            best = a;
        }
    }
    return {best, best_count};
}

// Random instance satisfied by a planted assignment: after drawing each
// constraint, the binding clause is repaired minimally (redraw the bound z
// index among matching values, else flip the literal's sign).
inline std::pair<CspInstance, Assignment> generate_planted(std::uint64_t seed, int nx, int ny,
                                                           int nz, int m) {
    if (nx < 1 || ny < 1 || nz < 1 || m < 0)
        throw InputError("planted generator needs nx, ny, nz >= 1 and m >= 0");
    Rng rng(seed);
    CspInstance inst;
    inst.nx = nx;
    inst.ny = ny;
    inst.nz = nz;
    Assignment a;
    for (int i = 0; i < nx; ++i) a.x.push_back(rng.flip() ? 1 : 0);
    for (int i = 0; i < ny; ++i) a.y.push_back(rng.flip() ? 1 : 0);
    for (int i = 0; i < nz; ++i) a.z.push_back(rng.flip() ? 1 : 0);
    for (int t = 0; t < m; ++t) {
        Constraint c;
        c.x = rng.below_int(nx);
        c.y = rng.below_int(ny);
        c.y_negated = rng.flip();
        c.zk = rng.below_int(nz);
        c.zl = rng.below_int(nz);
        bool xv = a.x[c.x] != 0;
        bool yv = (a.y[c.y] != 0) != c.y_negated;
        int* bound = xv ? &c.zl : &c.zk;  // the clause the planted x value activates
        if ((a.z[*bound] != 0) != yv) {
            std::vector<int> matching;
            for (int i = 0; i < nz; ++i)
                if ((a.z[i] != 0) == yv) matching.push_back(i);
            if (!matching.empty())
                *bound = matching[rng.below_int(static_cast<int>(matching.size()))];
            else
                c.y_negated = !c.y_negated;  // flips Y to match the (uniform) z side
        }
        inst.constraints.push_back(c);
    }
    return {inst, a};
}

inline CspInstance generate_random(std::uint64_t seed, int nx, int ny, int nz, int m) {
    if (nx < 1 || ny < 1 || nz < 1 || m < 0)
        throw InputError("random generator needs nx, ny, nz >= 1 and m >= 0");
    Rng rng(seed);
    CspInstance inst;
    inst.nx = nx;
    inst.ny = ny;
    inst.nz = nz;
    for (int t = 0; t < m; ++t) {
        Constraint c;
        c.x = rng.below_int(nx);
        c.y = rng.below_int(ny);
        c.y_negated = rng.flip();
        c.zk = rng.below_int(nz);
        c.zl = rng.below_int(nz);
        inst.constraints.push_back(c);
    }
    return inst;
}

}  // namespace mkcs
