#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mkcs/errors.hpp"

namespace mkcs {

// Row-stochastic Markov operator on [q] (dense, double precision).
struct MarkovOperator {
    int q = 0;
    std::vector<double> a;  // row-major q*q

    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * q + j]; }
    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * q + j]; }

    void validate(double tol = 1e-12) const {
        if (q < 1 || a.size() != static_cast<std::size_t>(q) * q)
            throw InputError("operator shape mismatch");
        for (int i = 0; i < q; ++i) {
            double row = 0;
            for (int j = 0; j < q; ++j) {
                if (at(i, j) < -tol) throw InputError("negative operator entry");
                row += at(i, j);
            }
            if (std::abs(row - 1.0) > tol) throw InputError("operator row does not sum to 1");
        }
    }

    bool is_symmetric(double tol = 1e-12) const {
        for (int i = 0; i < q; ++i)
            for (int j = i + 1; j < q; ++j)
                if (std::abs(at(i, j) - at(j, i)) > tol) return false;
        return true;
    }
};

inline MarkovOperator identity_operator(int q) {
    MarkovOperator op{q, std::vector<double>(static_cast<std::size_t>(q) * q, 0.0)};
    for (int i = 0; i < q; ++i) op.at(i, i) = 1.0;
    return op;
}

// Noise operator on [q]: stay put with weight 1/q + (1-1/q) rho, move to any
// other element with weight (1-rho)/q. Eigenvalues are 1 and rho (q-1 times).
inline MarkovOperator beckner(int q, double rho) {
    if (q < 2) throw InputError("beckner needs q >= 2");
    if (rho > 1.0 || rho < -1.0 / (q - 1))
        throw InputError("beckner needs rho in [-1/(q-1), 1]");
    MarkovOperator op{q, std::vector<double>(static_cast<std::size_t>(q) * q)};
    double diag = 1.0 / q + (1.0 - 1.0 / q) * rho;
    double off = (1.0 - rho) / q;
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) op.at(i, j) = (i == j) ? diag : off;
    return op;
}

// Transition kinds for the pair operator on [q]^2 (states are ordered pairs).
// alpha = 1/((q-1)(q-3)) links disjoint off-diagonal pairs; beta = 1/((q-1)(q-2))
// links a diagonal pair to off-diagonal pairs avoiding its element (both ways).
enum class DmrCase { Zero, Alpha, Beta };

inline DmrCase dmr_case(int x1, int x2, int y1, int y2) {
    bool xd = (x1 == x2), yd = (y1 == y2);
    bool disjoint = x1 != y1 && x1 != y2 && x2 != y1 && x2 != y2;
    if (!xd && !yd && disjoint) return DmrCase::Alpha;
    if (xd && !yd && x1 != y1 && x1 != y2) return DmrCase::Beta;
    if (yd && !xd && y1 != x1 && y1 != x2) return DmrCase::Beta;
    return DmrCase::Zero;
}

// Symmetric doubly stochastic operator on ordered pairs (a, b) <-> a + q*b with
// zero diagonal; every positive transition moves to a pair disjoint from the
// current one. Defined for q >= 4.
inline MarkovOperator dmr_operator(int q) {
    if (q < 4) throw InputError("dmr_operator needs q >= 4");
    const double alpha = 1.0 / (static_cast<double>(q - 1) * (q - 3));
    const double beta = 1.0 / (static_cast<double>(q - 1) * (q - 2));
    const int Q = q * q;
    MarkovOperator op{Q, std::vector<double>(static_cast<std::size_t>(Q) * Q, 0.0)};
    for (int x = 0; x < Q; ++x) {
        int x1 = x % q, x2 = x / q;
        for (int y = 0; y < Q; ++y) {
            int y1 = y % q, y2 = y / q;
            switch (dmr_case(x1, x2, y1, y2)) {
                case DmrCase::Alpha: op.at(x, y) = alpha; break;
                case DmrCase::Beta: op.at(x, y) = beta; break;
                case DmrCase::Zero: break;
            }
        }
    }
    return op;
}

// Closed form for (T^2)(x -> y) of the pair operator, in terms of
// l = |[q] \ {x1,x2,y1,y2}|. Middle states are counted directly:
// off-diagonal middles contribute alpha/beta steps, diagonal middles beta*beta.
inline double tsquare_closed_form(int q, int x1, int x2, int y1, int y2) {
    if (q < 4) throw InputError("tsquare_closed_form needs q >= 4");
    const double alpha = 1.0 / (static_cast<double>(q - 1) * (q - 3));
    const double beta = 1.0 / (static_cast<double>(q - 1) * (q - 2));
    int vals[4] = {x1, x2, y1, y2};
    int distinct = 0;
    for (int i = 0; i < 4; ++i) {
        bool dup = false;
        for (int j = 0; j < i; ++j) dup = dup || (vals[j] == vals[i]);
        if (!dup) ++distinct;
    }
    double l = q - distinct;
    bool xd = (x1 == x2), yd = (y1 == y2);
    if (xd && yd) return l * (l - 1) * beta * beta;
    if (xd != yd) return l * (l - 1) * alpha * beta;
    return l * (l - 1) * alpha * alpha + l * beta * beta;
}

struct EigenDecomposition {
    std::vector<double> values;               // descending
    std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i]
};

// Cyclic Jacobi for symmetric matrices: sweep all (p,r) pairs, rotate each
// off-diagonal entry to zero, until the off-diagonal norm drops below tol.
inline EigenDecomposition jacobi_eigen(std::vector<double> a, int n, double tol = 1e-13,
                                       int max_sweeps = 64) {
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += 2 * A(i, j) * A(i, j);
        if (std::sqrt(off) < tol) break;
        for (int p = 0; p < n; ++p) {
            for (int r = p + 1; r < n; ++r) {
                double apr = A(p, r);
                if (apr == 0.0) continue;
                double theta = (A(r, r) - A(p, p)) / (2 * apr);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
                for (int i = 0; i < n; ++i) {
                    double aip = A(i, p), air = A(i, r);
                    A(i, p) = c * aip - s * air;
                    A(i, r) = s * aip + c * air;
                }
                for (int i = 0; i < n; ++i) {
                    double api = A(p, i), ari = A(r, i);
                    A(p, i) = c * api - s * ari;
                    A(r, i) = s * api + c * ari;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = V(i, p), vir = V(i, r);
                    V(i, p) = c * vip - s * vir;
                    V(i, r) = s * vip + c * vir;
                }
            }
        }
    }
    EigenDecomposition dec;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = A(i, i);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] > diag[j]; });
    for (int idx : order) {
        dec.values.push_back(diag[idx]);
        std::vector<double> col(n);
        for (int i = 0; i < n; ++i) col[i] = V(i, idx);
        dec.vectors.push_back(std::move(col));
    }
    return dec;
}

inline EigenDecomposition eigen_decompose(const MarkovOperator& op) {
    if (!op.is_symmetric()) throw InputError("eigen decomposition expects a symmetric operator");
    return jacobi_eigen(op.a, op.q);
}

// Largest absolute eigenvalue after peeling one copy of the top eigenvalue 1.
inline double spectral_radius(const MarkovOperator& op) {
    op.validate();
    auto dec = eigen_decompose(op);
    if (op.q < 2) return 0.0;
    return std::max(std::abs(dec.values[1]), std::abs(dec.values[op.q - 1]));
}

}  // namespace mkcs
