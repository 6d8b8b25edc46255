#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mkcs/errors.hpp"
#include "mkcs/spectral.hpp"

namespace mkcs {

// Tables are indexed little-endian: the point x in [q]^N sits at
// sum_i x_i * q^i, so coordinate 0 is the fastest-moving digit. A pair domain
// [q]^{2N} regrouped into [q^2]^N under (a,b) <-> a + q*b keeps flat indices
// unchanged, which bar/underline below rely on (and tests verify digit-wise).
inline long long checked_table_points(int q, int N) {
    if (q < 2 || N < 0) throw InputError("table domain needs q >= 2, N >= 0");
    long long p = 1;
    for (int i = 0; i < N; ++i) {
        p *= q;
        if (p > 1'000'000) throw BudgetError("table larger than 10^6 points refused");
    }
    return p;
}

// Function [q]^N -> R^r tabulated point-major (components contiguous per point).
struct TabulatedFunction {
    int q = 0;
    int N = 0;
    int r = 1;
    std::vector<double> values;

    static TabulatedFunction zeros(int q, int N, int r = 1) {
        long long pts = checked_table_points(q, N);
        if (r < 1) throw InputError("component count must be >= 1");
        TabulatedFunction f;
        f.q = q;
        f.N = N;
        f.r = r;
        f.values.assign(static_cast<std::size_t>(pts) * r, 0.0);
        return f;
    }

    long long points() const {
        long long p = 1;
        for (int i = 0; i < N; ++i) p *= q;
        return p;
    }

    double at(long long point, int comp = 0) const {
        return values[static_cast<std::size_t>(point) * r + comp];
    }
    double& at(long long point, int comp = 0) {
        return values[static_cast<std::size_t>(point) * r + comp];
    }

    int digit(long long point, int coord) const {
        for (int i = 0; i < coord; ++i) point /= q;
        return static_cast<int>(point % q);
    }

    bool is_simplex(double tol = 1e-12) const {
        if (r < 2) return false;
        for (long long p = 0; p < points(); ++p) {
            double s = 0;
            for (int j = 0; j < r; ++j) {
                if (at(p, j) < -tol) return false;
                s += at(p, j);
            }
            if (std::abs(s - 1.0) > tol) return false;
        }
        return true;
    }
};

// E[sum_j f_j g_j] under the uniform measure on the domain.
inline double inner_product(const TabulatedFunction& f, const TabulatedFunction& g) {
    if (f.q != g.q || f.N != g.N || f.r != g.r) throw InputError("inner product shape mismatch");
    double s = 0;
    for (std::size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * g.values[i];
    return s / static_cast<double>(f.points());
}

// Orthonormal basis of R^q under the plain dot product with alpha_0 = 1/sqrt(q)
// in every entry; built by Gram-Schmidt over {1, e_0 - u, e_1 - u, ...}, so it
// is fully deterministic. The E-orthonormal family used in transforms is
// beta_a = sqrt(q) * alpha_a (beta_0 is the constant 1).
struct FourierBasis {
    int q = 0;
    std::vector<double> alpha;  // row-major q*q, alpha[a*q+v]

    double at(int a, int v) const { return alpha[static_cast<std::size_t>(a) * q + v]; }
};

inline FourierBasis fourier_basis(int q) {
    if (q < 2) throw InputError("fourier basis needs q >= 2");
    FourierBasis b;
    b.q = q;
    std::vector<std::vector<double>> rows;
    auto dot = [&](const std::vector<double>& x, const std::vector<double>& y) {
        double s = 0;
        for (int v = 0; v < q; ++v) s += x[v] * y[v];
        return s;
    };
    for (int a = 0; a < q; ++a) {
        std::vector<double> cand(q, 0.0);
        if (a == 0) {
            cand.assign(q, 1.0);
        } else {
            cand.assign(q, -1.0 / q);
            cand[a - 1] += 1.0;
        }
        for (const auto& prev : rows) {
            double proj = dot(cand, prev);
            for (int v = 0; v < q; ++v) cand[v] -= proj * prev[v];
        }
        double nrm = std::sqrt(dot(cand, cand));
        if (nrm < 1e-14) throw std::logic_error("degenerate basis candidate");
        for (int v = 0; v < q; ++v) cand[v] /= nrm;
        rows.push_back(std::move(cand));
    }
    b.alpha.reserve(static_cast<std::size_t>(q) * q);
    for (const auto& row : rows) b.alpha.insert(b.alpha.end(), row.begin(), row.end());
    return b;
}

namespace detail {

// Applies the q*q matrix M (row-major, out_digit x in_digit) along one axis.
inline void apply_axis(std::vector<double>& vals, int q, int N, int r, int axis,
                       const std::vector<double>& M) {
    long long stride = 1;
    for (int i = 0; i < axis; ++i) stride *= q;
    long long pts = 1;
    for (int i = 0; i < N; ++i) pts *= q;
    std::vector<double> tmp(static_cast<std::size_t>(q) * r);
    for (long long h = 0; h < pts / (stride * q); ++h) {
        for (long long lo = 0; lo < stride; ++lo) {
            long long base = h * stride * q + lo;
            for (int d = 0; d < q; ++d)
                for (int j = 0; j < r; ++j)
                    tmp[static_cast<std::size_t>(d) * r + j] =
                        vals[static_cast<std::size_t>(base + d * stride) * r + j];
            for (int d = 0; d < q; ++d) {
                for (int j = 0; j < r; ++j) {
                    double s = 0;
                    for (int e = 0; e < q; ++e)
                        s += M[static_cast<std::size_t>(d) * q + e] *
                             tmp[static_cast<std::size_t>(e) * r + j];
                    vals[static_cast<std::size_t>(base + d * stride) * r + j] = s;
                }
            }
        }
    }
}

}  // namespace detail

// (T^{tensor N} f)(x) = sum_y prod_i T(x_i -> y_i) f(y), one exact axis at a time.
inline TabulatedFunction tensor_apply(const MarkovOperator& op, const TabulatedFunction& f) {
    if (op.q != f.q) throw InputError("operator alphabet does not match table");
    checked_table_points(f.q, f.N);
    TabulatedFunction out = f;
    for (int axis = 0; axis < f.N; ++axis) detail::apply_axis(out.values, f.q, f.N, f.r, axis, op.a);
    return out;
}

// Coefficient table: fhat(x) = <f, beta_x>_E, same shape as f. The coefficient
// at the all-zero index is E[f]; Parseval reads sum_x fhat(x)^2 = E[f^2].
inline TabulatedFunction fourier_coefficients(const TabulatedFunction& f, const FourierBasis& b) {
    if (b.q != f.q) throw InputError("basis alphabet does not match table");
    checked_table_points(f.q, f.N);
    std::vector<double> M(static_cast<std::size_t>(f.q) * f.q);
    double root = std::sqrt(static_cast<double>(f.q));
    for (int a = 0; a < f.q; ++a)
        for (int v = 0; v < f.q; ++v)
            M[static_cast<std::size_t>(a) * f.q + v] = b.at(a, v) / root;
    TabulatedFunction out = f;
    for (int axis = 0; axis < f.N; ++axis) detail::apply_axis(out.values, f.q, f.N, f.r, axis, M);
    return out;
}

inline int coefficient_level(long long point, int q, int N) {
    int lvl = 0;
    for (int i = 0; i < N; ++i) {
        if (point % q != 0) ++lvl;
        point /= q;
    }
    return lvl;
}

// Per-coordinate influence, both routes, plus the level-<= t truncation.
// Vector-valued tables sum influence over components. The Fourier route sums
// fhat^2 over coefficients whose coordinate-i digit is nonzero; the variance
// route averages the conditional variance along coordinate i. The two agree to
// within numerical error (tests pin 1e-10).
struct InfluenceReport {
    std::vector<double> total_fourier;
    std::vector<double> total_variance;
    std::vector<double> low_level;  // level <= t only
    int t = 0;
};

inline InfluenceReport influences(const TabulatedFunction& f, int t) {
    if (t < 0) throw InputError("influence level must be >= 0");
    InfluenceReport rep;
    rep.t = t;
    rep.total_fourier.assign(f.N, 0.0);
    rep.total_variance.assign(f.N, 0.0);
    rep.low_level.assign(f.N, 0.0);

    auto coeffs = fourier_coefficients(f, fourier_basis(f.q));
    const long long pts = f.points();
    for (long long p = 0; p < pts; ++p) {
        int lvl = coefficient_level(p, f.q, f.N);
        if (lvl == 0) continue;
        double mass = 0;
        for (int j = 0; j < f.r; ++j) mass += coeffs.at(p, j) * coeffs.at(p, j);
        long long rem = p;
        for (int i = 0; i < f.N; ++i) {
            if (rem % f.q != 0) {
                rep.total_fourier[i] += mass;
                if (lvl <= t) rep.low_level[i] += mass;
            }
            rem /= f.q;
        }
    }

    for (int i = 0; i < f.N; ++i) {
        long long stride = 1;
        for (int a = 0; a < i; ++a) stride *= f.q;
        double acc = 0;
        for (long long h = 0; h < pts / (stride * f.q); ++h) {
            for (long long lo = 0; lo < stride; ++lo) {
                long long base = h * stride * f.q + lo;
                for (int j = 0; j < f.r; ++j) {
                    double s = 0, s2 = 0;
                    for (int d = 0; d < f.q; ++d) {
                        double val = f.at(base + d * stride, j);
                        s += val;
                        s2 += val * val;
                    }
                    acc += s2 / f.q - (s / f.q) * (s / f.q);
                }
            }
        }
        rep.total_variance[i] = acc / static_cast<double>(pts / f.q);
    }
    return rep;
}

// E-norm squared: E[sum_j f_j^2].
inline double norm_squared(const TabulatedFunction& f) { return inner_product(f, f); }

// Noise stability at rho: computed both as <f, T_rho^{tensor N} f> and as
// sum_x rho^{|x|} fhat(x)^2 (summed over components); the two must agree.
inline double noise_stability(const TabulatedFunction& f, double rho) {
    auto smoothed = tensor_apply(beckner(f.q, rho), f);
    double via_op = inner_product(f, smoothed);
    auto coeffs = fourier_coefficients(f, fourier_basis(f.q));
    double via_fourier = 0;
    for (long long p = 0; p < f.points(); ++p) {
        double mass = 0;
        for (int j = 0; j < f.r; ++j) mass += coeffs.at(p, j) * coeffs.at(p, j);
        via_fourier += std::pow(rho, coefficient_level(p, f.q, f.N)) * mass;
    }
    if (std::abs(via_op - via_fourier) > 1e-8 * (1.0 + std::abs(via_op)))
        throw std::logic_error("noise stability routes disagree beyond numerical error");
    return via_op;
}

// --- pair regrouping -------------------------------------------------------

// [q]^{2N} -> [q^2]^N, pairing consecutive coordinates via (a, b) -> a + q*b.
inline std::vector<int> bar_point(const std::vector<int>& x, int q) {
    if (x.size() % 2 != 0) throw InputError("bar_point needs an even number of coordinates");
    std::vector<int> y(x.size() / 2);
    for (std::size_t i = 0; i < y.size(); ++i) {
        int a = x[2 * i], b = x[2 * i + 1];
        if (a < 0 || a >= q || b < 0 || b >= q) throw InputError("coordinate out of range");
        y[i] = a + q * b;
    }
    return y;
}

inline std::vector<int> underline_point(const std::vector<int>& y, int q) {
    std::vector<int> x(y.size() * 2);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0 || y[i] >= q * q) throw InputError("coordinate out of range");
        x[2 * i] = y[i] % q;
        x[2 * i + 1] = y[i] / q;
    }
    return x;
}

// fbar(y) = f(underline(y)): with little-endian flat indexing the table bytes
// are identical, only the domain shape changes.
inline TabulatedFunction bar_function(const TabulatedFunction& f) {
    if (f.N % 2 != 0) throw InputError("bar_function needs an even number of coordinates");
    TabulatedFunction out = f;
    out.q = f.q * f.q;
    out.N = f.N / 2;
    return out;
}

inline TabulatedFunction underline_function(const TabulatedFunction& f, int q) {
    if (q * q != f.q) throw InputError("underline_function needs a pair-domain table");
    TabulatedFunction out = f;
    out.q = q;
    out.N = f.N * 2;
    return out;
}

// Low-level influence of the regrouped function never exceeds the sum of the
// two constituent coordinates' influences at twice the level.
struct ClaimCheck {
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
};

inline ClaimCheck check_claim_infrel(const TabulatedFunction& f, int i, int t) {
    if (f.N % 2 != 0) throw InputError("claim check needs an even number of coordinates");
    if (i < 1 || i > f.N / 2) throw InputError("coordinate index out of range");
    ClaimCheck res;
    auto barred = bar_function(f);
    res.lhs = influences(barred, t).low_level[i - 1];
    auto rep = influences(f, 2 * t);
    res.rhs = rep.low_level[2 * (i - 1)] + rep.low_level[2 * (i - 1) + 1];
    res.holds = res.lhs <= res.rhs + 1e-10;
    return res;
}

// Report-only summary for simplex-valued tables under a symmetric operator:
// the attained stability sum, the largest low-level influence, and the
// first-order reference level 1/q - 2 c ln(q) / q^2 with c = rho * (q - 1).
struct StabilityReport {
    double stability_sum = 0;
    double max_low_influence = 0;
    double reference = 0;
    double rho = 0;
    double c = 0;
    int t = 0;
};

inline StabilityReport stability_sum_report(const TabulatedFunction& f, const MarkovOperator& op,
                                            int t) {
    if (!f.is_simplex(1e-12)) throw InputError("stability report expects a simplex-valued table");
    if (op.q != f.q) throw InputError("operator alphabet does not match table");
    StabilityReport rep;
    rep.t = t;
    // inner_product sums components, so this is sum_j <f_j, T f_j> directly.
    rep.stability_sum = inner_product(f, tensor_apply(op, f));
    auto infl = influences(f, t);
    for (double v : infl.low_level) rep.max_low_influence = std::max(rep.max_low_influence, v);
    rep.rho = spectral_radius(op);
    int qc = f.r;
    rep.c = rep.rho * (qc - 1);
    rep.reference = 1.0 / qc - 2.0 * rep.c * std::log(static_cast<double>(qc)) / (static_cast<double>(qc) * qc);
    return rep;
}

}  // namespace mkcs
