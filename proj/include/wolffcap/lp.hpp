#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"

namespace wolffcap {

// maximize c.x  subject to  rows[i].x <= rhs[i],  x >= 0,  rhs[i] >= 0.
// Nonnegative right-hand sides keep the origin feasible, which is all the
// capacity instances need; solve_lp rejects anything else.
struct LinearProgram {
    std::size_t n = 0;
    std::vector<double> c;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;

    explicit LinearProgram(std::size_t vars = 0) : n(vars), c(vars, 0.0) {}

    void add_constraint(std::vector<double> row, double b) {
        if (row.size() != n) throw std::invalid_argument("lp: row width mismatch");
        if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("lp: rhs must be finite and >= 0");
        rows.push_back(std::move(row));
        rhs.push_back(b);
    }
};

enum class LpStatus { Optimal, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::IterationLimit;
    double objective = 0.0;
    std::vector<double> x;
    std::vector<double> dual;
    std::size_t iterations = 0;
    bool certified = false;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double duality_gap = 0.0;
};

struct LpOptions {
    double tol = 1e-9;
    std::size_t max_iterations = 50000;
};

namespace detail {

// Certificate check done from scratch on the original data, not the tableau:
// primal feasibility, dual feasibility, complementary objective match.
inline void certify_lp(const LinearProgram& lp, LpResult& res, double tol) {
    double scale = std::max(1.0, std::fabs(res.objective));
    for (double b : lp.rhs) scale = std::max(scale, std::fabs(b));
    for (double ci : lp.c) scale = std::max(scale, std::fabs(ci));

    double primal = 0.0;
    for (double xi : res.x) primal = std::max(primal, -xi);
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        KahanSum ax;
        for (std::size_t j = 0; j < lp.n; ++j) ax.add(lp.rows[i][j] * res.x[j]);
        primal = std::max(primal, ax.value() - lp.rhs[i]);
    }
    res.primal_residual = primal;

    double dualres = 0.0;
    for (double yi : res.dual) dualres = std::max(dualres, -yi);
    for (std::size_t j = 0; j < lp.n; ++j) {
        KahanSum ya;
        for (std::size_t i = 0; i < lp.rows.size(); ++i) ya.add(res.dual[i] * lp.rows[i][j]);
        dualres = std::max(dualres, lp.c[j] - ya.value());
    }
    res.dual_residual = dualres;

    KahanSum cx, yb;
    for (std::size_t j = 0; j < lp.n; ++j) cx.add(lp.c[j] * res.x[j]);
    for (std::size_t i = 0; i < lp.rhs.size(); ++i) yb.add(res.dual[i] * lp.rhs[i]);
    res.duality_gap = std::fabs(cx.value() - yb.value());

    double allow = tol * scale;
    res.certified = primal <= allow && dualres <= allow && res.duality_gap <= allow;
}

} // namespace detail

// Dense tableau simplex with Bland's rule (anti-cycling). Fine for the
// instance sizes here: tens of variables, a few hundred constraints.
inline LpResult solve_lp(const LinearProgram& lp, const LpOptions& opt = {}) {
    const std::size_t n = lp.n;
    const std::size_t m = lp.rows.size();
    for (double b : lp.rhs)
        if (!(b >= 0.0)) throw std::invalid_argument("solve_lp: rhs must be >= 0");

    const std::size_t width = n + m + 1; // structural + slacks + rhs column
    std::vector<std::vector<double>> T(m + 1, std::vector<double>(width, 0.0));
    for (std::size_t j = 0; j < n; ++j) T[0][j] = -lp.c[j];
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) T[i + 1][j] = lp.rows[i][j];
        T[i + 1][n + i] = 1.0;
        T[i + 1][width - 1] = lp.rhs[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    LpResult res;
    res.x.assign(n, 0.0);
    res.dual.assign(m, 0.0);
    while (res.iterations < opt.max_iterations) {
        // Bland: entering column is the lowest index with a negative reduced cost.
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j) {
            if (T[0][j] < -opt.tol) { enter = j; break; }
        }
        if (enter == width) {
            res.status = LpStatus::Optimal;
            break;
        }
        // Bland: among rows attaining the minimum ratio, leave with the
        // smallest basic variable index.
        std::size_t leave = m + 1;
        double best = kInf;
        for (std::size_t i = 0; i < m; ++i) {
            double a = T[i + 1][enter];
            if (a <= opt.tol) continue;
            double ratio = T[i + 1][width - 1] / a;
            if (ratio < best - opt.tol * std::max(1.0, std::fabs(best)) ||
                (std::fabs(ratio - best) <= opt.tol * std::max(1.0, std::fabs(best)) &&
                 (leave == m + 1 || basis[i] < basis[leave]))) {
                best = ratio;
                leave = i;
            }
        }
        if (leave == m + 1) {
            res.status = LpStatus::Unbounded;
            res.objective = kInf;
            return res;
        }
        double piv = T[leave + 1][enter];
        for (std::size_t j = 0; j < width; ++j) T[leave + 1][j] /= piv;
        for (std::size_t r = 0; r <= m; ++r) {
            if (r == leave + 1) continue;
            double f = T[r][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) T[r][j] -= f * T[leave + 1][j];
            T[r][enter] = 0.0;
        }
        basis[leave] = enter;
        ++res.iterations;
    }
    if (res.status != LpStatus::Optimal) {
        if (res.iterations >= opt.max_iterations) res.status = LpStatus::IterationLimit;
        return res;
    }

    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) res.x[basis[i]] = T[i + 1][width - 1];
    }
    res.objective = T[0][width - 1];
    for (std::size_t i = 0; i < m; ++i) res.dual[i] = T[0][n + i];
    detail::certify_lp(lp, res, opt.tol * 100.0);
    return res;
}

// Gaussian elimination with partial pivoting; nullopt on (near-)singular
// systems. Shared by the vertex-enumeration oracle in the tests.
inline std::optional<std::vector<double>> solve_linear(std::vector<std::vector<double>> A,
                                                       std::vector<double> b) {
    const std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        if (std::fabs(A[piv][col]) < 1e-12) return std::nullopt;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) A[r][j] -= f * A[col][j];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
    return x;
}

} // namespace wolffcap
