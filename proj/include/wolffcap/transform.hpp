#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "kernel.hpp"
#include "measure.hpp"
#include "phi.hpp"

namespace wolffcap {

// Sorted distinct pairwise distances. Truncation at eps keeps pairs with
// separation strictly greater than eps, so the distinct truncated operators are
// exactly {eps = 0} plus one per breakpoint.
inline std::vector<double> truncation_breakpoints(const std::vector<Point>& pts) {
    std::vector<double> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) out.push_back(dist(pts[i], pts[j]));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Truncated transform of the density f against mu, evaluated at x:
// sum over atoms y with |y - x| > eps of K(x, y) f(y) m(y). An atom exactly at
// x is always excluded, for every eps including 0.
inline Point apply_truncated(const PhiFunction& phi, const AtomicMeasure& mu,
                             const std::vector<double>& f, double eps, const Point& x) {
    if (f.size() != mu.size()) throw std::invalid_argument("apply_truncated: density length mismatch");
    if (x.size() != mu.d) throw std::invalid_argument("apply_truncated: point dimension mismatch");
    std::vector<KahanSum> acc(mu.d);
    double e2 = eps * eps;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        double d2 = dist2(x, mu.points[j]);
        if (d2 == 0.0 || d2 <= e2) continue;
        double r = std::sqrt(d2);
        double scale = f[j] * mu.masses[j] / (r * phi.eval(r));
        for (std::size_t k = 0; k < mu.d; ++k) acc[k].add((mu.points[j][k] - x[k]) * scale);
    }
    Point out(mu.d);
    for (std::size_t k = 0; k < mu.d; ++k) out[k] = acc[k].value();
    return out;
}

inline std::vector<Point> apply_truncated(const PhiFunction& phi, const AtomicMeasure& mu,
                                          const std::vector<double>& f, double eps,
                                          const std::vector<Point>& eval_points) {
    std::vector<Point> out;
    out.reserve(eval_points.size());
    for (const auto& x : eval_points) out.push_back(apply_truncated(phi, mu, f, eps, x));
    return out;
}

// L2(mu) -> L2(mu; R^d) operator norm of the truncated transform: largest
// singular value of the stacked (N*d) x N matrix with blocks
// sqrt(m_i m_j) K(x_i, x_j) [|x_i - x_j| > eps]. Power iteration on A^T A,
// matrix-free, deterministic start and restarts.
struct OperatorNormOptions {
    double rel_tol = 1e-10;
    std::size_t max_iterations = 100000;
    std::uint64_t seed = 0x5eedu;
};

inline double operator_norm(const PhiFunction& phi, const AtomicMeasure& mu, double eps,
                            const OperatorNormOptions& opt = {}) {
    mu.validate();
    std::size_t n = mu.size();
    if (n < 2) return 0.0;

    // Cache kernel rows: w[i][j] = sqrt(m_i m_j) K(x_i, x_j), zero when truncated.
    std::vector<double> rootm(n);
    for (std::size_t i = 0; i < n; ++i) rootm[i] = std::sqrt(mu.masses[i]);
    std::size_t d = mu.d;
    std::vector<double> blocks(n * n * d, 0.0);
    double e2 = eps * eps;
    bool any = false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double d2 = dist2(mu.points[i], mu.points[j]);
            if (d2 <= e2) continue;
            double r = std::sqrt(d2);
            double scale = rootm[i] * rootm[j] / (r * phi.eval(r));
            for (std::size_t k = 0; k < d; ++k)
                blocks[(i * n + j) * d + k] = (mu.points[j][k] - mu.points[i][k]) * scale;
            any = true;
        }
    if (!any) return 0.0;

    auto apply_ata = [&](const std::vector<double>& v, std::vector<double>& out) {
        // out = A^T (A v) without forming A; A has rows (i, k).
        std::vector<double> av(n * d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<KahanSum> row(d);
            for (std::size_t j = 0; j < n; ++j) {
                const double* b = &blocks[(i * n + j) * d];
                for (std::size_t k = 0; k < d; ++k) row[k].add(b[k] * v[j]);
            }
            for (std::size_t k = 0; k < d; ++k) av[i * d + k] = row[k].value();
        }
        for (std::size_t j = 0; j < n; ++j) {
            KahanSum s;
            for (std::size_t i = 0; i < n; ++i) {
                const double* b = &blocks[(i * n + j) * d];
                for (std::size_t k = 0; k < d; ++k) s.add(b[k] * av[i * d + k]);
            }
            out[j] = s.value();
        }
    };

    Rng rng(opt.seed);
    std::vector<double> v(n), w(n);
    for (auto& x : v) x = 1.0 + 0.25 * rng.uniform();
    auto normalize = [](std::vector<double>& u) {
        double nn = 0.0;
        for (double x : u) nn += x * x;
        nn = std::sqrt(nn);
        if (nn > 0.0)
            for (double& x : u) x /= nn;
        return nn;
    };
    normalize(v);

    double lambda = 0.0, lambda_prev = -1.0;
    std::size_t confirmations = 0;
    int restarts = 0;
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        apply_ata(v, w);
        double raw = 0.0;
        for (std::size_t j = 0; j < n; ++j) raw += v[j] * w[j];
        double wn = normalize(w);
        if (wn == 0.0) {
            // v in the null space; deterministic restart, at most a few tries.
            if (++restarts > 4) return 0.0;
            for (auto& x : v) x = rng.uniform(-1.0, 1.0);
            normalize(v);
            continue;
        }
        v.swap(w);
        lambda = raw;
        if (lambda_prev >= 0.0 && std::abs(lambda - lambda_prev) <= opt.rel_tol * std::max(lambda, 1e-300)) {
            if (++confirmations >= 3) return std::sqrt(std::max(lambda, 0.0));
        } else {
            confirmations = 0;
        }
        lambda_prev = lambda;
    }
    throw std::runtime_error("operator_norm: power iteration hit the cap; last value " +
                             format_full(std::sqrt(std::max(lambda, 0.0))) + ", last step " +
                             format_full(std::abs(lambda - lambda_prev)));
}

// sup over eps > 0 of |truncated transform of 1| at x, exact for atomic mu:
// sort atoms by decreasing distance from x and take the max over suffix sums
// (each suffix is the field for eps in one inter-distance interval).
inline double maximal_transform(const PhiFunction& phi, const AtomicMeasure& mu, const Point& x) {
    if (x.size() != mu.d) throw std::invalid_argument("maximal_transform: point dimension mismatch");
    struct Term {
        double r;
        Point k;
    };
    std::vector<Term> terms;
    terms.reserve(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) {
        double r = dist(x, mu.points[j]);
        if (r == 0.0) continue;
        Point kv = kernel_eval(phi, x, mu.points[j]);
        for (double& c : kv) c *= mu.masses[j];
        terms.push_back({r, std::move(kv)});
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.r > b.r; });
    std::vector<KahanSum> acc(mu.d);
    double best = 0.0;
    std::size_t i = 0;
    while (i < terms.size()) {
        // Atoms at one distance enter together: eps sweeps across their shell.
        double r = terms[i].r;
        while (i < terms.size() && terms[i].r == r) {
            for (std::size_t k = 0; k < mu.d; ++k) acc[k].add(terms[i].k[k]);
            ++i;
        }
        double n2 = 0.0;
        for (std::size_t k = 0; k < mu.d; ++k) n2 += sqr(acc[k].value());
        best = std::max(best, std::sqrt(n2));
    }
    return best;
}

// Antisymmetric double sum over a subset Q: sum over ordered pairs i != j in Q
// with separation > eps of K(x_i, x_j) m_i m_j. Zero in exact arithmetic; the
// scale field carries sum |K| m m for relative comparisons.
struct QuadraticFormResult {
    Point value;
    double scale = 0.0;
};

inline QuadraticFormResult quadratic_form(const PhiFunction& phi, const AtomicMeasure& mu,
                                          const std::vector<std::size_t>& Q, double eps) {
    std::vector<KahanSum> acc(mu.d);
    KahanSum scale;
    double e2 = eps * eps;
    for (std::size_t a = 0; a < Q.size(); ++a)
        for (std::size_t b = 0; b < Q.size(); ++b) {
            if (a == b) continue;
            std::size_t i = Q[a], j = Q[b];
            double d2 = dist2(mu.points[i], mu.points[j]);
            if (d2 == 0.0 || d2 <= e2) continue;
            double r = std::sqrt(d2);
            double mm = mu.masses[i] * mu.masses[j];
            double sc = mm / (r * phi.eval(r));
            for (std::size_t k = 0; k < mu.d; ++k)
                acc[k].add((mu.points[j][k] - mu.points[i][k]) * sc);
            scale.add(mm / phi.eval(r));
        }
    QuadraticFormResult out;
    out.value.resize(mu.d);
    for (std::size_t k = 0; k < mu.d; ++k) out.value[k] = acc[k].value();
    out.scale = scale.value();
    return out;
}

// Essential-supremum surrogate for |transform of 1| off the atoms: max over a
// uniform grid kept at distance >= h/2 from every atom.
inline double esssup_surrogate(const PhiFunction& phi, const AtomicMeasure& mu, double h,
                               std::size_t per_axis) {
    if (mu.size() == 0) return 0.0;
    Point lo(mu.d, kInf), hi(mu.d, -kInf);
    for (const auto& p : mu.points)
        for (std::size_t k = 0; k < mu.d; ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    double pad = std::max(mu.diameter(), h);
    std::vector<double> ones(mu.size(), 1.0);
    double best = 0.0;
    std::vector<std::size_t> idx(mu.d, 0);
    while (true) {
        Point x(mu.d);
        for (std::size_t k = 0; k < mu.d; ++k) {
            double u = per_axis == 1 ? 0.5 : double(idx[k]) / double(per_axis - 1);
            x[k] = lo[k] - pad + u * (hi[k] - lo[k] + 2.0 * pad);
        }
        bool clear = true;
        for (const auto& p : mu.points)
            if (dist(p, x) < 0.5 * h) {
                clear = false;
                break;
            }
        if (clear) best = std::max(best, norm2(apply_truncated(phi, mu, ones, 0.0, x)));
        std::size_t k = 0;
        while (k < mu.d && ++idx[k] == per_axis) idx[k++] = 0;
        if (k == mu.d) break;
    }
    return best;
}

} // namespace wolffcap
