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
#include "transform.hpp"

namespace wolffcap {

struct Triangle {
    Point x, y, z;

    // Side lengths: a = |y-x|, b = |z-y|, c = |z-x|.
    double a() const { return dist(x, y); }
    double b() const { return dist(y, z); }
    double c() const { return dist(x, z); }
};

// Permutation sum of K(x,y).K(x,z) over the three cyclic relabelings (half the
// full six-term sum; transposed pairs repeat termwise). Evaluated through the
// law of cosines: with angles alpha, beta, gamma opposite sides a, b, c,
//   p = [phi(a) cos(alpha) + phi(b) cos(beta) + phi(c) cos(gamma)]
//       / (phi(a) phi(b) phi(c)).
// Collinear triples are fine; coincident vertices are an error.
inline double p_phi(const PhiFunction& phi, const Triangle& tri) {
    double a = tri.a(), b = tri.b(), c = tri.c();
    if (a == 0.0 || b == 0.0 || c == 0.0)
        throw std::domain_error("p_phi: coincident vertices");
    double cos_a = (b * b + c * c - a * a) / (2.0 * b * c);
    double cos_b = (a * a + c * c - b * b) / (2.0 * a * c);
    double cos_g = (a * a + b * b - c * c) / (2.0 * a * b);
    double fa = phi.eval(a), fb = phi.eval(b), fc = phi.eval(c);
    return (fa * cos_a + fb * cos_b + fc * cos_g) / (fa * fb * fc);
}

// Oracle form: average of K(u,v).K(u,w) over all six vertex orderings, halved.
// Kept expression-for-expression independent of the cosine route.
inline double p_phi_permutation_sum(const PhiFunction& phi, const Triangle& tri) {
    const Point* v[3] = {&tri.x, &tri.y, &tri.z};
    int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    KahanSum s;
    for (auto& p : perms) {
        Point k1 = kernel_eval(phi, *v[p[0]], *v[p[1]]);
        Point k2 = kernel_eval(phi, *v[p[0]], *v[p[2]]);
        KahanSum dot;
        for (std::size_t k = 0; k < k1.size(); ++k) dot.add(k1[k] * k2[k]);
        s.add(dot.value());
    }
    return 0.5 * s.value();
}

// Two-sided comparison bounds with sides relabeled so a >= b >= c.
// Upper (any increasing gauge):  p <= c/(b phi(b) phi(c)) + 2/(phi(a) phi(b)).
// Lower (concave, s in (0,1)):   p >  (1 - 2^{s-1}) / (4 phi(a) phi(b)).
struct Lemma33Margins {
    double p = 0.0;
    double upper_bound = 0.0;
    double lower_bound = 0.0;
    double upper_margin = 0.0; // upper_bound - p, >= 0 expected
    double lower_margin = 0.0; // p - lower_bound, > 0 expected (concave only)
    bool lower_checked = false;
};

inline Lemma33Margins check_comparison_bounds(const PhiFunction& phi, const Triangle& tri,
                                              bool want_lower) {
    Lemma33Margins out;
    double sides[3] = {tri.a(), tri.b(), tri.c()};
    std::sort(sides, sides + 3, std::greater<double>());
    double a = sides[0], b = sides[1], c = sides[2];
    out.p = p_phi(phi, tri);
    out.upper_bound = c / (b * phi.eval(b) * phi.eval(c)) + 2.0 / (phi.eval(a) * phi.eval(b));
    out.upper_margin = out.upper_bound - out.p;
    if (want_lower) {
        if (!phi.concave() || !(phi.s_doubling() < 1.0))
            throw std::invalid_argument(
                "check_comparison_bounds: lower bound needs a concave gauge with doubling exponent < 1");
        double s = phi.s_doubling();
        out.lower_bound = (1.0 - std::pow(2.0, s - 1.0)) / (4.0 * phi.eval(a) * phi.eval(b));
        out.lower_margin = out.p - out.lower_bound;
        out.lower_checked = true;
    }
    return out;
}

// Proof-traced constant for the energy lower bound: one third from the
// triple-sum symmetrization, (1 - 2^{s-1})/4 from the pointwise permutation-sum
// bound, and one doubling step 2^{-s} from comparing the largest side with
// twice the middle one.
inline double lower_ratio_reference(double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("lower_ratio_reference: s in (0,1)");
    return (1.0 - std::pow(2.0, s - 1.0)) / (12.0 * std::pow(2.0, s));
}

// Exact decomposition of the truncated energy integral over a subset:
//   total = pair + triple,
//   pair   = sum over ordered (i, j), i != j, of m_i m_j^2 / phi(|x_i-x_j|)^2,
//   triple = 2 sum over unordered distinct triples of p_phi m_i m_j m_k,
// equal to int |R_eps 1|^2 dmu when eps is below the minimum separation (the
// coincidence set of the triple integral then reduces to exact atom equality).
struct SymmetrizedEnergy {
    double pair_term = 0.0;
    double triple_term = 0.0;
    double total() const { return pair_term + triple_term; }
};

inline SymmetrizedEnergy symmetrize_energy(const PhiFunction& phi, const AtomicMeasure& mu,
                                           double eps) {
    mu.validate();
    double minsep = mu.min_separation();
    if (!(eps < minsep))
        throw std::invalid_argument("symmetrize_energy: eps " + format_full(eps) +
                                    " not below the minimum separation " + format_full(minsep) +
                                    " (truncation would merge atoms)");
    std::size_t n = mu.size();
    SymmetrizedEnergy out;
    KahanSum pair;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double r = dist(mu.points[i], mu.points[j]);
            pair.add(mu.masses[i] * mu.masses[j] * mu.masses[j] / sqr(phi.eval(r)));
        }
    out.pair_term = pair.value();
    KahanSum triple;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                double p = p_phi(phi, Triangle{mu.points[i], mu.points[j], mu.points[k]});
                triple.add(2.0 * p * mu.masses[i] * mu.masses[j] * mu.masses[k]);
            }
    out.triple_term = triple.value();
    return out;
}

} // namespace wolffcap
