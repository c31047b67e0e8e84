#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "common.hpp"
#include "measure.hpp"
#include "metric.hpp"
#include "phi.hpp"

// Reference potential values by adaptive quadrature of the defining integrals.
// Used only by the verification suite. Deliberately independent of the
// closed-form segment algebra: the ball mass is re-counted from the atom list
// at a point inside each smooth piece, and the radial weight is integrated
// numerically. Only the stopping rule for the far tail uses an antiderivative,
// and there it serves as an error bound, never as a contribution.

namespace wolffcap::oracle {

namespace detail {

inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol) {
    if (!(b > a)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Mass of the punctured open ball, counted fresh at radius t.
inline double ball_mass_at(const std::vector<double>& dists, const std::vector<double>& masses,
                           double t) {
    KahanSum m;
    for (std::size_t j = 0; j < dists.size(); ++j)
        if (dists[j] > 0.0 && dists[j] < t) m.add(masses[j]);
    return m.value();
}

// Piece boundaries: distinct positive distances plus caller-supplied extra
// knots (weight kinks), clipped to [floor, cut].
inline std::vector<double> piece_edges(const std::vector<double>& dists, double floor_r,
                                       double cut, const std::vector<double>& extra) {
    std::vector<double> edges;
    for (double r : dists)
        if (r > 0.0) edges.push_back(r);
    for (double r : extra) edges.push_back(r);
    edges.push_back(cut);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<double> out;
    for (double e : edges)
        if (e > floor_r && e <= cut) out.push_back(e);
    return out;
}

// Integrate M(t)^2 * w(t) over [floor, cut-or-infinity] piece by piece; the
// far tail is truncated once the caller's bound says the remainder is dust.
inline double potential_quadrature(const std::vector<double>& dists,
                                   const std::vector<double>& masses, double floor_r, double cut,
                                   const std::vector<double>& extra_knots,
                                   const std::function<double(double)>& weight,
                                   const std::function<double(double, double)>& tail_bound,
                                   double tol) {
    double dmax = 0.0;
    for (double r : dists) dmax = std::max(dmax, r);
    if (dmax == 0.0) return 0.0;
    double hard_cut = std::min(cut, kInf);
    std::vector<double> edges = piece_edges(dists, floor_r, std::min(hard_cut, 4.0 * dmax), extra_knots);

    KahanSum total;
    double lo = std::max(floor_r, 0.0);
    double first = kInf;
    for (double r : dists)
        if (r > 0.0) first = std::min(first, r);
    lo = std::max(lo, std::min(first, hard_cut)); // integrand is 0 below the first atom distance
    for (double hi : edges) {
        if (!(hi > lo)) continue;
        double mid = lo + 0.5 * (hi - lo);
        double mass = ball_mass_at(dists, masses, mid);
        if (mass > 0.0) {
            double piece = adaptive_simpson(weight, lo, hi, tol * 1e-3);
            total.add(mass * mass * piece);
        }
        lo = hi;
    }
    if (hard_cut > lo && hard_cut == kInf) {
        // Open upper end: march in octaves until the analytic remainder bound
        // is negligible against what is already accumulated.
        double mass = ball_mass_at(dists, masses, 2.0 * dmax);
        double t = lo;
        for (int k = 0; k < 4096; ++k) {
            double t2 = 2.0 * t;
            double piece = adaptive_simpson(weight, t, t2, tol * 1e-3);
            total.add(mass * mass * piece);
            t = t2;
            double rem = mass * mass * tail_bound(t, mass);
            if (rem <= 1e-14 * std::max(total.value(), 1e-300)) break;
        }
    } else if (hard_cut > lo) {
        double mass = ball_mass_at(dists, masses, lo + 0.5 * (hard_cut - lo));
        if (mass > 0.0) {
            double piece = adaptive_simpson(weight, lo, hard_cut, tol * 1e-3);
            total.add(mass * mass * piece);
        }
    }
    return total.value();
}

} // namespace detail

// W(x) = int (mu(B(x,t))/phi(t))^2 dphi(t)/phi(t); weight phi'(t)/phi(t)^3.
inline double wolff_phi_quadrature(const AtomicMeasure& mu, const PhiFunction& phi, const Point& x,
                                   double eps_floor = 0.0, double upper_cut = kInf,
                                   double tol = 1e-11) {
    std::vector<double> dists(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) dists[j] = dist(x, mu.points[j]);
    std::vector<double> extra;
    if (phi.family() == PhiFunction::Family::LogSqrt) extra.push_back(kLogSqrtCut);
    auto weight = [&](double t) {
        double p = phi.eval(t);
        return phi.deriv(t) / (p * p * p);
    };
    auto tail = [&](double t, double) {
        double p = phi.eval(t);
        return 0.5 / (p * p);
    };
    return detail::potential_quadrature(dists, mu.masses, eps_floor, upper_cut, extra, weight,
                                        tail, tol);
}

// W_s(x) = int (mu(B_psi(x,t))/t^s)^2 dt/t in the transformed metric;
// weight t^(-2s-1), distances pushed through psi.
inline double wolff_s_metric_quadrature(const AtomicMeasure& mu, const PsiTable& psi,
                                        const Point& x, double eps_floor = 0.0,
                                        double upper_cut = kInf, double tol = 1e-11) {
    const double s = psi.s();
    std::vector<double> dists(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) dists[j] = psi.eval(dist(x, mu.points[j]));
    auto weight = [&](double t) { return std::pow(t, -2.0 * s - 1.0); };
    auto tail = [&](double t, double) { return std::pow(t, -2.0 * s) / (2.0 * s); };
    return detail::potential_quadrature(dists, mu.masses, eps_floor, upper_cut, {}, weight, tail,
                                        tol);
}

// Truncated log potential: int_0^cut mu(B(x,t))^2 dt/t.
inline double wolff_bessel_quadrature(const AtomicMeasure& mu, const Point& x, double cut = 1.0,
                                      double eps_floor = 0.0, double tol = 1e-11) {
    std::vector<double> dists(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) dists[j] = dist(x, mu.points[j]);
    auto weight = [](double t) { return 1.0 / t; };
    auto tail = [](double, double) { return 0.0; };
    return detail::potential_quadrature(dists, mu.masses, eps_floor, cut, {}, weight, tail, tol);
}

} // namespace wolffcap::oracle
