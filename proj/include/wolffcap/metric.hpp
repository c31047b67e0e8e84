#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "kernel.hpp"
#include "measure.hpp"
#include "phi.hpp"

namespace wolffcap {

// Minimal-decomposition transform of phi: psi(r) = inf over finite splittings
// r = sum r_i of sum phi(r_i)^{1/s}, computed by rod-cutting dynamic programming
// on a uniform grid. Node values satisfy, exactly in floating point after a
// lowering closure: psi[0] = 0, psi nondecreasing, psi[k] <= psi[j] + psi[k-j],
// psi[k] <= g(k dr) where g = phi^{1/s}. Ties prefer the unsplit value.
//
// Off-grid evaluation is monotone piecewise-linear interpolation capped at g:
// chords can poke above g only where g is convex and no split helps, and there
// the true infimum equals g, so the cap restores it (and keeps the kernel size
// bound exact pointwise).
class PsiTable {
public:
    PsiTable(const PhiFunction& phi, double r_max, std::size_t n_grid)
        : phi_(phi), r_max_(r_max), n_(n_grid) {
        if (!(r_max > 0.0)) throw std::invalid_argument("psi: r_max must be positive");
        if (n_grid < 8) throw std::invalid_argument("psi: need at least 8 grid nodes");
        s_ = phi.s_doubling();
        if (!(s_ > 0.0)) throw std::invalid_argument("psi: doubling exponent must be positive");
        dr_ = r_max / double(n_ - 1);
        g_.resize(n_);
        psi_.resize(n_);
        g_[0] = 0.0;
        for (std::size_t k = 1; k < n_; ++k) g_[k] = g_eval(double(k) * dr_);
        psi_[0] = 0.0;
        for (std::size_t k = 1; k < n_; ++k) {
            double best = g_[k];
            for (std::size_t j = 1; j < k; ++j) {
                double cand = psi_[j] + g_[k - j];
                if (cand < best) best = cand;
            }
            psi_[k] = best;
        }
        // Lowering closure: enforce subadditivity and monotonicity exactly in
        // floating point (DP chains can differ from re-associated sums by ulps).
        bool changed = true;
        int sweeps = 0;
        while (changed && sweeps < 8) {
            changed = false;
            ++sweeps;
            for (std::size_t k = 2; k < n_; ++k)
                for (std::size_t j = 1; j + j <= k; ++j) {
                    double v = psi_[j] + psi_[k - j];
                    if (v < psi_[k]) {
                        psi_[k] = v;
                        changed = true;
                    }
                }
            for (std::size_t k = n_ - 1; k-- > 1;)
                if (psi_[k] > psi_[k + 1]) {
                    psi_[k] = psi_[k + 1];
                    changed = true;
                }
        }
    }

    std::size_t size() const { return n_; }
    double delta_r() const { return dr_; }
    double r_max() const { return r_max_; }
    double s() const { return s_; }
    const PhiFunction& phi() const { return phi_; }
    double node_r(std::size_t k) const { return double(k) * dr_; }
    double node_psi(std::size_t k) const { return psi_.at(k); }
    double node_g(std::size_t k) const { return g_.at(k); }

    double g_eval(double t) const { return t == 0.0 ? 0.0 : std::pow(phi_.eval(t), 1.0 / s_); }

    double eval(double r) const {
        if (!(r >= 0.0) || !std::isfinite(r))
            throw std::domain_error("psi: invalid radius " + format_full(r));
        if (r == 0.0) return 0.0;
        if (r > r_max_ * (1.0 + 1e-12))
            throw std::domain_error("psi: radius " + format_full(r) + " beyond table range " +
                                    format_full(r_max_));
        double pos = std::min(r, r_max_) / dr_;
        std::size_t lo = std::min(std::size_t(pos), n_ - 2);
        double w = pos - double(lo);
        double pwl = psi_[lo] + w * (psi_[lo + 1] - psi_[lo]);
        return std::min(pwl, g_eval(r));
    }

    double distance(const Point& x, const Point& y) const { return eval(dist(x, y)); }

private:
    PhiFunction phi_;
    double r_max_ = 0.0;
    double dr_ = 0.0;
    double s_ = 0.0;
    std::size_t n_ = 0;
    std::vector<double> g_, psi_;
};

inline PsiTable compute_psi(const PhiFunction& phi, double r_max, std::size_t n_grid) {
    return PsiTable(phi, r_max, n_grid);
}

// Two-sided envelope margins at the table nodes: phi(r)^{1/s}/2 <= psi(r) <= phi(r)^{1/s}.
struct PsiSandwichReport {
    double min_lower_margin = kInf;  // psi - g/2, most negative is worst
    double max_upper_excess = -kInf; // psi - g, most positive is worst
    std::size_t worst_lower_node = 0, worst_upper_node = 0;
    bool pass(double lower_guard = 1e-9) const {
        return min_lower_margin >= -lower_guard && max_upper_excess <= 0.0;
    }
};

inline PsiSandwichReport psi_sandwich(const PsiTable& psi) {
    PsiSandwichReport rep;
    for (std::size_t k = 1; k < psi.size(); ++k) {
        double g = psi.node_g(k);
        double v = psi.node_psi(k);
        double lower = v - 0.5 * g;
        double upper = v - g;
        if (lower < rep.min_lower_margin) {
            rep.min_lower_margin = lower;
            rep.worst_lower_node = k;
        }
        if (upper > rep.max_upper_excess) {
            rep.max_upper_excess = upper;
            rep.worst_upper_node = k;
        }
    }
    return rep;
}

// Kernel regularity in the induced metric dist(x,y) = psi(|x-y|): size bound
// |K| * dist^s <= 1 (exact via the capped evaluation) and a smoothness ratio
// |K(x,y) - K(x',y)| * dist(x,y)^{s+1} / dist(x,x') checked against 4*(2+2^s)
// whenever dist(x,x') <= dist(x,y)/2.
struct CzReport {
    double size_constant = 1.0;
    double smooth_constant = 0.0; // 4*(2+2^s)
    double holder_exponent = 1.0;
    double s = 0.0;
    double max_size_ratio = 0.0;
    double max_smooth_ratio = 0.0;
    std::size_t samples = 0;
    bool size_certified = true; // psi(t) <= phi(t)^{1/s} held exactly at all samples
    bool pass() const {
        return size_certified && max_size_ratio <= 1.0 + 1e-12 &&
               max_smooth_ratio <= smooth_constant;
    }
};

inline CzReport verify_cz_kernel(const PhiFunction& phi, const PsiTable& psi, std::size_t d,
                                 std::size_t sample_count, std::uint64_t seed) {
    if (d == 0) throw std::invalid_argument("verify_cz_kernel: dimension must be >= 1");
    Rng rng(seed);
    CzReport rep;
    rep.s = psi.s();
    rep.smooth_constant = 4.0 * (2.0 + std::pow(2.0, rep.s));
    double side = psi.r_max() / (2.0 * std::sqrt(double(d)));
    while (rep.samples < sample_count) {
        Point x = rng.in_cube(d, 0.0, side);
        Point y = rng.in_cube(d, 0.0, side);
        double t = dist(x, y);
        if (t == 0.0) continue;
        double dxy = psi.eval(t);

        double g = psi.g_eval(t);
        if (!(psi.eval(t) <= g)) rep.size_certified = false;
        rep.max_size_ratio = std::max(rep.max_size_ratio, std::pow(dxy, rep.s) / phi.eval(t));

        // Perturbed evaluation point at metric distance <= dist(x,y)/2.
        Point u = rng.unit_vector(d);
        double rho = rng.uniform(0.0, 0.5 * t);
        Point xp(d);
        double dxxp = 0.0;
        for (int shrink = 0; shrink < 200; ++shrink) {
            for (std::size_t k = 0; k < d; ++k) xp[k] = x[k] + rho * u[k];
            double sep = dist(x, xp);
            if (sep == 0.0) break;
            dxxp = psi.eval(sep);
            if (dxxp <= 0.5 * dxy) break;
            rho *= 0.5;
        }
        if (dist(x, xp) == 0.0 || dist(xp, y) == 0.0 || dxxp == 0.0 || dxxp > 0.5 * dxy) continue;

        Point k1 = kernel_eval(phi, x, y);
        Point k2 = kernel_eval(phi, xp, y);
        double diff2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) diff2 += sqr(k1[k] - k2[k]);
        double ratio = std::sqrt(diff2) * std::pow(dxy, rep.s + 1.0) / dxxp;
        rep.max_smooth_ratio = std::max(rep.max_smooth_ratio, ratio);
        ++rep.samples;
    }
    return rep;
}

// Euclidean balls B(x, r) and induced-metric balls of radius psi(r) contain the
// same atoms; growth bounds transfer with constants 2^s (forward) and 1 (back).
struct BallCorrespondenceReport {
    std::size_t pairs_checked = 0;
    std::size_t atom_set_mismatches = 0;
    double max_metric_growth_ratio = 0.0; // mu(metric ball)/t^s after Euclidean rescale
    double metric_growth_bound = 0.0;     // 2^s
    double max_euclid_ratio = 0.0;        // nu(B(x,r))/phi(r) after metric rescale
    bool pass() const {
        return atom_set_mismatches == 0 &&
               max_metric_growth_ratio <= metric_growth_bound * (1.0 + 1e-9) &&
               max_euclid_ratio <= 1.0 + 1e-9;
    }
};

inline BallCorrespondenceReport ball_correspondence_check(const PhiFunction& phi, const PsiTable& psi,
                                                          const AtomicMeasure& mu, double h,
                                                          std::size_t n_radii = 32) {
    if (!(h > 0.0)) throw std::invalid_argument("ball_correspondence_check: h must be positive");
    mu.validate();
    BallCorrespondenceReport rep;
    rep.metric_growth_bound = std::pow(2.0, psi.s());

    double r_hi = std::min(std::max(2.0 * mu.diameter(), 2.0 * h), psi.r_max());
    std::vector<double> radii(n_radii);
    for (std::size_t k = 0; k < n_radii; ++k)
        radii[k] = h * std::pow(r_hi / h, double(k) / double(n_radii - 1));

    // Scale so the sampled Euclidean growth ratio is exactly 1 at its argmax.
    double worst_e = 0.0;
    for (const auto& c : mu.points)
        for (double r : radii)
            worst_e = std::max(worst_e, ball_mass(mu, {c, r, true, false}) / phi.eval(r));
    AtomicMeasure mu_e = worst_e > 0.0 ? mu.scaled(1.0 / worst_e) : mu;

    for (const auto& c : mu.points) {
        for (double r : radii) {
            ++rep.pairs_checked;
            double t = psi.eval(r);
            for (std::size_t j = 0; j < mu.size(); ++j) {
                bool in_euclid = dist(mu.points[j], c) < r;
                bool in_metric = psi.distance(mu.points[j], c) < t;
                if (in_euclid != in_metric) ++rep.atom_set_mismatches;
            }
            double metric_mass = 0.0;
            for (std::size_t j = 0; j < mu_e.size(); ++j)
                if (psi.distance(mu_e.points[j], c) < t) metric_mass += mu_e.masses[j];
            if (t > 0.0)
                rep.max_metric_growth_ratio =
                    std::max(rep.max_metric_growth_ratio, metric_mass / std::pow(t, psi.s()));
        }
    }

    // Converse: normalize to metric growth <= 1, then Euclidean ratio <= 1.
    double worst_m = 0.0;
    for (const auto& c : mu.points)
        for (double r : radii) {
            double t = psi.eval(r);
            double mm = 0.0;
            for (std::size_t j = 0; j < mu.size(); ++j)
                if (psi.distance(mu.points[j], c) < t) mm += mu.masses[j];
            if (t > 0.0) worst_m = std::max(worst_m, mm / std::pow(t, psi.s()));
        }
    if (worst_m > 0.0) {
        AtomicMeasure nu = mu.scaled(1.0 / worst_m);
        for (const auto& c : mu.points)
            for (double r : radii)
                rep.max_euclid_ratio =
                    std::max(rep.max_euclid_ratio, ball_mass(nu, {c, r, true, false}) / phi.eval(r));
    }
    return rep;
}

} // namespace wolffcap
