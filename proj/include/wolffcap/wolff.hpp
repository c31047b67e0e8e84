#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "measure.hpp"
#include "metric.hpp"
#include "phi.hpp"

namespace wolffcap {

// Potentials of atomic measures are integrals of squared step functions, so
// they evaluate in closed form segment by segment. +infinity is a first-class
// result (unpunctured potential at an atom with no truncation floor).
struct WolffOptions {
    bool puncture = true;    // drop an atom exactly at the evaluation point
    double eps_floor = 0.0;  // integrate only over t > eps_floor
    double upper_cut = kInf; // integrate only over t < upper_cut
};

namespace detail {

// (distance, cumulative mass through that distance), distances strictly
// increasing; equal distances merge into one jump.
inline std::vector<std::pair<double, double>> mass_steps(const std::vector<double>& dists,
                                                         const std::vector<double>& masses) {
    std::vector<std::size_t> order(dists.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return dists[a] < dists[b]; });
    std::vector<std::pair<double, double>> steps;
    KahanSum cum;
    for (std::size_t idx : order) {
        cum.add(masses[idx]);
        if (!steps.empty() && steps.back().first == dists[idx])
            steps.back().second = cum.value();
        else
            steps.emplace_back(dists[idx], cum.value());
    }
    return steps;
}

inline std::vector<std::pair<double, double>> euclid_steps(const AtomicMeasure& mu, const Point& x,
                                                           bool puncture) {
    std::vector<double> dd, mm;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        double r = dist(x, mu.points[j]);
        if (puncture && r == 0.0) continue;
        dd.push_back(r);
        mm.push_back(mu.masses[j]);
    }
    return mass_steps(dd, mm);
}

} // namespace detail

// integral over (eps, cut) of (mu(B(x,t))/phi(t))^2 dphi/phi; the antiderivative
// of phi'/phi^3 is -1/(2 phi^2), so each constant-mass segment contributes
// M^2 (phi(lo)^{-2} - phi(hi)^{-2}) / 2.
inline double wolff_phi(const AtomicMeasure& mu, const PhiFunction& phi, const Point& x,
                        const WolffOptions& opt = {}) {
    if (x.size() != mu.d) throw std::invalid_argument("wolff_phi: point dimension mismatch");
    auto steps = detail::euclid_steps(mu, x, opt.puncture);
    KahanSum total;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        double M = steps[k].second;
        double lo = std::max(steps[k].first, opt.eps_floor);
        double hi = (k + 1 < steps.size()) ? steps[k + 1].first : kInf;
        hi = std::min(hi, opt.upper_cut);
        if (!(lo < hi)) continue;
        if (lo == 0.0) return kInf; // mass at the center and no floor
        double a = 1.0 / sqr(phi.eval(lo));
        double b = (hi == kInf) ? 0.0 : 1.0 / sqr(phi.eval(hi));
        total.add(0.5 * M * M * (a - b));
    }
    return total.value();
}

// Same integral in the induced metric with gauge r^s: segments contribute
// M^2 (r_lo^{-2s} - r_hi^{-2s}) / (2s), radii measured through the table.
inline double wolff_s_metric(const AtomicMeasure& mu, const PsiTable& psi, const Point& x,
                             const WolffOptions& opt = {}) {
    if (x.size() != mu.d) throw std::invalid_argument("wolff_s_metric: point dimension mismatch");
    double s = psi.s();
    std::vector<double> dd, mm;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        double r = dist(x, mu.points[j]);
        if (opt.puncture && r == 0.0) continue;
        dd.push_back(psi.eval(r));
        mm.push_back(mu.masses[j]);
    }
    auto steps = detail::mass_steps(dd, mm);
    KahanSum total;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        double M = steps[k].second;
        double lo = std::max(steps[k].first, opt.eps_floor);
        double hi = (k + 1 < steps.size()) ? steps[k + 1].first : kInf;
        hi = std::min(hi, opt.upper_cut);
        if (!(lo < hi)) continue;
        if (lo == 0.0) return kInf;
        double a = std::pow(lo, -2.0 * s);
        double b = (hi == kInf) ? 0.0 : std::pow(hi, -2.0 * s);
        total.add(M * M * (a - b) / (2.0 * s));
    }
    return total.value();
}

// integral over (eps, min(cut, 1)) of mu(B(x,t))^2 dt/t: logarithmic segments.
inline double wolff_bessel_2d3(const AtomicMeasure& mu, const Point& x, const WolffOptions& opt = {},
                               double unit_cut = 1.0) {
    if (x.size() != mu.d) throw std::invalid_argument("wolff_bessel_2d3: point dimension mismatch");
    auto steps = detail::euclid_steps(mu, x, opt.puncture);
    double cut = std::min(opt.upper_cut, unit_cut);
    KahanSum total;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        double M = steps[k].second;
        double lo = std::max(steps[k].first, opt.eps_floor);
        double hi = (k + 1 < steps.size()) ? steps[k + 1].first : kInf;
        hi = std::min(hi, cut);
        if (!(lo < hi)) continue;
        if (lo == 0.0) return kInf;
        total.add(M * M * std::log(hi / lo));
    }
    return total.value();
}

enum class WolffKind { Phi, SMetric, Bessel };

// sum over i in Q of m_i W(mu|Q, x_i): both the integrator and the potential
// see only the restricted measure.
inline double wolff_energy(const AtomicMeasure& mu, WolffKind kind, const std::vector<std::size_t>& Q,
                           const WolffOptions& opt, const PhiFunction* phi, const PsiTable* psi) {
    AtomicMeasure rest = mu.restricted(Q);
    KahanSum total;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        double w = 0.0;
        switch (kind) {
            case WolffKind::Phi:
                if (!phi) throw std::invalid_argument("wolff_energy: phi required");
                w = wolff_phi(rest, *phi, rest.points[i], opt);
                break;
            case WolffKind::SMetric:
                if (!psi) throw std::invalid_argument("wolff_energy: psi required");
                w = wolff_s_metric(rest, *psi, rest.points[i], opt);
                break;
            case WolffKind::Bessel:
                w = wolff_bessel_2d3(rest, rest.points[i], opt);
                break;
        }
        if (w == kInf) return kInf;
        total.add(rest.masses[i] * w);
    }
    return total.value();
}

inline std::vector<std::size_t> all_indices(const AtomicMeasure& mu) {
    std::vector<std::size_t> idx(mu.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return idx;
}

} // namespace wolffcap
