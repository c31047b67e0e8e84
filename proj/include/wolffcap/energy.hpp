#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "curvature.hpp"
#include "measure.hpp"
#include "metric.hpp"
#include "phi.hpp"
#include "transform.hpp"
#include "wolff.hpp"

namespace wolffcap {

// int_Q |R_eps chi_Q|^2 dmu computed as the direct double sum on mu|Q.
inline double truncated_energy(const PhiFunction& phi, const AtomicMeasure& mu,
                               const std::vector<std::size_t>& Q, double eps) {
    AtomicMeasure rest = mu.restricted(Q);
    std::vector<double> ones(rest.size(), 1.0);
    KahanSum total;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        Point field = apply_truncated(phi, rest, ones, eps, rest.points[i]);
        total.add(rest.masses[i] * sqr(norm2(field)));
    }
    return total.value();
}

struct RatioRecord {
    double energy = 0.0;
    double wolff = 0.0;
    double ratio = 0.0; // 0 when both sides are empty (|Q| <= 1)
};

// Energy over punctured potential energy, both restricted to Q and truncated at
// the same eps. Requires eps below the minimum separation within Q so that the
// decomposition applies and no pair is merged.
inline RatioRecord energy_upper_ratio(const PhiFunction& phi, const AtomicMeasure& mu,
                                      const std::vector<std::size_t>& Q, double eps) {
    RatioRecord rec;
    if (Q.size() <= 1) return rec;
    AtomicMeasure rest = mu.restricted(Q);
    double minsep = rest.min_separation();
    if (!(eps < minsep))
        throw std::invalid_argument("energy_upper_ratio: eps must be below the minimum separation");
    rec.energy = truncated_energy(phi, mu, Q, eps);
    WolffOptions opt;
    opt.puncture = true;
    opt.eps_floor = eps;
    rec.wolff = wolff_energy(mu, WolffKind::Phi, Q, opt, &phi, nullptr);
    rec.ratio = rec.energy / rec.wolff;
    return rec;
}

// Full (eps -> 0) energy over the punctured potential energy; bounded below by
// lower_ratio_reference(s) for concave gauges with doubling exponent s < 1.
inline RatioRecord energy_lower_ratio(const PhiFunction& phi, const AtomicMeasure& mu) {
    if (!phi.concave() || !(phi.s_doubling() < 1.0))
        throw std::invalid_argument("energy_lower_ratio: needs a concave gauge with s < 1");
    RatioRecord rec;
    if (mu.size() <= 1) return rec;
    auto Q = all_indices(mu);
    rec.energy = truncated_energy(phi, mu, Q, 0.0);
    WolffOptions opt;
    opt.puncture = true;
    rec.wolff = wolff_energy(mu, WolffKind::Phi, Q, opt, &phi, nullptr);
    rec.ratio = rec.energy / rec.wolff;
    return rec;
}

// Comparison data for the operator norm against the two potential functionals.
struct NormWolffReport {
    double norm = 0.0;            // max over truncation breakpoints
    double norm_sq = 0.0;
    double sup_metric_wolff = 0.0;  // sup over atoms, punctured, induced metric
    double mean_phi_wolff = 0.0;    // potential energy / total mass
    double upper_ratio = 0.0;       // norm^2 / sup_metric_wolff
    double lower_ratio = 0.0;       // norm^2 / mean_phi_wolff
};

inline NormWolffReport norm_vs_wolff_sup(const PhiFunction& phi, const PsiTable& psi,
                                         const AtomicMeasure& mu,
                                         const OperatorNormOptions& opt = {}) {
    mu.validate();
    NormWolffReport rep;
    std::vector<double> eps_grid = truncation_breakpoints(mu.points);
    eps_grid.insert(eps_grid.begin(), 0.0);
    for (double e : eps_grid) rep.norm = std::max(rep.norm, operator_norm(phi, mu, e, opt));
    rep.norm_sq = sqr(rep.norm);

    WolffOptions wopt;
    wopt.puncture = true;
    for (const auto& x : mu.points)
        rep.sup_metric_wolff = std::max(rep.sup_metric_wolff, wolff_s_metric(mu, psi, x, wopt));

    double mass = mu.total_mass();
    double wphi = wolff_energy(mu, WolffKind::Phi, all_indices(mu), wopt, &phi, nullptr);
    rep.mean_phi_wolff = wphi / mass;
    if (rep.sup_metric_wolff > 0.0) rep.upper_ratio = rep.norm_sq / rep.sup_metric_wolff;
    if (rep.mean_phi_wolff > 0.0) rep.lower_ratio = rep.norm_sq / rep.mean_phi_wolff;
    return rep;
}

} // namespace wolffcap
