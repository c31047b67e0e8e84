#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "capacity.hpp"
#include "common.hpp"
#include "config.hpp"
#include "curvature.hpp"
#include "energy.hpp"
#include "lp.hpp"
#include "measure.hpp"
#include "metric.hpp"
#include "phi.hpp"
#include "quadrature_oracle.hpp"
#include "transform.hpp"
#include "wolff.hpp"

// The ten gate checks. Each one is self-contained and deterministic; seeds and
// tolerances are pinned here, not configurable, so a pass means the same thing
// on every machine.

namespace wolffcap {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

namespace acceptance {

namespace detail {

inline std::string strfmt(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline std::vector<double> geometric(double lo, double hi, std::size_t n) {
    std::vector<double> out;
    double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(n - 1));
    double r = lo;
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back(r);
        r *= ratio;
    }
    out.back() = hi;
    return out;
}

inline std::vector<PhiFunction> standard_families() {
    return {PhiFunction::power(0.3), PhiFunction::power(0.7), PhiFunction::log_sqrt()};
}

} // namespace detail

// 1. The symmetrized pair + triple decomposition reproduces the truncated
//    energy exactly (identity, not an estimate).
inline CriterionResult criterion_symmetrization() {
    detail::Timer timer;
    constexpr double kTol = 1e-10;
    auto fams = detail::standard_families();
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const PhiFunction& phi = fams[i % 3];
        std::size_t d = 1 + (i / 3) % 3;
        std::size_t n = 2 + rng.below(24);
        AtomicMeasure mu = random_measure(d, n, 1.0, 1e-4, rng);
        double eps = 0.5 * mu.min_separation();
        double direct = truncated_energy(phi, mu, all_indices(mu), eps);
        SymmetrizedEnergy se = symmetrize_energy(phi, mu, eps);
        double rel = std::fabs(se.total() - direct) / std::max(std::fabs(direct), 1e-300);
        worst = std::max(worst, rel);
    }
    CriterionResult r{1, "symmetrization-identity", worst <= kTol,
                      detail::strfmt("max relative gap %.3e over 200 measures (tol %.0e)", worst,
                                     kTol)};
    r.seconds = timer.seconds();
    return r;
}

// 2. Sandwich bounds at every psi node, exact identity for power gauges, and
//    the metric axioms on random triples.
inline CriterionResult criterion_sandwich_metric() {
    detail::Timer timer;
    constexpr double kPowerTol = 1e-12;
    constexpr double kAxiomSlack = 1e-12;
    auto fams = detail::standard_families();
    {
        auto knots = detail::geometric(1e-6, 8.0, 96);
        std::vector<double> vals;
        PhiFunction p0 = PhiFunction::log_sqrt();
        for (double t : knots) vals.push_back(p0.eval(t));
        fams.push_back(PhiFunction::tabulated(knots, vals));
    }
    bool ok = true;
    double worst_lower = kInf, worst_excess = -kInf, worst_power = 0.0, worst_tri = -kInf;
    for (std::size_t f = 0; f < fams.size(); ++f) {
        const PhiFunction& phi = fams[f];
        PsiTable psi(phi, 8.0, 4096);
        PsiSandwichReport rep = psi_sandwich(psi);
        ok = ok && rep.pass();
        worst_lower = std::min(worst_lower, rep.min_lower_margin);
        worst_excess = std::max(worst_excess, rep.max_upper_excess);
        if (phi.family() == PhiFunction::Family::Power) {
            for (std::size_t k = 1; k < psi.size(); ++k) {
                double rr = psi.node_r(k);
                worst_power = std::max(worst_power, std::fabs(psi.node_psi(k) - rr) / rr);
            }
            ok = ok && worst_power <= kPowerTol;
        }
        Rng rng(202 + static_cast<std::uint64_t>(f));
        double side = 8.0 / (2.0 * std::sqrt(2.0));
        for (int k = 0; k < 10000; ++k) {
            Point x = rng.in_cube(2, 0.0, side), y = rng.in_cube(2, 0.0, side),
                  z = rng.in_cube(2, 0.0, side);
            double excess = psi.distance(x, z) - psi.distance(x, y) - psi.distance(y, z);
            worst_tri = std::max(worst_tri, excess);
        }
        ok = ok && worst_tri <= kAxiomSlack;
    }
    CriterionResult r{2, "psi-sandwich-and-metric", ok,
                      detail::strfmt("lower margin %.3e, upper excess %.3e, power id %.3e, "
                                     "triangle excess %.3e",
                                     worst_lower, worst_excess, worst_power, worst_tri)};
    r.seconds = timer.seconds();
    return r;
}

// 3. Permutation-sum comparison bounds: zero violations over 10^6 random
//    triangles per exponent, equilateral sanity value 3/2.
inline CriterionResult criterion_triangle_bounds() {
    detail::Timer timer;
    constexpr double kEqTol = 1e-12;
    const double exponents[3] = {0.3, 0.5, 0.9};
    std::size_t violations = 0;
    double min_upper = kInf, min_lower = kInf;
    for (double s : exponents) {
        PhiFunction phi = PhiFunction::power(s);
        Rng rng(303 + static_cast<std::uint64_t>(s * 10));
        for (int k = 0; k < 1000000; ++k) {
            Triangle tri{rng.in_cube(2, 0.0, 1.0), rng.in_cube(2, 0.0, 1.0),
                         rng.in_cube(2, 0.0, 1.0)};
            if (tri.a() == 0.0 || tri.b() == 0.0 || tri.c() == 0.0) continue;
            Lemma33Margins m = check_comparison_bounds(phi, tri, true);
            min_upper = std::min(min_upper, m.upper_margin);
            min_lower = std::min(min_lower, m.lower_margin);
            if (m.upper_margin < 0.0 || m.lower_margin < 0.0) ++violations;
        }
    }
    Triangle eq{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    double p_eq = p_phi(PhiFunction::power(1.0), eq);
    bool ok = violations == 0 && std::fabs(p_eq - 1.5) <= kEqTol;
    CriterionResult r{3, "triangle-comparison-bounds", ok,
                      detail::strfmt("violations %zu/3e6, min margins %.3e/%.3e, equilateral "
                                     "|p-3/2| = %.3e",
                                     violations, min_upper, min_lower, std::fabs(p_eq - 1.5))};
    r.seconds = timer.seconds();
    return r;
}

// 4. Closed-form potentials against adaptive quadrature of the defining
//    integrals, plus the exact half-identity between the log-gauge potential
//    and the truncated log potential below the gauge cut.
inline CriterionResult criterion_wolff_closed_forms() {
    detail::Timer timer;
    constexpr double kQuadTol = 1e-8;
    constexpr double kIdTol = 1e-12;
    auto fams = detail::standard_families();
    Rng rng(404);
    double worst_phi = 0.0, worst_s = 0.0, worst_bessel = 0.0, worst_half = 0.0, worst_pow = 0.0;

    for (int i = 0; i < 100; ++i) {
        const PhiFunction& phi = fams[i % 3];
        std::size_t d = 1 + i % 3;
        AtomicMeasure mu = random_measure(d, 2 + rng.below(15), 1.0, 1e-3, rng);
        Point x = (i % 2 == 0) ? mu.points[0] : rng.in_cube(d, 0.0, 1.0);
        double closed = wolff_phi(mu, phi, x, {});
        double quad = oracle::wolff_phi_quadrature(mu, phi, x);
        worst_phi = std::max(worst_phi, std::fabs(closed - quad) / std::max(quad, 1e-300));
    }

    PsiTable psi_log(PhiFunction::log_sqrt(), 6.0, 4096);
    PsiTable psi_pow(PhiFunction::power(0.7), 6.0, 4096);
    for (int i = 0; i < 100; ++i) {
        const PsiTable& psi = (i % 2 == 0) ? psi_log : psi_pow;
        std::size_t d = 1 + i % 3;
        AtomicMeasure mu = random_measure(d, 2 + rng.below(12), 1.0, 1e-3, rng);
        Point x = (i % 2 == 0) ? mu.points[0] : rng.in_cube(d, 0.0, 1.0);
        double closed = wolff_s_metric(mu, psi, x, {});
        double quad = oracle::wolff_s_metric_quadrature(mu, psi, x);
        worst_s = std::max(worst_s, std::fabs(closed - quad) / std::max(quad, 1e-300));
    }

    for (int i = 0; i < 100; ++i) {
        std::size_t d = 1 + i % 3;
        AtomicMeasure mu = random_measure(d, 2 + rng.below(12), 0.4, 1e-3, rng);
        Point x = (i % 2 == 0) ? mu.points[0] : rng.in_cube(d, 0.0, 0.4);
        double closed = wolff_bessel_2d3(mu, x, {});
        double quad = oracle::wolff_bessel_quadrature(mu, x);
        worst_bessel = std::max(worst_bessel, std::fabs(closed - quad) / std::max(quad, 1e-300));
    }

    PhiFunction p0 = PhiFunction::log_sqrt();
    for (int i = 0; i < 50; ++i) {
        std::size_t d = 1 + i % 3;
        AtomicMeasure mu = random_measure(d, 2 + rng.below(10), 0.05, 1e-4, rng);
        Point x = (i % 2 == 0) ? mu.points[0] : rng.in_cube(d, 0.0, 0.05);
        WolffOptions opt;
        opt.upper_cut = kLogSqrtCut;
        double wphi = wolff_phi(mu, p0, x, opt);
        double wlog = wolff_bessel_2d3(mu, x, {}, kLogSqrtCut);
        worst_half = std::max(worst_half,
                              std::fabs(wphi - 0.5 * wlog) / std::max(std::fabs(wphi), 1e-300));
    }

    PhiFunction half = PhiFunction::power(0.5);
    PsiTable psi_half(half, 6.0, 2048);
    for (int i = 0; i < 25; ++i) {
        std::size_t d = 1 + i % 3;
        AtomicMeasure mu = random_measure(d, 2 + rng.below(10), 1.0, 1e-3, rng);
        double wphi = wolff_phi(mu, half, mu.points[0], {});
        double ws = wolff_s_metric(mu, psi_half, mu.points[0], {});
        worst_pow = std::max(worst_pow,
                             std::fabs(wphi - 0.5 * ws) / std::max(std::fabs(wphi), 1e-300));
    }

    bool ok = worst_phi <= kQuadTol && worst_s <= kQuadTol && worst_bessel <= kQuadTol &&
              worst_half <= kIdTol && worst_pow <= kIdTol;
    CriterionResult r{4, "wolff-closed-forms", ok,
                      detail::strfmt("quad gaps %.2e/%.2e/%.2e (tol %.0e), half-id %.2e, "
                                     "power-id %.2e (tol %.0e)",
                                     worst_phi, worst_s, worst_bessel, kQuadTol, worst_half,
                                     worst_pow, kIdTol)};
    r.seconds = timer.seconds();
    return r;
}

// 5. Kernel size and smoothness constants in the transformed metric.
inline CriterionResult criterion_cz_constants() {
    detail::Timer timer;
    auto fams = detail::standard_families();
    bool ok = true;
    std::string parts;
    for (std::size_t f = 0; f < fams.size(); ++f) {
        PsiTable psi(fams[f], 8.0, 4096);
        CzReport rep = verify_cz_kernel(fams[f], psi, 2, 100000, 505 + f);
        ok = ok && rep.pass();
        parts += detail::strfmt("[size %.6f, smooth %.3f<=%.3f] ", rep.max_size_ratio,
                                rep.max_smooth_ratio, rep.smooth_constant);
    }
    CriterionResult r{5, "cz-kernel-constants", ok, parts};
    r.seconds = timer.seconds();
    return r;
}

// 6. Energy versus Wolff-energy ratios: bounded spread above, proof-traced
//    constant below, across sizes 5..200.
inline CriterionResult criterion_energy_ratios() {
    detail::Timer timer;
    constexpr double kSpreadMax = 20.0;
    auto fams = detail::standard_families();
    const std::size_t sizes[6] = {5, 10, 25, 50, 100, 200};
    bool ok = true;
    std::size_t violations = 0;
    double worst_spread = 0.0, min_lower_gap = kInf;
    Rng rng(606);
    for (const PhiFunction& phi : fams) {
        double cs = lower_ratio_reference(phi.s_doubling());
        double up_min = kInf, up_max = 0.0;
        int counter = 0;
        for (std::size_t n : sizes) {
            for (int rep = 0; rep < 2; ++rep) {
                std::size_t d = 1 + (counter++ % 3);
                AtomicMeasure mu = random_measure(d, n, 1.0, 1e-3, rng);
                RatioRecord up = energy_upper_ratio(phi, mu, all_indices(mu),
                                                    0.5 * mu.min_separation());
                RatioRecord low = energy_lower_ratio(phi, mu);
                if (!std::isfinite(up.ratio) || up.ratio <= 0.0) ok = false;
                up_min = std::min(up_min, up.ratio);
                up_max = std::max(up_max, up.ratio);
                if (low.ratio < cs) ++violations;
                min_lower_gap = std::min(min_lower_gap, low.ratio - cs);
            }
        }
        double spread = up_max / up_min;
        worst_spread = std::max(worst_spread, spread);
        ok = ok && spread <= kSpreadMax;
    }
    ok = ok && violations == 0;
    CriterionResult r{6, "energy-wolff-ratios", ok,
                      detail::strfmt("worst upper spread %.2f (max %.0f), lower violations %zu, "
                                     "min gap above c(s) %.3e",
                                     worst_spread, kSpreadMax, violations, min_lower_gap)};
    r.seconds = timer.seconds();
    return r;
}

// 7. The symmetric quadratic form of the truncated transform vanishes.
inline CriterionResult criterion_quadratic_form() {
    detail::Timer timer;
    constexpr double kTol = 1e-12;
    auto fams = detail::standard_families();
    Rng rng(707);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const PhiFunction& phi = fams[i % 3];
        std::size_t d = 1 + i % 3;
        AtomicMeasure mu = random_measure(d, 3 + rng.below(20), 1.0, 1e-3, rng);
        std::vector<std::size_t> Q;
        for (std::size_t j = 0; j < mu.size(); ++j)
            if (rng.below(2) == 0) Q.push_back(j);
        if (Q.empty()) Q.push_back(0);
        double eps = rng.uniform(0.0, 0.5 * mu.diameter());
        QuadraticFormResult qr = quadratic_form(phi, mu, Q, eps);
        double rel = qr.scale > 0.0 ? norm2(qr.value) / qr.scale : norm2(qr.value);
        worst = std::max(worst, rel);
    }
    CriterionResult r{7, "quadratic-form-vanishing", worst <= kTol,
                      detail::strfmt("max |form|/scale %.3e over 500 draws (tol %.0e)", worst,
                                     kTol)};
    r.seconds = timer.seconds();
    return r;
}

// 8. Capacity estimator structure: star below plus, inclusion monotonicity
//    with shared constraint families, exact power-dilation scaling.
inline CriterionResult criterion_capacity_structure() {
    detail::Timer timer;
    constexpr double kRelGuard = 1e-9;
    constexpr double kAbsGuard = 1e-12;
    constexpr double kDilTol = 1e-9;
    const double h = 0.02;
    bool ok = true;
    double worst_star = -kInf, worst_mono = -kInf, worst_dil = 0.0;
    Rng rng(808);

    for (int i = 0; i < 100; ++i) {
        std::size_t d = 1 + i % 2;
        PhiFunction phi = (i % 2 == 0) ? PhiFunction::power(0.5) : PhiFunction::log_sqrt();
        auto pts = generate_set(SetKind::Random, d, 2 + rng.below(7), 1.0, 0.05, rng);
        GammaOptions opt;
        opt.seed = 808;
        opt.eval_points = wolffcap::detail::lattice_eval_points(pts, 0.2, 1);
        opt.eval_points.insert(opt.eval_points.end(), pts.begin(), pts.end());
        CapacityEstimate plus = gamma_phi_plus_lower(pts, phi, h, opt);
        CapacityEstimate star = gamma_star_estimate(pts, phi, h, opt);
        double gap = star.value - plus.value;
        worst_star = std::max(worst_star, gap);
        if (gap > kRelGuard * plus.value + kAbsGuard) ok = false;
        if (!plus.certified || !star.certified) ok = false;
    }

    for (int i = 0; i < 25; ++i) {
        std::size_t d = 1 + i % 2;
        PhiFunction phi = PhiFunction::power(0.6);
        auto big = generate_set(SetKind::Random, d, 5 + rng.below(6), 1.0, 0.05, rng);
        std::vector<Point> small = big;
        small.erase(small.begin() + static_cast<long>(rng.below(small.size())));
        small.erase(small.begin() + static_cast<long>(rng.below(small.size())));
        GammaOptions opt;
        opt.seed = 808;
        opt.growth_centers = wolffcap::detail::default_growth_centers(big, 512, 808);
        opt.eval_points = wolffcap::detail::lattice_eval_points(big, 0.25, 1);
        opt.eval_points.insert(opt.eval_points.end(), big.begin(), big.end());
        double ve = gamma_phi_plus_lower(small, phi, h, opt).value;
        double vf = gamma_phi_plus_lower(big, phi, h, opt).value;
        double gap = ve - vf;
        worst_mono = std::max(worst_mono, gap);
        if (gap > kRelGuard * vf + kAbsGuard) ok = false;
    }

    for (int i = 0; i < 25; ++i) {
        std::size_t d = 1 + i % 2;
        double s = (i % 2 == 0) ? 0.3 : 0.7;
        PhiFunction phi = PhiFunction::power(s);
        auto pts = generate_set(SetKind::Random, d, 2 + rng.below(7), 1.0, 0.05, rng);
        GammaOptions opt;
        opt.seed = 808;
        double base = gamma_phi_plus_lower(pts, phi, h, opt).value;
        std::vector<Point> scaled = pts;
        for (auto& p : scaled)
            for (auto& c : p) c *= 2.0;
        double big = gamma_phi_plus_lower(scaled, phi, 2.0 * h, opt).value;
        double expect = std::pow(2.0, s) * base;
        double rel = std::fabs(big - expect) / std::max(expect, 1e-300);
        worst_dil = std::max(worst_dil, rel);
        if (rel > kDilTol) ok = false;
    }

    CriterionResult r{8, "capacity-structure", ok,
                      detail::strfmt("star-plus gap %.2e, inclusion gap %.2e, dilation err %.2e "
                                     "(tol %.0e)",
                                     worst_star, worst_mono, worst_dil, kDilTol)};
    r.seconds = timer.seconds();
    return r;
}

// 9. The log-gauge capacity trend against the truncated-log surrogate on
//    shrinking one-dimensional balls.
inline CriterionResult criterion_corollary22() {
    detail::Timer timer;
    std::vector<double> r_grid;
    for (int k = 3; k <= 8; ++k) r_grid.push_back(std::exp(-static_cast<double>(k)));
    GammaOptions gopt;
    gopt.seed = 909;
    WolffFunctionalOptions wopt;
    wopt.seed = 909;
    Corollary22Result res = corollary22_experiment(r_grid, 64, gopt, wopt);
    bool spread_ok = res.ratio_spread > 0.0 && res.ratio_spread <= 10.0;
    auto exp_ok = [](double e) { return e >= -1.0 && e <= -0.25; };
    bool ok = spread_ok && exp_ok(res.exponent_gamma) && exp_ok(res.exponent_bessel);
    CriterionResult r{9, "log-gauge-capacity-trend", ok,
                      detail::strfmt("ratio spread %.3f (max 10), exponents %.3f/%.3f "
                                     "(window [-1,-0.25])",
                                     res.ratio_spread, res.exponent_gamma, res.exponent_bessel)};
    r.seconds = timer.seconds();
    return r;
}

// 10. Simplex optimum equals brute-force vertex enumeration on random boxed
//     instances.
inline CriterionResult criterion_lp_oracle() {
    detail::Timer timer;
    constexpr double kTol = 1e-10;
    Rng rng(1010);
    double worst = 0.0;
    bool ok = true;
    for (int inst = 0; inst < 50; ++inst) {
        std::size_t n = 2 + rng.below(7);
        std::size_t m = n + rng.below(std::min<std::size_t>(7, 17 - n));
        LinearProgram lp(n);
        for (std::size_t j = 0; j < n; ++j) lp.c[j] = rng.uniform(-1.0, 1.0);
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> row(n);
            for (auto& v : row) v = rng.uniform(-1.0, 1.0);
            lp.add_constraint(row, rng.uniform(0.1, 2.0));
        }
        lp.add_constraint(std::vector<double>(n, 1.0), 5.0); // box keeps it bounded

        LpResult res = solve_lp(lp);
        if (res.status != LpStatus::Optimal || !res.certified) {
            ok = false;
            continue;
        }

        // Oracle: every choice of n active constraints among rows and axis
        // planes, solved directly, filtered by feasibility.
        const std::size_t rows = lp.rows.size();
        const std::size_t total = rows + n;
        std::vector<std::size_t> combo(n);
        std::iota(combo.begin(), combo.end(), std::size_t{0});
        double best = 0.0; // origin is always feasible
        bool more = true;
        while (more) {
            std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
            std::vector<double> bb(n, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                if (combo[k] < rows) {
                    A[k] = lp.rows[combo[k]];
                    bb[k] = lp.rhs[combo[k]];
                } else {
                    A[k][combo[k] - rows] = 1.0;
                }
            }
            if (auto x = solve_linear(A, bb)) {
                bool feas = true;
                for (std::size_t j = 0; j < n && feas; ++j)
                    if ((*x)[j] < -1e-9) feas = false;
                for (std::size_t i = 0; i < rows && feas; ++i) {
                    KahanSum ax;
                    for (std::size_t j = 0; j < n; ++j) ax.add(lp.rows[i][j] * (*x)[j]);
                    if (ax.value() > lp.rhs[i] + 1e-9) feas = false;
                }
                if (feas) {
                    KahanSum cx;
                    for (std::size_t j = 0; j < n; ++j) cx.add(lp.c[j] * (*x)[j]);
                    best = std::max(best, cx.value());
                }
            }
            more = false;
            for (std::size_t k = n; k-- > 0;) {
                if (combo[k] < total - n + k) {
                    ++combo[k];
                    for (std::size_t j = k + 1; j < n; ++j) combo[j] = combo[j - 1] + 1;
                    more = true;
                    break;
                }
            }
        }
        double gap = std::fabs(res.objective - best) / std::max(1.0, std::fabs(best));
        worst = std::max(worst, gap);
        if (gap > kTol) ok = false;
    }
    CriterionResult r{10, "lp-vertex-oracle", ok,
                      detail::strfmt("max optimum gap %.3e over 50 instances (tol %.0e)", worst,
                                     kTol)};
    r.seconds = timer.seconds();
    return r;
}

inline std::vector<CriterionResult> run_all() {
    return {criterion_symmetrization(), criterion_sandwich_metric(), criterion_triangle_bounds(),
            criterion_wolff_closed_forms(), criterion_cz_constants(), criterion_energy_ratios(),
            criterion_quadratic_form(), criterion_capacity_structure(), criterion_corollary22(),
            criterion_lp_oracle()};
}

inline int report(const std::vector<CriterionResult>& results, std::FILE* out) {
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        std::fprintf(out, "[%s] %2d %-26s (%6.1fs) %s\n", r.pass ? "PASS" : "FAIL", r.index,
                     r.name.c_str(), r.seconds, r.details.c_str());
    }
    std::fprintf(out, "%s: %zu/%zu criteria passed\n", all ? "ACCEPTED" : "REJECTED",
                 static_cast<std::size_t>(std::count_if(results.begin(), results.end(),
                                                        [](const CriterionResult& r) {
                                                            return r.pass;
                                                        })),
                 results.size());
    return all ? 0 : 1;
}

} // namespace acceptance
} // namespace wolffcap
