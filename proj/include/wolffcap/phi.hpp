#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"

namespace wolffcap {

// Cutoff and tangent-tail parameters for the inverse-square-root-log gauge.
// The cutoff e^{-3/2} is the inflection point of (log 1/t)^{-1/2}; the tangent
// line there keeps the extension concave and C^1.
inline const double kLogSqrtCut = std::exp(-1.5);
inline const double kLogSqrtTailSlope = 0.5 * std::exp(1.5) * std::pow(2.0 / 3.0, 1.5);
inline const double kLogSqrtTailIntercept = std::sqrt(2.0 / 3.0) - kLogSqrtTailSlope * std::exp(-1.5);

// Admissible gauge functions: increasing, phi(0) = 0, phi(t) -> infinity, with a
// monotone derivative and a doubling bound phi(2t) <= 2^s phi(t) on the declared
// range. Three families: pure powers t^s, the inverse-square-root-log gauge with a
// tangent-line tail, and user tables with monotone piecewise-linear interpolation.
class PhiFunction {
public:
    enum class Family { Power, LogSqrt, Tabulated };
    enum class Curvature { Concave, Convex, Mixed };

    static PhiFunction power(double s) {
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("phi: power exponent must be positive, got " + format_full(s));
        PhiFunction f;
        f.family_ = Family::Power;
        f.exponent_ = s;
        f.s_doubling_ = s;
        f.curvature_ = (s <= 1.0) ? Curvature::Concave : Curvature::Convex;
        return f;
    }

    // (log 1/t)^{-1/2} on (0, e^{-3/2}], continued by its tangent line above the
    // cutoff. The cutoff is the inflection point, so the whole function is concave
    // and C^1. The tail's doubling ratio approaches 2 at large t; the stored
    // exponent is the empirical maximum over the canonical range [8*2^-63, 8].
    static PhiFunction log_sqrt() {
        PhiFunction f;
        f.family_ = Family::LogSqrt;
        f.curvature_ = Curvature::Concave;
        f.s_doubling_ = log_sqrt_doubling_exponent();
        return f;
    }

    // Knots must be strictly increasing in both coordinates with t > 0, v > 0.
    // Below the first knot the function is linear through the origin; above the
    // last knot it continues with the final slope. Membership properties are
    // certified only on the knot span.
    static PhiFunction tabulated(std::vector<double> t, std::vector<double> v) {
        if (t.size() != v.size() || t.size() < 2)
            throw std::invalid_argument("phi: table needs >= 2 rows of matching length");
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!(t[i] > 0.0) || !(v[i] > 0.0) || !std::isfinite(t[i]) || !std::isfinite(v[i]))
                throw std::invalid_argument("phi: table entries must be finite and positive");
            if (i && !(t[i] > t[i - 1] && v[i] > v[i - 1]))
                throw std::invalid_argument("phi: table must be strictly increasing in t and value");
        }
        PhiFunction f;
        f.family_ = Family::Tabulated;
        f.knot_t_ = std::move(t);
        f.knot_v_ = std::move(v);
        f.curvature_ = f.table_curvature();
        f.s_doubling_ = f.empirical_doubling(f.knot_t_.front(), f.knot_t_.back(), 2048);
        return f;
    }

    double operator()(double t) const { return eval(t); }

    double eval(double t) const {
        if (!(t >= 0.0) || !std::isfinite(t))
            throw std::domain_error("phi: invalid argument t = " + format_full(t));
        if (t == 0.0) return 0.0;
        switch (family_) {
            case Family::Power:
                return std::pow(t, exponent_);
            case Family::LogSqrt: {
                if (t <= kLogSqrtCut) return 1.0 / std::sqrt(std::log(1.0 / t));
                return kLogSqrtTailIntercept + kLogSqrtTailSlope * t;
            }
            case Family::Tabulated:
                return table_eval(t);
        }
        return 0.0;
    }

    double deriv(double t) const {
        if (!(t > 0.0) || !std::isfinite(t))
            throw std::domain_error("phi: derivative needs t > 0, got " + format_full(t));
        switch (family_) {
            case Family::Power:
                return exponent_ * std::pow(t, exponent_ - 1.0);
            case Family::LogSqrt: {
                if (t <= kLogSqrtCut) {
                    double L = std::log(1.0 / t);
                    return 0.5 / (t * L * std::sqrt(L));
                }
                return kLogSqrtTailSlope;
            }
            case Family::Tabulated:
                return table_slope(t);
        }
        return 0.0;
    }

    Family family() const { return family_; }
    Curvature curvature() const { return curvature_; }
    bool concave() const { return curvature_ == Curvature::Concave; }
    double s_doubling() const { return s_doubling_; }
    double power_exponent() const { return exponent_; }

    std::string describe() const {
        switch (family_) {
            case Family::Power:
                return "power(s=" + format_full(exponent_) + ")";
            case Family::LogSqrt:
                return "log_sqrt(tangent tail, s_hat=" + format_full(s_doubling_) + ")";
            case Family::Tabulated:
                return "tabulated(" + std::to_string(knot_t_.size()) + " knots)";
        }
        return "?";
    }

    // Largest log2(phi(2t)/phi(t)) over a geometric sample of [lo, hi].
    double empirical_doubling(double lo, double hi, std::size_t samples) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < samples; ++i) {
            double u = double(i) / double(samples - 1);
            double t = lo * std::pow(hi / lo, u);
            double r = eval(2.0 * t) / eval(t);
            if (r > 0.0) worst = std::max(worst, std::log2(r));
        }
        return worst;
    }

private:
    PhiFunction() = default;

    static double log_sqrt_doubling_exponent() {
        static const double cached = [] {
            PhiFunction f;
            f.family_ = Family::LogSqrt;
            return f.empirical_doubling(8.0 * 0x1.0p-63, 8.0, 4096);
        }();
        return cached;
    }

    double table_eval(double t) const {
        const auto& T = knot_t_;
        const auto& V = knot_v_;
        if (t <= T.front()) return V.front() * (t / T.front());
        std::size_t n = T.size();
        if (t >= T.back()) {
            double slope = (V[n - 1] - V[n - 2]) / (T[n - 1] - T[n - 2]);
            return V.back() + slope * (t - T.back());
        }
        std::size_t hi = std::size_t(std::lower_bound(T.begin(), T.end(), t) - T.begin());
        std::size_t lo = hi - 1;
        double w = (t - T[lo]) / (T[hi] - T[lo]);
        return V[lo] + w * (V[hi] - V[lo]);
    }

    double table_slope(double t) const {
        const auto& T = knot_t_;
        const auto& V = knot_v_;
        std::size_t n = T.size();
        if (t <= T.front()) return V.front() / T.front();
        if (t >= T.back()) return (V[n - 1] - V[n - 2]) / (T[n - 1] - T[n - 2]);
        std::size_t hi = std::size_t(std::lower_bound(T.begin(), T.end(), t) - T.begin());
        return (V[hi] - V[hi - 1]) / (T[hi] - T[hi - 1]);
    }

    Curvature table_curvature() const {
        // Secant slopes, including the origin segment.
        std::vector<double> slopes;
        slopes.push_back(knot_v_.front() / knot_t_.front());
        for (std::size_t i = 1; i < knot_t_.size(); ++i)
            slopes.push_back((knot_v_[i] - knot_v_[i - 1]) / (knot_t_[i] - knot_t_[i - 1]));
        bool dec = true, inc = true;
        for (std::size_t i = 1; i < slopes.size(); ++i) {
            if (slopes[i] > slopes[i - 1] * (1.0 + 1e-12)) dec = false;
            if (slopes[i] < slopes[i - 1] * (1.0 - 1e-12)) inc = false;
        }
        if (dec) return Curvature::Concave;
        if (inc) return Curvature::Convex;
        return Curvature::Mixed;
    }

    Family family_ = Family::Power;
    double exponent_ = 1.0;
    double s_doubling_ = 1.0;
    Curvature curvature_ = Curvature::Concave;
    std::vector<double> knot_t_, knot_v_;
};

// Grid-sampled membership report. The library certifies the defining properties
// only on the declared grid; downstream checks run on the same grids.
struct PhiValidation {
    bool ok_zero = false;               // eval(0) == 0
    bool ok_increasing = false;         // strictly increasing along the grid
    bool ok_to_infinity = false;        // grows without bound along t = 2^k
    bool ok_derivative_monotone = false;// monotone in the declared direction
    bool ok_ratio_monotone = true;      // phi(t)/t nonincreasing (concave case only)
    bool ok_doubling = false;           // sup log2(phi(2t)/phi(t)) finite, <= declared + tol
    double s_hat = 0.0;                 // empirical doubling exponent on the grid
    double worst_doubling_t = 0.0;
    std::string message;

    bool pass() const {
        return ok_zero && ok_increasing && ok_to_infinity && ok_derivative_monotone &&
               ok_ratio_monotone && ok_doubling;
    }
};

inline PhiValidation validate_phi(const PhiFunction& phi, const std::vector<double>& grid) {
    if (grid.size() < 2) throw std::invalid_argument("validate_phi: grid needs >= 2 points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw std::invalid_argument("validate_phi: grid points must be positive");
        if (i && !(grid[i] > grid[i - 1]))
            throw std::invalid_argument("validate_phi: grid must be strictly increasing");
    }
    PhiValidation rep;
    rep.ok_zero = (phi.eval(0.0) == 0.0);

    rep.ok_increasing = true;
    double prev = phi.eval(grid.front());
    if (!std::isfinite(prev)) throw std::domain_error("validate_phi: non-finite value at t = " + format_full(grid.front()));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double v = phi.eval(grid[i]);
        if (!std::isfinite(v)) throw std::domain_error("validate_phi: non-finite value at t = " + format_full(grid[i]));
        if (!(v > prev)) {
            rep.ok_increasing = false;
            rep.message += "not increasing at t=" + format_full(grid[i]) + "; ";
        }
        prev = v;
    }

    // Unboundedness probed along a dyadic ray: strict growth and at least a
    // doubling of the value over 40 octaves rules out bounded gauges.
    {
        rep.ok_to_infinity = true;
        double last = phi.eval(1.0);
        for (int k = 1; k <= 40; ++k) {
            double v = phi.eval(std::ldexp(1.0, k));
            if (!(v > last)) rep.ok_to_infinity = false;
            last = v;
        }
        if (!(last >= 2.0 * phi.eval(1.0))) rep.ok_to_infinity = false;
    }

    {
        bool concave_dir = true, convex_dir = true;
        double dprev = phi.deriv(grid.front());
        for (std::size_t i = 1; i < grid.size(); ++i) {
            double dv = phi.deriv(grid[i]);
            if (dv > dprev * (1.0 + 1e-12)) concave_dir = false;
            if (dv < dprev * (1.0 - 1e-12)) convex_dir = false;
            dprev = dv;
        }
        rep.ok_derivative_monotone =
            (phi.curvature() == PhiFunction::Curvature::Concave) ? concave_dir
          : (phi.curvature() == PhiFunction::Curvature::Convex)  ? convex_dir
                                                                 : false;
        if (!rep.ok_derivative_monotone) rep.message += "derivative not monotone in declared direction; ";
    }

    if (phi.concave()) {
        rep.ok_ratio_monotone = true;
        double rprev = phi.eval(grid.front()) / grid.front();
        for (std::size_t i = 1; i < grid.size(); ++i) {
            double rv = phi.eval(grid[i]) / grid[i];
            if (rv > rprev * (1.0 + 1e-12)) rep.ok_ratio_monotone = false;
            rprev = rv;
        }
    }

    {
        double worst = 0.0, worst_t = grid.front();
        for (double t : grid) {
            double r = phi.eval(2.0 * t) / phi.eval(t);
            double lg = std::log2(r);
            if (lg > worst) {
                worst = lg;
                worst_t = t;
            }
        }
        rep.s_hat = worst;
        rep.worst_doubling_t = worst_t;
        rep.ok_doubling = std::isfinite(worst) && worst <= phi.s_doubling() + 1e-9;
        if (!rep.ok_doubling)
            rep.message += "doubling exponent " + format_full(worst) + " exceeds declared " +
                           format_full(phi.s_doubling()) + " at t=" + format_full(worst_t) + "; ";
    }
    return rep;
}

// max_r of phi(r)/r^d * integral_0^r t^{d-1}/phi(t) dt. The integral uses dyadic
// panels shrinking toward 0, each integrated by a 64-point composite midpoint
// rule; panels stop contributing once below 1e-14 relative. Divergent integrands
// (e.g. phi(t) = t^d) show non-decaying panel sums and are flagged.
struct LambdaEstimate {
    double lambda_hat = 0.0;
    double worst_r = 0.0;
    bool diverged = false;
    double diverged_r = 0.0;
    std::vector<std::pair<double, double>> per_r; // (r, ratio)
};

inline LambdaEstimate verify_growth_integral(const PhiFunction& phi, std::size_t d,
                                             const std::vector<double>& r_grid) {
    if (d == 0) throw std::invalid_argument("verify_growth_integral: dimension must be >= 1");
    if (r_grid.empty()) throw std::invalid_argument("verify_growth_integral: empty r grid");
    LambdaEstimate est;
    for (double r : r_grid) {
        if (!(r > 0.0)) throw std::invalid_argument("verify_growth_integral: r must be positive");
        KahanSum integral;
        double prev_panel = kInf;
        bool panel_diverged = true;
        for (int k = 0; k < 4000; ++k) {
            double hi = std::ldexp(r, -k);
            double lo = 0.5 * hi;
            if (lo <= 0.0 || hi == lo) break;
            double width = hi - lo;
            KahanSum panel;
            const int m = 64;
            for (int j = 0; j < m; ++j) {
                double t = lo + width * ((j + 0.5) / m);
                panel.add(std::pow(t, double(d) - 1.0) / phi.eval(t));
            }
            double contribution = panel.value() * (width / m);
            integral.add(contribution);
            double total = integral.value();
            if (total > 0.0 && contribution < 1e-14 * total) {
                panel_diverged = false;
                break;
            }
            // Constant-rate panels signal a logarithmic (or worse) tail at 0.
            if (k > 256 && contribution >= 0.999 * prev_panel) break;
            prev_panel = contribution;
        }
        if (panel_diverged) {
            est.diverged = true;
            est.diverged_r = r;
            est.per_r.emplace_back(r, kInf);
            continue;
        }
        double ratio = integral.value() * phi.eval(r) / std::pow(r, double(d));
        est.per_r.emplace_back(r, ratio);
        if (ratio > est.lambda_hat) {
            est.lambda_hat = ratio;
            est.worst_r = r;
        }
    }
    return est;
}

// Reference doubling-based ceiling for the growth ratio when s < d:
// 2^s / (1 - 2^{-(d-s)}), from summing the dyadic shell bounds.
inline double growth_ratio_ceiling(double s, std::size_t d) {
    if (!(s < double(d))) throw std::invalid_argument("growth_ratio_ceiling: needs s < d");
    return std::pow(2.0, s) / (1.0 - std::pow(2.0, -(double(d) - s)));
}

} // namespace wolffcap
