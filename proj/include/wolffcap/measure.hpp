#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"
#include "phi.hpp"

namespace wolffcap {

// Finite atomic measure: distinct points with strictly positive masses.
struct AtomicMeasure {
    std::size_t d = 0;
    std::vector<Point> points;
    std::vector<double> masses;

    std::size_t size() const { return points.size(); }

    void validate() const {
        if (points.size() != masses.size())
            throw std::invalid_argument("measure: point/mass count mismatch");
        for (const auto& p : points)
            if (p.size() != d) throw std::invalid_argument("measure: point dimension mismatch");
        for (double m : masses)
            if (!(m > 0.0) || !std::isfinite(m))
                throw std::invalid_argument("measure: masses must be finite and positive");
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
                if (dist2(points[i], points[j]) == 0.0)
                    throw std::invalid_argument("measure: coincident atoms at indices " +
                                                std::to_string(i) + "," + std::to_string(j));
    }

    double total_mass() const {
        KahanSum s;
        for (double m : masses) s.add(m);
        return s.value();
    }

    double diameter() const {
        double best = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
                best = std::max(best, dist2(points[i], points[j]));
        return std::sqrt(best);
    }

    double min_separation() const {
        double best = kInf;
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
                best = std::min(best, dist2(points[i], points[j]));
        return points.size() < 2 ? kInf : std::sqrt(best);
    }

    AtomicMeasure restricted(const std::vector<std::size_t>& idx) const {
        AtomicMeasure out;
        out.d = d;
        for (std::size_t i : idx) {
            out.points.push_back(points.at(i));
            out.masses.push_back(masses.at(i));
        }
        return out;
    }

    AtomicMeasure scaled(double kappa) const {
        AtomicMeasure out = *this;
        for (double& m : out.masses) m *= kappa;
        return out;
    }
};

struct BallQuery {
    Point center;
    double radius = 0.0;
    bool open = true;            // strict inequality on the boundary
    bool puncture = false;       // drop an atom exactly at the center
};

inline double ball_mass(const AtomicMeasure& mu, const BallQuery& q) {
    if (q.center.size() != mu.d) throw std::invalid_argument("ball_mass: center dimension mismatch");
    KahanSum s;
    double r2 = q.radius * q.radius;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double d2 = dist2(mu.points[i], q.center);
        if (q.puncture && d2 == 0.0) continue;
        bool in = q.open ? (d2 < r2) : (d2 <= r2);
        if (in) s.add(mu.masses[i]);
    }
    return s.value();
}

// Growth certificate at resolution h: mu(B(x, r)) <= phi(r) over the sampled
// (center, radius) family. Centers are the atoms plus pairwise midpoints; radii
// run on a geometric grid from h to twice the support diameter.
struct GrowthSampling {
    std::size_t radii = 48;
    bool midpoints = true;
    std::size_t max_midpoint_centers = 50000; // deterministic prefix cap
};

struct GrowthCertificate {
    double h = 0.0;
    double max_ratio = 0.0;      // worst mu(B)/phi(r)
    Point worst_center;
    double worst_radius = 0.0;
    std::size_t checked = 0;
    bool pass = false;           // max_ratio <= 1 + 1e-12
};

inline GrowthCertificate check_sigma_phi(const AtomicMeasure& mu, const PhiFunction& phi, double h,
                                         const GrowthSampling& sampling = {}) {
    if (!(h > 0.0)) throw std::invalid_argument("check_sigma_phi: resolution h must be positive");
    mu.validate();
    if (mu.size() == 0) throw std::invalid_argument("check_sigma_phi: empty measure");

    std::vector<Point> centers = mu.points;
    if (sampling.midpoints) {
        std::size_t added = 0;
        for (std::size_t i = 0; i < mu.size() && added < sampling.max_midpoint_centers; ++i)
            for (std::size_t j = i + 1; j < mu.size() && added < sampling.max_midpoint_centers; ++j) {
                Point m(mu.d);
                for (std::size_t k = 0; k < mu.d; ++k) m[k] = 0.5 * (mu.points[i][k] + mu.points[j][k]);
                centers.push_back(std::move(m));
                ++added;
            }
    }

    double r_hi = std::max(2.0 * mu.diameter(), 2.0 * h);
    GrowthCertificate cert;
    cert.h = h;
    std::size_t n_r = std::max<std::size_t>(2, sampling.radii);
    for (const auto& c : centers) {
        for (std::size_t k = 0; k < n_r; ++k) {
            double u = double(k) / double(n_r - 1);
            double r = h * std::pow(r_hi / h, u);
            double m = ball_mass(mu, BallQuery{c, r, true, false});
            ++cert.checked;
            if (m == 0.0) continue;
            double ratio = m / phi.eval(r);
            if (ratio > cert.max_ratio) {
                cert.max_ratio = ratio;
                cert.worst_center = c;
                cert.worst_radius = r;
            }
        }
    }
    cert.pass = cert.max_ratio <= 1.0 + 1e-12;
    return cert;
}

// Largest kappa with kappa*mu passing the sampled growth check; by linearity
// kappa = 1 / max_ratio, and the rescaled worst pair sits exactly at ratio 1.
struct RescaleResult {
    AtomicMeasure measure;
    double kappa = 0.0;
    GrowthCertificate certificate; // certificate of the input measure
};

inline RescaleResult rescale_to_sigma(const AtomicMeasure& mu, const PhiFunction& phi, double h,
                                      const GrowthSampling& sampling = {}) {
    RescaleResult out;
    out.certificate = check_sigma_phi(mu, phi, h, sampling);
    if (!(out.certificate.max_ratio > 0.0))
        throw std::invalid_argument("rescale_to_sigma: measure has no mass in any sampled ball");
    out.kappa = 1.0 / out.certificate.max_ratio;
    out.measure = mu.scaled(out.kappa);
    return out;
}

// Text format: first line "d N", then N rows of d coordinates and the mass,
// space separated, full decimal precision (round-trips exactly).
inline void save_measure(const AtomicMeasure& mu, std::ostream& os) {
    os << mu.d << " " << mu.size() << "\n";
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t k = 0; k < mu.d; ++k) os << format_full(mu.points[i][k]) << " ";
        os << format_full(mu.masses[i]) << "\n";
    }
}

inline void save_measure(const AtomicMeasure& mu, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_measure: cannot open " + path);
    save_measure(mu, f);
}

inline AtomicMeasure load_measure(std::istream& is) {
    AtomicMeasure mu;
    std::size_t n = 0;
    if (!(is >> mu.d >> n)) throw std::runtime_error("load_measure: bad header (want: d N)");
    mu.points.assign(n, Point(mu.d));
    mu.masses.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < mu.d; ++k)
            if (!(is >> mu.points[i][k]))
                throw std::runtime_error("load_measure: bad coordinate in row " + std::to_string(i));
        if (!(is >> mu.masses[i]))
            throw std::runtime_error("load_measure: bad mass in row " + std::to_string(i));
    }
    mu.validate();
    return mu;
}

inline AtomicMeasure load_measure(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_measure: cannot open " + path);
    return load_measure(f);
}

} // namespace wolffcap
