#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "capacity.hpp"
#include "common.hpp"
#include "config.hpp"
#include "curvature.hpp"
#include "energy.hpp"
#include "kernel.hpp"
#include "measure.hpp"
#include "metric.hpp"
#include "phi.hpp"
#include "transform.hpp"
#include "version.hpp"
#include "wolff.hpp"

namespace wolffcap {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// Header-checked CSV emission; every number goes through %.16e so reruns with
// the same config and seed are byte-identical.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::vector<std::string> header)
        : out_(path, std::ios::binary), width_(header.size()), path_(path) {
        if (!out_) throw std::runtime_error("cannot open output file '" + path + "'");
        write_cells(header);
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != width_)
            throw std::logic_error("csv row width mismatch in " + path_);
        write_cells(cells);
    }

    static std::string num(double v) { return format_sci(v); }
    static std::string count(std::size_t v) { return std::to_string(v); }
    static std::string flag(bool v) { return v ? "1" : "0"; }

private:
    void write_cells(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
    std::size_t width_;
    std::string path_;
};

inline std::string fnv1a_digest(const std::vector<double>& values) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (double v : values) {
        std::string s = format_sci(v);
        for (char c : s) {
            hash ^= static_cast<unsigned char>(c);
            hash *= 1099511628211ULL;
        }
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

struct ExperimentOutcome {
    bool ok = true;
    nlohmann::json summary;
};

namespace detail {

inline nlohmann::json config_echo(const Config& cfg) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, val] : cfg.entries()) j[key] = val.first;
    return j;
}

inline void finish_summary(ExperimentOutcome& out, const std::string& name, const Config& cfg,
                           std::uint64_t seed, const Stopwatch& sw, const std::string& out_dir) {
    out.summary["experiment"] = name;
    out.summary["version"] = kVersion;
    out.summary["seed"] = seed;
    out.summary["config"] = config_echo(cfg);
    out.summary["wall_seconds"] = sw.seconds();
    out.summary["ok"] = out.ok;
    std::ofstream js(out_dir + "/" + name + "_summary.json", std::ios::binary);
    if (!js) throw std::runtime_error("cannot open output dir '" + out_dir + "'");
    js << out.summary.dump(2) << '\n';
}

inline std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
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

} // namespace detail

inline ExperimentOutcome run_verify_phi(const Config& cfg, std::uint64_t seed,
                                        const std::string& out_dir, std::size_t) {
    Stopwatch sw;
    ExperimentOutcome out;
    PhiFunction phi = make_phi(cfg.str_or("phi", "logsqrt"));
    auto dims = cfg.list_or("dims", {1.0, 2.0, 3.0});
    auto grid = detail::geometric_grid(cfg.num_or("r_lo", 1e-6), cfg.num_or("r_hi", 1.0),
                                       cfg.size_or("grid_samples", 512));
    PhiValidation val = validate_phi(phi, grid);
    out.ok = val.pass();
    out.summary["validation"] = {
        {"s_declared", phi.s_doubling()}, {"s_hat", val.s_hat},
        {"worst_doubling_t", val.worst_doubling_t}, {"pass", val.pass()},
        {"message", val.message}};

    CsvWriter csv(out_dir + "/phi_validation.csv",
                  {"phi", "d", "s_declared", "s_hat", "doubling_pass", "increasing",
                   "to_infinity", "deriv_monotone", "ratio_monotone", "lambda_hat",
                   "lambda_ceiling", "diverged", "method", "h"});
    auto r64 = detail::geometric_grid(cfg.num_or("r_lo", 1e-6), cfg.num_or("r_hi", 1.0), 64);
    for (double dv : dims) {
        std::size_t d = static_cast<std::size_t>(dv);
        LambdaEstimate lam = verify_growth_integral(phi, d, r64);
        double ceiling = phi.family() == PhiFunction::Family::Power && phi.s_doubling() < dv
                             ? growth_ratio_ceiling(phi.s_doubling(), dv)
                             : 0.0;
        csv.row({phi.describe(), CsvWriter::count(d), CsvWriter::num(phi.s_doubling()),
                 CsvWriter::num(val.s_hat), CsvWriter::flag(val.ok_doubling),
                 CsvWriter::flag(val.ok_increasing), CsvWriter::flag(val.ok_to_infinity),
                 CsvWriter::flag(val.ok_derivative_monotone), CsvWriter::flag(val.ok_ratio_monotone),
                 CsvWriter::num(lam.lambda_hat), CsvWriter::num(ceiling),
                 CsvWriter::flag(lam.diverged), "verify-phi", CsvWriter::num(0.0)});
    }
    detail::finish_summary(out, "verify-phi", cfg, seed, sw, out_dir);
    return out;
}

inline ExperimentOutcome run_metric(const Config& cfg, std::uint64_t seed,
                                    const std::string& out_dir, std::size_t) {
    Stopwatch sw;
    ExperimentOutcome out;
    PhiFunction phi = make_phi(cfg.str_or("phi", "logsqrt"));
    double r_max = cfg.num_or("r_max", 8.0);
    std::size_t n = cfg.size_or("psi_grid", 4096);
    PsiTable psi(phi, r_max, n);
    PsiSandwichReport sand = psi_sandwich(psi);

    std::size_t d = cfg.size_or("dim", 2);
    std::size_t triples = cfg.size_or("axiom_samples", 10000);
    Rng rng(seed);
    double side = r_max / (2.0 * std::sqrt(static_cast<double>(d)));
    double worst_triangle = 0.0;
    for (std::size_t k = 0; k < triples; ++k) {
        Point x = rng.in_cube(d, 0.0, side), y = rng.in_cube(d, 0.0, side),
              z = rng.in_cube(d, 0.0, side);
        double dxz = psi.distance(x, z);
        double dxy = psi.distance(x, y);
        double dyz = psi.distance(y, z);
        worst_triangle = std::max(worst_triangle, dxz - (dxy + dyz));
    }
    bool axioms_ok = worst_triangle <= 1e-12;
    out.ok = sand.pass() && axioms_ok;

    CsvWriter csv(out_dir + "/psi_profile.csv",
                  {"r", "phi_pow_1_over_s", "psi", "method", "h"});
    std::size_t stride = std::max<std::size_t>(1, psi.size() / 1024);
    for (std::size_t k = 1; k < psi.size(); k += stride)
        csv.row({CsvWriter::num(psi.node_r(k)), CsvWriter::num(psi.node_g(k)),
                 CsvWriter::num(psi.node_psi(k)), "metric", CsvWriter::num(psi.delta_r())});

    out.summary["sandwich"] = {{"min_lower_margin", sand.min_lower_margin},
                               {"max_upper_excess", sand.max_upper_excess},
                               {"pass", sand.pass()}};
    out.summary["axioms"] = {{"triples", triples}, {"worst_triangle_excess", worst_triangle},
                             {"pass", axioms_ok}};
    detail::finish_summary(out, "metric", cfg, seed, sw, out_dir);
    return out;
}

inline ExperimentOutcome run_cz_check(const Config& cfg, std::uint64_t seed,
                                      const std::string& out_dir, std::size_t) {
    Stopwatch sw;
    ExperimentOutcome out;
    PhiFunction phi = make_phi(cfg.str_or("phi", "logsqrt"));
    std::size_t d = cfg.size_or("dim", 2);
    std::size_t samples = cfg.size_or("samples", 100000);
    PsiTable psi(phi, cfg.num_or("r_max", 8.0), cfg.size_or("psi_grid", 4096));
    CzReport rep = verify_cz_kernel(phi, psi, d, samples, seed);
    out.ok = rep.pass();

    CsvWriter csv(out_dir + "/cz_check.csv",
                  {"phi", "d", "samples", "size_max_ratio", "size_bound", "smooth_max_ratio",
                   "smooth_bound", "holder_exponent", "pass", "method", "h"});
    csv.row({phi.describe(), CsvWriter::count(d), CsvWriter::count(samples),
             CsvWriter::num(rep.max_size_ratio), CsvWriter::num(rep.size_constant),
             CsvWriter::num(rep.max_smooth_ratio), CsvWriter::num(rep.smooth_constant),
             CsvWriter::num(rep.holder_exponent), CsvWriter::flag(rep.pass()), "cz-check",
             CsvWriter::num(0.0)});
    out.summary["cz"] = {{"size_max_ratio", rep.max_size_ratio},
                         {"smooth_max_ratio", rep.max_smooth_ratio},
                         {"smooth_bound", rep.smooth_constant},
                         {"size_certified", rep.size_certified},
                         {"pass", rep.pass()}};
    detail::finish_summary(out, "cz-check", cfg, seed, sw, out_dir);
    return out;
}

inline ExperimentOutcome run_energy_ratios(const Config& cfg, std::uint64_t seed,
                                           const std::string& out_dir, std::size_t threads) {
    Stopwatch sw;
    ExperimentOutcome out;
    PhiFunction phi = make_phi(cfg.str_or("phi", "power:0.5"));
    const double s = phi.s_doubling();
    std::size_t d = cfg.size_or("dim", 2);
    auto n_list = cfg.list_or("n_list", {5, 10, 25, 50, 100, 200});
    std::size_t instances = cfg.size_or("instances", 3);
    const bool lower_ok = phi.concave() && s < 1.0;
    const double cs = lower_ok ? lower_ratio_reference(s) : 0.0;

    Rng rng(seed);
    std::vector<AtomicMeasure> corpus;
    for (double nv : n_list)
        for (std::size_t k = 0; k < instances; ++k)
            corpus.push_back(random_measure(d, static_cast<std::size_t>(nv), 1.0, 1e-3, rng));

    struct Row {
        std::size_t n = 0;
        RatioRecord upper, lower;
        NormWolffReport norm;
        bool has_norm = false;
    };
    std::vector<Row> rows(corpus.size());
    PsiTable psi(phi, 4.0 * std::sqrt(static_cast<double>(d)) + 1.0, 4096);
    parallel_for(corpus.size(), threads, [&](std::size_t i) {
        const AtomicMeasure& mu = corpus[i];
        Row r;
        r.n = mu.size();
        auto Q = all_indices(mu);
        r.upper = energy_upper_ratio(phi, mu, Q, 0.5 * mu.min_separation());
        if (lower_ok) r.lower = energy_lower_ratio(phi, mu);
        if (mu.size() <= 64) {
            r.norm = norm_vs_wolff_sup(phi, psi, mu);
            r.has_norm = true;
        }
        rows[i] = r;
    });

    CsvWriter csv(out_dir + "/energy_ratios.csv",
                  {"id", "N", "d", "s", "phi", "energy", "wolff", "ratio", "energy_full",
                   "wolff_punctured", "ratio_lower", "c_s", "norm_sq", "sup_metric_wolff",
                   "norm_upper_ratio", "norm_lower_ratio", "method", "h"});
    double up_min = kInf, up_max = 0.0, low_min = kInf;
    std::size_t violations = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        up_min = std::min(up_min, r.upper.ratio);
        up_max = std::max(up_max, r.upper.ratio);
        if (lower_ok) {
            low_min = std::min(low_min, r.lower.ratio);
            if (r.lower.ratio < cs) ++violations;
        }
        csv.row({CsvWriter::count(i), CsvWriter::count(r.n), CsvWriter::count(d),
                 CsvWriter::num(s), phi.describe(), CsvWriter::num(r.upper.energy),
                 CsvWriter::num(r.upper.wolff), CsvWriter::num(r.upper.ratio),
                 CsvWriter::num(r.lower.energy), CsvWriter::num(r.lower.wolff),
                 CsvWriter::num(r.lower.ratio), CsvWriter::num(cs),
                 CsvWriter::num(r.has_norm ? r.norm.norm_sq : 0.0),
                 CsvWriter::num(r.has_norm ? r.norm.sup_metric_wolff : 0.0),
                 CsvWriter::num(r.has_norm ? r.norm.upper_ratio : 0.0),
                 CsvWriter::num(r.has_norm ? r.norm.lower_ratio : 0.0), "energy-ratios",
                 CsvWriter::num(0.0)});
    }

    // Potential profile of the first instance along the first axis.
    if (!corpus.empty()) {
        CsvWriter prof(out_dir + "/wolff_profile.csv", {"x", "wolff_phi", "method", "h"});
        WolffOptions wopt;
        for (std::size_t k = 0; k < 128; ++k) {
            Point x(d, 0.5);
            x[0] = -0.25 + 1.5 * static_cast<double>(k) / 127.0;
            prof.row({CsvWriter::num(x[0]), CsvWriter::num(wolff_phi(corpus[0], phi, x, wopt)),
                      "energy-ratios", CsvWriter::num(0.0)});
        }
    }

    double spread = up_min > 0.0 ? up_max / up_min : kInf;
    out.ok = std::isfinite(up_max) && spread <= 20.0 && violations == 0;
    out.summary["upper"] = {{"min", up_min}, {"max", up_max}, {"spread", spread}};
    out.summary["lower"] = {{"min", lower_ok ? low_min : 0.0}, {"c_s", cs},
                            {"violations", violations}, {"checked", lower_ok}};
    detail::finish_summary(out, "energy-ratios", cfg, seed, sw, out_dir);
    return out;
}

inline ExperimentOutcome run_curvature_corpus(const Config& cfg, std::uint64_t seed,
                                              const std::string& out_dir, std::size_t) {
    Stopwatch sw;
    ExperimentOutcome out;
    PhiFunction phi = make_phi(cfg.str_or("phi", "power:0.5"));
    std::size_t samples = cfg.size_or("samples", 200000);
    std::size_t d = cfg.size_or("dim", 2);
    const bool want_lower = phi.concave() && phi.s_doubling() < 1.0;

    Rng rng(seed);
    double min_upper = kInf, min_lower = kInf;
    std::size_t violations = 0;
    std::vector<std::size_t> upper_bins(40, 0), lower_bins(40, 0);
    auto bin_of = [](double margin) {
        if (margin <= 1e-12) return std::size_t{0};
        double t = (std::log10(margin) + 12.0) / 14.0 * 39.0;
        return std::min<std::size_t>(39, static_cast<std::size_t>(std::max(0.0, t)) + 1);
    };
    for (std::size_t k = 0; k < samples; ++k) {
        Triangle tri{rng.in_cube(d, 0.0, 1.0), rng.in_cube(d, 0.0, 1.0), rng.in_cube(d, 0.0, 1.0)};
        if (tri.a() == 0.0 || tri.b() == 0.0 || tri.c() == 0.0) continue;
        Lemma33Margins m = check_comparison_bounds(phi, tri, want_lower);
        min_upper = std::min(min_upper, m.upper_margin);
        ++upper_bins[bin_of(m.upper_margin)];
        if (m.upper_margin < 0.0) ++violations;
        if (m.lower_checked) {
            min_lower = std::min(min_lower, m.lower_margin);
            ++lower_bins[bin_of(m.lower_margin)];
            if (m.lower_margin < 0.0) ++violations;
        }
    }

    PhiFunction unit = PhiFunction::power(1.0);
    Triangle eq{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    double p_eq = p_phi(unit, eq);

    CsvWriter csv(out_dir + "/curvature_margins.csv",
                  {"bin", "margin_lo", "margin_hi", "upper_count", "lower_count", "method", "h"});
    for (std::size_t b = 0; b < 40; ++b) {
        double lo = b == 0 ? 0.0 : std::pow(10.0, -12.0 + (static_cast<double>(b) - 1.0) * 14.0 / 39.0);
        double hi = std::pow(10.0, -12.0 + static_cast<double>(b) * 14.0 / 39.0);
        csv.row({CsvWriter::count(b), CsvWriter::num(lo), CsvWriter::num(hi),
                 CsvWriter::count(upper_bins[b]), CsvWriter::count(lower_bins[b]),
                 "curvature-corpus", CsvWriter::num(0.0)});
    }
    out.ok = violations == 0 && std::fabs(p_eq - 1.5) <= 1e-12;
    out.summary["margins"] = {{"min_upper", min_upper},
                              {"min_lower", want_lower ? min_lower : 0.0},
                              {"violations", violations}};
    out.summary["equilateral_p"] = p_eq;
    detail::finish_summary(out, "curvature-corpus", cfg, seed, sw, out_dir);
    return out;
}

inline ExperimentOutcome run_capacity(const Config& cfg, std::uint64_t seed,
                                      const std::string& out_dir, std::size_t) {
    Stopwatch sw;
    ExperimentOutcome out;
    PhiFunction phi = make_phi(cfg.str_or("phi", "power:0.5"));
    std::size_t d = cfg.size_or("dim", 1);
    SetKind kind = parse_set_kind(cfg.str_or("set", "grid"));
    std::size_t count = cfg.size_or("count", 16);
    double extent = cfg.num_or("extent", 1.0);
    double h = cfg.num_or("h", extent / (2.0 * static_cast<double>(count)));
    Rng rng(seed);
    std::vector<Point> pts = generate_set(kind, d, count, extent, 2.0 * h, rng);

    GammaOptions gopt;
    gopt.seed = seed;
    WolffFunctionalOptions wopt;
    wopt.seed = seed;
    std::vector<CapacityEstimate> ests;
    ests.push_back(gamma_phi_plus_lower(pts, phi, h, gopt));
    ests.push_back(gamma_star_estimate(pts, phi, h, gopt));
    ests.push_back(gamma_op_estimate(pts, phi, h, gopt));
    ests.push_back(wolff_capacity_functional(pts, phi, wopt));
    ests.push_back(bessel_surrogate(pts, wopt));

    CsvWriter csv(out_dir + "/capacity.csv",
                  {"method", "h", "value", "certified", "unbounded_at_resolution",
                   "diameter_warning", "atoms", "rows_total", "rows_binding", "kappa",
                   "op_norm", "growth_ratio", "conservatism", "mass_digest"});
    for (const auto& e : ests)
        csv.row({method_name(e.method), CsvWriter::num(h), CsvWriter::num(e.value),
                 CsvWriter::flag(e.certified), CsvWriter::flag(e.unbounded_at_resolution),
                 CsvWriter::flag(e.diameter_warning), CsvWriter::count(pts.size()),
                 CsvWriter::count(e.rows_total), CsvWriter::count(e.rows_binding),
                 CsvWriter::num(e.kappa), CsvWriter::num(e.op_norm),
                 CsvWriter::num(e.growth_ratio), CsvWriter::num(e.conservatism),
                 fnv1a_digest(e.masses)});

    bool star_le_plus = ests[1].value <= ests[0].value * (1.0 + 1e-12);
    out.ok = star_le_plus && ests[0].certified && ests[1].certified;
    out.summary["values"] = nlohmann::json::object();
    for (const auto& e : ests)
        out.summary["values"][method_name(e.method)] =
            e.unbounded_at_resolution ? -1.0 : e.value;
    out.summary["star_le_plus"] = star_le_plus;
    detail::finish_summary(out, "capacity", cfg, seed, sw, out_dir);
    return out;
}

inline ExperimentOutcome run_corollary22(const Config& cfg, std::uint64_t seed,
                                         const std::string& out_dir, std::size_t) {
    Stopwatch sw;
    ExperimentOutcome out;
    std::vector<double> dflt;
    for (int k = 3; k <= 8; ++k) dflt.push_back(std::exp(-static_cast<double>(k)));
    auto r_grid = cfg.list_or("r_grid", dflt);
    std::size_t atoms = cfg.size_or("atoms", 64);
    GammaOptions gopt;
    gopt.seed = seed;
    WolffFunctionalOptions wopt;
    wopt.seed = seed;
    Corollary22Result res = corollary22_experiment(r_grid, atoms, gopt, wopt);

    CsvWriter csv(out_dir + "/corollary22.csv",
                  {"r", "h", "atoms", "gamma_plus", "bessel", "ratio", "method"});
    for (const auto& row : res.rows)
        csv.row({CsvWriter::num(row.r), CsvWriter::num(row.h), CsvWriter::count(row.atoms),
                 CsvWriter::num(row.gamma_plus), CsvWriter::num(row.bessel),
                 CsvWriter::num(row.ratio), "corollary22"});

    bool exps_ok = res.exponent_gamma >= -1.0 && res.exponent_gamma <= -0.25 &&
                   res.exponent_bessel >= -1.0 && res.exponent_bessel <= -0.25;
    out.ok = res.ratio_spread > 0.0 && res.ratio_spread <= 10.0 && exps_ok;
    out.summary["ratio_spread"] = res.ratio_spread;
    out.summary["exponent_gamma"] = res.exponent_gamma;
    out.summary["exponent_bessel"] = res.exponent_bessel;
    detail::finish_summary(out, "corollary22", cfg, seed, sw, out_dir);
    return out;
}

inline ExperimentOutcome run_experiment(const std::string& name, const Config& cfg,
                                        std::uint64_t seed, const std::string& out_dir,
                                        std::size_t threads) {
    if (name == "verify-phi") return run_verify_phi(cfg, seed, out_dir, threads);
    if (name == "metric") return run_metric(cfg, seed, out_dir, threads);
    if (name == "cz-check") return run_cz_check(cfg, seed, out_dir, threads);
    if (name == "energy-ratios") return run_energy_ratios(cfg, seed, out_dir, threads);
    if (name == "curvature-corpus") return run_curvature_corpus(cfg, seed, out_dir, threads);
    if (name == "capacity") return run_capacity(cfg, seed, out_dir, threads);
    if (name == "corollary22") return run_corollary22(cfg, seed, out_dir, threads);
    throw ConfigError("unknown experiment '" + name +
                      "' (expected verify-phi, metric, cz-check, energy-ratios, "
                      "curvature-corpus, capacity, corollary22, or acceptance)");
}

} // namespace wolffcap
