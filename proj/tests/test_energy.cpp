#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <wolffcap/config.hpp>
#include <wolffcap/energy.hpp>

using namespace wolffcap;

namespace {

AtomicMeasure pair_measure(double sep) {
    AtomicMeasure mu;
    mu.d = 1;
    mu.points = {{0.0}, {sep}};
    mu.masses = {1.0, 1.0};
    return mu;
}

} // namespace

TEST_CASE("truncated energy of a unit pair at distance 1") {
    PhiFunction phi = PhiFunction::power(0.5);
    AtomicMeasure mu = pair_measure(1.0);
    // each atom sees a field of magnitude 1/phi(1) = 1
    CHECK(truncated_energy(phi, mu, all_indices(mu), 0.5) == Catch::Approx(2.0).epsilon(1e-15));
    // restricting to one atom removes the field entirely
    CHECK(truncated_energy(phi, mu, {0}, 0.5) == 0.0);
    // truncation at the separation removes everything
    CHECK(truncated_energy(phi, mu, all_indices(mu), 1.0) == 0.0);
}

TEST_CASE("upper ratio of the unit pair is exactly 2") {
    PhiFunction phi = PhiFunction::power(0.5);
    AtomicMeasure mu = pair_measure(1.0);
    RatioRecord rec = energy_upper_ratio(phi, mu, all_indices(mu), 0.5);
    CHECK(rec.energy == Catch::Approx(2.0).epsilon(1e-15));
    CHECK(rec.wolff == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(rec.ratio == Catch::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS(energy_upper_ratio(phi, mu, all_indices(mu), 1.0));
}

TEST_CASE("upper ratios stay within a fixed spread across sizes") {
    PhiFunction phi = PhiFunction::power(0.5);
    Rng rng(47);
    double lo = kInf, hi = 0.0;
    for (std::size_t n : {5, 10, 25, 50}) {
        for (int rep = 0; rep < 2; ++rep) {
            AtomicMeasure mu = random_measure(2, n, 1.0, 1e-3, rng);
            RatioRecord rec = energy_upper_ratio(phi, mu, all_indices(mu),
                                                 0.5 * mu.min_separation());
            REQUIRE(std::isfinite(rec.ratio));
            REQUIRE(rec.ratio > 0.0);
            lo = std::min(lo, rec.ratio);
            hi = std::max(hi, rec.ratio);
        }
    }
    INFO("ratio range [" << lo << ", " << hi << "]");
    CHECK(hi / lo <= 20.0);
}

TEST_CASE("lower ratios clear the proof-traced constant") {
    for (double s : {0.3, 0.7}) {
        PhiFunction phi = PhiFunction::power(s);
        double cs = lower_ratio_reference(s);
        Rng rng(53 + static_cast<std::uint64_t>(10 * s));
        for (int rep = 0; rep < 6; ++rep) {
            AtomicMeasure mu = random_measure(2, 5 + rng.below(40), 1.0, 1e-3, rng);
            RatioRecord rec = energy_lower_ratio(phi, mu);
            INFO("s " << s << " ratio " << rec.ratio << " reference " << cs);
            CHECK(rec.ratio >= cs);
        }
    }
    CHECK_THROWS(energy_lower_ratio(PhiFunction::power(1.5), pair_measure(1.0)));
}

TEST_CASE("operator norm comparison report is internally consistent") {
    PhiFunction phi = PhiFunction::power(0.5);
    PsiTable psi(phi, 6.0, 1024);
    Rng rng(59);
    AtomicMeasure mu = random_measure(2, 12, 1.0, 1e-2, rng);
    NormWolffReport rep = norm_vs_wolff_sup(phi, psi, mu);
    CHECK(rep.norm > 0.0);
    CHECK(rep.norm_sq == Catch::Approx(rep.norm * rep.norm));
    CHECK(rep.sup_metric_wolff > 0.0);
    CHECK(rep.mean_phi_wolff > 0.0);
    CHECK(rep.upper_ratio == Catch::Approx(rep.norm_sq / rep.sup_metric_wolff));
    CHECK(rep.lower_ratio == Catch::Approx(rep.norm_sq / rep.mean_phi_wolff));
}

TEST_CASE("energy is monotone under mass growth") {
    PhiFunction phi = PhiFunction::power(0.5);
    Rng rng(61);
    AtomicMeasure mu = random_measure(2, 10, 1.0, 1e-2, rng);
    double base = truncated_energy(phi, mu, all_indices(mu), 0.0);
    AtomicMeasure scaled = mu;
    for (double& m : scaled.masses) m *= 2.0;
    double big = truncated_energy(phi, scaled, all_indices(scaled), 0.0);
    // energy is cubic in the masses
    CHECK(big == Catch::Approx(8.0 * base).epsilon(1e-12));
}
