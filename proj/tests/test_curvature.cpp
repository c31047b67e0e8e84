#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <wolffcap/config.hpp>
#include <wolffcap/curvature.hpp>
#include <wolffcap/energy.hpp>

using namespace wolffcap;

TEST_CASE("permutation sum on reference triangles") {
    Triangle eq{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    CHECK(p_phi(PhiFunction::power(1.0), eq) == Catch::Approx(1.5).epsilon(1e-14));

    // right isoceles with legs 1, phi = sqrt: p = 2^{1/4}
    Triangle right{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    CHECK(p_phi(PhiFunction::power(0.5), right) ==
          Catch::Approx(1.1892071150027211).epsilon(1e-14));

    Triangle degenerate{{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS(p_phi(PhiFunction::power(0.5), degenerate));
}

TEST_CASE("collinear triples have a positive permutation sum") {
    PhiFunction phi = PhiFunction::power(0.5);
    Triangle flat{{0.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}};
    double p = p_phi(phi, flat);
    CHECK(p > 0.0);
    Lemma33Margins m = check_comparison_bounds(phi, flat, true);
    CHECK(m.upper_margin >= 0.0);
    CHECK(m.lower_margin >= 0.0);
}

TEST_CASE("comparison bounds hold on a random triangle corpus") {
    for (double s : {0.3, 0.5, 0.9}) {
        PhiFunction phi = PhiFunction::power(s);
        Rng rng(41 + static_cast<std::uint64_t>(10 * s));
        double min_upper = kInf, min_lower = kInf;
        for (int k = 0; k < 100000; ++k) {
            Triangle tri{rng.in_cube(2, 0.0, 1.0), rng.in_cube(2, 0.0, 1.0),
                         rng.in_cube(2, 0.0, 1.0)};
            if (tri.a() == 0.0 || tri.b() == 0.0 || tri.c() == 0.0) continue;
            Lemma33Margins m = check_comparison_bounds(phi, tri, true);
            min_upper = std::min(min_upper, m.upper_margin);
            min_lower = std::min(min_lower, m.lower_margin);
        }
        INFO("s " << s << " margins " << min_upper << " " << min_lower);
        CHECK(min_upper >= 0.0);
        CHECK(min_lower >= 0.0);
    }
}

TEST_CASE("lower bound needs a concave gauge") {
    Triangle eq{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    CHECK_THROWS(check_comparison_bounds(PhiFunction::power(1.5), eq, true));
    CHECK_NOTHROW(check_comparison_bounds(PhiFunction::power(1.5), eq, false));
}

TEST_CASE("reference lower-ratio constant") {
    CHECK(lower_ratio_reference(0.5) == Catch::Approx(0.017258898432212294).epsilon(1e-15));
    CHECK_THROWS(lower_ratio_reference(1.0));
    CHECK_THROWS(lower_ratio_reference(0.0));
}

TEST_CASE("pair plus triple decomposition reproduces the truncated energy") {
    auto fams = {PhiFunction::power(0.3), PhiFunction::power(0.7), PhiFunction::log_sqrt()};
    Rng rng(43);
    int fi = 0;
    for (const PhiFunction& phi : fams) {
        for (int rep = 0; rep < 8; ++rep) {
            std::size_t d = 1 + (fi + rep) % 3;
            AtomicMeasure mu = random_measure(d, 2 + rng.below(12), 1.0, 1e-3, rng);
            double eps = 0.5 * mu.min_separation();
            SymmetrizedEnergy se = symmetrize_energy(phi, mu, eps);
            double direct = truncated_energy(phi, mu, all_indices(mu), eps);
            CHECK(se.total() == Catch::Approx(direct).epsilon(1e-11));
        }
        ++fi;
    }
}

TEST_CASE("decomposition rejects eps at or above the minimum separation") {
    AtomicMeasure mu;
    mu.d = 1;
    mu.points = {{0.0}, {1.0}};
    mu.masses = {1.0, 1.0};
    CHECK_THROWS(symmetrize_energy(PhiFunction::power(0.5), mu, 1.0));
}

TEST_CASE("two-atom decomposition has no triple term") {
    AtomicMeasure mu;
    mu.d = 1;
    mu.points = {{0.0}, {1.0}};
    mu.masses = {2.0, 3.0};
    PhiFunction phi = PhiFunction::power(0.5);
    SymmetrizedEnergy se = symmetrize_energy(phi, mu, 0.5);
    CHECK(se.triple_term == 0.0);
    // ordered pairs: m0 m1^2 + m1 m0^2 = 18 + 12, divided by phi(1)^2 = 1
    CHECK(se.pair_term == Catch::Approx(30.0).epsilon(1e-14));
}
