#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <wolffcap/metric.hpp>

using namespace wolffcap;

TEST_CASE("psi is the identity for power gauges") {
    for (double s : {0.3, 0.5, 0.9}) {
        PsiTable psi(PhiFunction::power(s), 8.0, 2048);
        CHECK(psi.s() == s);
        for (std::size_t k = 1; k < psi.size(); k += 97) {
            double r = psi.node_r(k);
            CHECK(psi.node_psi(k) == Catch::Approx(r).epsilon(1e-12));
        }
        // linear interpolation of the identity is the identity
        CHECK(psi.eval(0.333) == Catch::Approx(0.333).epsilon(1e-12));
        CHECK(psi.eval(0.0) == 0.0);
    }
}

TEST_CASE("psi sandwich holds for the log-sqrt gauge") {
    PsiTable psi(PhiFunction::log_sqrt(), 8.0, 4096);
    PsiSandwichReport rep = psi_sandwich(psi);
    INFO("lower margin " << rep.min_lower_margin << " upper excess " << rep.max_upper_excess);
    CHECK(rep.pass());
    // capped evaluation never exceeds the upper envelope anywhere, nodes or not
    for (double r = 1e-4; r < 8.0; r *= 1.7) CHECK(psi.eval(r) <= psi.g_eval(r) * (1 + 1e-12));
}

TEST_CASE("psi nodes are monotone and subadditive") {
    PsiTable psi(PhiFunction::log_sqrt(), 4.0, 1024);
    for (std::size_t k = 1; k < psi.size(); ++k) CHECK(psi.node_psi(k) >= psi.node_psi(k - 1));
    // exact node subadditivity is enforced by the lowering closure
    for (std::size_t a = 1; a < psi.size(); a += 61)
        for (std::size_t b = a; b < psi.size() - a; b += 113)
            CHECK(psi.node_psi(a + b) <= psi.node_psi(a) + psi.node_psi(b) + 1e-12);
}

TEST_CASE("psi induces a metric on sampled triples") {
    PsiTable psi(PhiFunction::log_sqrt(), 8.0, 4096);
    Rng rng(17);
    double side = 8.0 / (2.0 * std::sqrt(3.0));
    for (int k = 0; k < 2000; ++k) {
        Point x = rng.in_cube(3, 0.0, side), y = rng.in_cube(3, 0.0, side),
              z = rng.in_cube(3, 0.0, side);
        double dxy = psi.distance(x, y);
        CHECK(dxy == psi.distance(y, x));
        CHECK(psi.distance(x, x) == 0.0);
        CHECK(psi.distance(x, z) <= dxy + psi.distance(y, z) + 1e-12);
    }
}

TEST_CASE("psi rejects radii beyond its table") {
    PsiTable psi(PhiFunction::power(0.5), 2.0, 256);
    CHECK_THROWS(psi.eval(2.1));
    CHECK_NOTHROW(psi.eval(2.0));
}

TEST_CASE("kernel size and smoothness constants hold in the transformed metric") {
    for (double s : {0.4, 0.8}) {
        PhiFunction phi = PhiFunction::power(s);
        PsiTable psi(phi, 8.0, 2048);
        CzReport rep = verify_cz_kernel(phi, psi, 2, 20000, 99);
        INFO("s " << s << " size " << rep.max_size_ratio << " smooth " << rep.max_smooth_ratio
                  << " bound " << rep.smooth_constant);
        CHECK(rep.pass());
        CHECK(rep.smooth_constant == Catch::Approx(4.0 * (2.0 + std::pow(2.0, s))));
    }
    PhiFunction p0 = PhiFunction::log_sqrt();
    PsiTable psi0(p0, 8.0, 4096);
    CzReport rep = verify_cz_kernel(p0, psi0, 3, 20000, 99);
    INFO("log-sqrt size " << rep.max_size_ratio << " smooth " << rep.max_smooth_ratio);
    CHECK(rep.pass());
}
