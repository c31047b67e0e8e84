#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <wolffcap/config.hpp>
#include <wolffcap/transform.hpp>

using namespace wolffcap;

TEST_CASE("kernel is antisymmetric with magnitude 1/phi(r)") {
    PhiFunction phi = PhiFunction::power(0.5);
    Point x = {3.0, 0.0}, y = {0.0, 0.0};
    Point k = kernel_eval(phi, x, y);
    // (y-x)/(|y-x| phi(|y-x|)) = (-3,0)/(3 sqrt(3))
    CHECK(k[0] == Catch::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(k[1] == 0.0);
    Point kr = kernel_eval(phi, y, x);
    CHECK(kr[0] == -k[0]);
    CHECK(norm2(k) == Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(kernel_magnitude(phi, 3.0) == Catch::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK_THROWS(kernel_eval(phi, x, x));
}

TEST_CASE("truncated field against one atom matches the hand value") {
    PhiFunction phi = PhiFunction::power(0.5);
    AtomicMeasure mu;
    mu.d = 2;
    mu.points = {{0.0, 0.0}};
    mu.masses = {2.0};
    std::vector<double> ones = {1.0};
    Point f = apply_truncated(phi, mu, ones, 0.0, {3.0, 0.0});
    CHECK(f[0] == Catch::Approx(-1.1547005383792515).epsilon(1e-15)); // -2/sqrt(3)
    CHECK(f[1] == 0.0);
    // truncation strictly below the separation keeps the atom, at it drops it
    CHECK(apply_truncated(phi, mu, ones, 2.9, {3.0, 0.0})[0] == f[0]);
    CHECK(apply_truncated(phi, mu, ones, 3.0, {3.0, 0.0})[0] == 0.0);
    // the atom's own location never contributes
    Point at = apply_truncated(phi, mu, ones, 0.0, {0.0, 0.0});
    CHECK(at[0] == 0.0);
}

TEST_CASE("fields from symmetric pairs cancel at the midpoint") {
    PhiFunction phi = PhiFunction::power(0.7);
    AtomicMeasure mu;
    mu.d = 2;
    mu.points = {{-1.0, 0.0}, {1.0, 0.0}};
    mu.masses = {1.5, 1.5};
    std::vector<double> ones = {1.0, 1.0};
    Point f = apply_truncated(phi, mu, ones, 0.0, {0.0, 0.0});
    CHECK(std::fabs(f[0]) < 1e-15);
    CHECK(f[1] == 0.0);
}

TEST_CASE("quadratic form of the truncated transform vanishes") {
    auto fams = {PhiFunction::power(0.3), PhiFunction::power(0.7), PhiFunction::log_sqrt()};
    Rng rng(23);
    int fi = 0;
    for (const PhiFunction& phi : fams) {
        for (int rep = 0; rep < 10; ++rep) {
            std::size_t d = 1 + (fi + rep) % 3;
            AtomicMeasure mu = random_measure(d, 3 + rng.below(12), 1.0, 1e-3, rng);
            std::vector<std::size_t> Q;
            for (std::size_t j = 0; j < mu.size(); ++j)
                if (rng.below(2) == 0) Q.push_back(j);
            if (Q.empty()) Q.push_back(0);
            double eps = rng.uniform(0.0, 0.5 * mu.diameter());
            QuadraticFormResult qr = quadratic_form(phi, mu, Q, eps);
            double rel = qr.scale > 0.0 ? norm2(qr.value) / qr.scale : norm2(qr.value);
            CHECK(rel <= 1e-12);
        }
        ++fi;
    }
}

TEST_CASE("operator norm of a two-atom kernel matrix is the off-diagonal weight") {
    PhiFunction phi = PhiFunction::power(0.5);
    AtomicMeasure mu;
    mu.d = 1;
    mu.points = {{0.0}, {1.0}};
    mu.masses = {4.0, 1.0};
    // weight sqrt(m0 m1) |K| = 2 / (1 * phi(1)) = 2; the 2x2 antisymmetric
    // block has singular values equal to that weight
    CHECK(operator_norm(phi, mu, 0.0) == Catch::Approx(2.0).epsilon(1e-9));
    // truncation at the separation kills the operator
    CHECK(operator_norm(phi, mu, 1.0) == 0.0);
}

TEST_CASE("truncation breakpoints are the sorted distinct separations") {
    std::vector<Point> pts = {{0.0}, {1.0}, {3.0}};
    auto bps = truncation_breakpoints(pts);
    REQUIRE(bps.size() == 3);
    CHECK(bps[0] == 1.0);
    CHECK(bps[1] == 2.0);
    CHECK(bps[2] == 3.0);
}
