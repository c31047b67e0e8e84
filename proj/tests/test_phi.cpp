#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <wolffcap/phi.hpp>

using namespace wolffcap;

TEST_CASE("power gauge evaluates, inverts, and differentiates exactly") {
    PhiFunction phi = PhiFunction::power(0.5);
    CHECK(phi.eval(0.25) == 0.5);
    CHECK(phi.eval(1.0) == 1.0);
    CHECK(phi.eval(0.0) == 0.0);
    CHECK(phi.deriv(1.0) == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(phi.s_doubling() == 0.5);
    CHECK(phi.concave());
    CHECK_FALSE(PhiFunction::power(1.3).concave());
}

TEST_CASE("log-sqrt gauge matches hand values below the cut") {
    PhiFunction phi = PhiFunction::log_sqrt();
    // (log 1/t)^{-1/2} at t = e^{-4} is exactly 1/2; at the cut it is sqrt(2/3).
    CHECK(phi.eval(std::exp(-4.0)) == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(phi.eval(0.1) == Catch::Approx(0.65901022898226081).epsilon(1e-15));
    CHECK(phi.eval(0.05) == Catch::Approx(0.57776137002687715).epsilon(1e-15));
    CHECK(phi.eval(kLogSqrtCut) == Catch::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
    CHECK(phi.eval(0.0) == 0.0);
}

TEST_CASE("log-sqrt tail is a C1 continuation") {
    PhiFunction phi = PhiFunction::log_sqrt();
    double t0 = kLogSqrtCut;
    // value continuity across the cut
    CHECK(phi.eval(t0 * (1 + 1e-12)) == Catch::Approx(phi.eval(t0)).epsilon(1e-10));
    // tail value from the independent tangent-line formula
    double slope = 0.5 * std::exp(1.5) * std::pow(2.0 / 3.0, 1.5);
    double intercept = std::sqrt(2.0 / 3.0) - slope * t0;
    CHECK(phi.eval(0.3) == Catch::Approx(slope * 0.3 + intercept).epsilon(1e-15));
    CHECK(phi.eval(0.3) == Catch::Approx(0.91025943422303625).epsilon(1e-14));
    // derivative continuity: central differences on both sides agree
    double h = 1e-7;
    double left = (phi.eval(t0) - phi.eval(t0 - h)) / h;
    double right = (phi.eval(t0 + h) - phi.eval(t0)) / h;
    CHECK(left == Catch::Approx(right).epsilon(1e-5));
    CHECK(phi.deriv(0.5) == Catch::Approx(slope).epsilon(1e-15));
}

TEST_CASE("log-sqrt gauge is strictly increasing with sub-1 doubling") {
    PhiFunction phi = PhiFunction::log_sqrt();
    double prev = 0.0;
    for (double t = 1e-8; t < 4.0; t *= 1.37) {
        double v = phi.eval(t);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(phi.s_doubling() < 1.0);
    CHECK(phi.s_doubling() > 0.5);
    CHECK(phi.concave());
}

TEST_CASE("tabulated gauge interpolates its knots exactly") {
    std::vector<double> ts, vs;
    PhiFunction base = PhiFunction::power(0.7);
    for (double t = 0.01; t <= 2.0; t *= 1.5) {
        ts.push_back(t);
        vs.push_back(base.eval(t));
    }
    PhiFunction tab = PhiFunction::tabulated(ts, vs);
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(tab.eval(ts[i]) == vs[i]);
    // between knots: chords of a concave curve stay below it
    double mid = std::sqrt(ts[2] * ts[3]);
    CHECK(tab.eval(mid) <= base.eval(mid));
    CHECK(tab.eval(mid) >= 0.95 * base.eval(mid));
    CHECK(tab.eval(0.0) == 0.0);
}

TEST_CASE("validate_phi accepts the stock gauges") {
    std::vector<double> grid;
    for (double t = 1e-6; t <= 1.0; t *= 1.2) grid.push_back(t);
    grid.push_back(1.0);
    for (const PhiFunction& phi :
         {PhiFunction::power(0.3), PhiFunction::power(0.7), PhiFunction::log_sqrt()}) {
        PhiValidation val = validate_phi(phi, grid);
        INFO(val.message);
        CHECK(val.pass());
    }
}

TEST_CASE("gauge constructors reject bad input") {
    CHECK_THROWS(PhiFunction::power(0.0));
    CHECK_THROWS(PhiFunction::power(-1.0));
    CHECK_THROWS(PhiFunction::tabulated({0.2, 0.1}, {0.1, 0.2}));
    CHECK_THROWS(PhiFunction::tabulated({0.1, 0.2}, {0.2, 0.1}));
}
