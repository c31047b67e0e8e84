#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <wolffcap/config.hpp>
#include <wolffcap/measure.hpp>

using namespace wolffcap;

TEST_CASE("measure geometry on a hand-built set") {
    AtomicMeasure mu;
    mu.d = 2;
    mu.points = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 2.0}};
    mu.masses = {1.0, 2.0, 4.0};
    mu.validate();
    CHECK(mu.size() == 3);
    CHECK(mu.total_mass() == 7.0);
    CHECK(mu.min_separation() == 1.0);
    CHECK(mu.diameter() == Catch::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("validate rejects malformed measures") {
    AtomicMeasure mu;
    mu.d = 2;
    mu.points = {{0.0, 0.0}, {0.0, 0.0}};
    mu.masses = {1.0, 1.0};
    CHECK_THROWS(mu.validate()); // coincident atoms

    mu.points = {{0.0, 0.0}, {1.0, 0.0}};
    mu.masses = {1.0, -1.0};
    CHECK_THROWS(mu.validate()); // negative mass

    mu.masses = {1.0};
    CHECK_THROWS(mu.validate()); // count mismatch

    mu.masses = {1.0, 1.0};
    mu.points = {{0.0, 0.0}, {1.0}};
    CHECK_THROWS(mu.validate()); // dimension mismatch
}

TEST_CASE("grid sets have lattice pitch separation") {
    Rng rng(7);
    auto pts = generate_set(SetKind::Grid, 2, 5, 1.0, 0.0, rng);
    REQUIRE(pts.size() == 5);
    // smallest square lattice holding 5 points is 3x3 with pitch 1/2
    AtomicMeasure mu;
    mu.d = 2;
    mu.points = pts;
    mu.masses.assign(5, 1.0);
    CHECK(mu.min_separation() == 0.5);
    CHECK(mu.diameter() <= std::sqrt(2.0) + 1e-15);
}

TEST_CASE("rejection sampling respects the separation floor") {
    Rng rng(11);
    for (SetKind kind : {SetKind::Random, SetKind::Ball}) {
        auto pts = generate_set(kind, 3, 40, 1.0, 0.05, rng);
        REQUIRE(pts.size() == 40);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                CHECK(dist(pts[i], pts[j]) >= 0.05);
    }
}

TEST_CASE("line sets are collinear and evenly spaced") {
    Rng rng(13);
    auto pts = generate_set(SetKind::Line, 3, 8, 1.4, 0.0, rng);
    REQUIRE(pts.size() == 8);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        CHECK(pts[i][1] == pts[0][1]);
        CHECK(pts[i][2] == pts[0][2]);
        CHECK(pts[i][0] - pts[i - 1][0] == Catch::Approx(1.4 / 7.0).epsilon(1e-14));
    }
}

TEST_CASE("random measures are reproducible from the seed") {
    Rng a(42), b(42);
    AtomicMeasure mu1 = random_measure(2, 12, 1.0, 1e-3, a);
    AtomicMeasure mu2 = random_measure(2, 12, 1.0, 1e-3, b);
    REQUIRE(mu1.size() == mu2.size());
    for (std::size_t i = 0; i < mu1.size(); ++i) {
        CHECK(mu1.masses[i] == mu2.masses[i]);
        CHECK(mu1.points[i] == mu2.points[i]);
    }
    Rng c(43);
    AtomicMeasure mu3 = random_measure(2, 12, 1.0, 1e-3, c);
    CHECK(mu3.points[0] != mu1.points[0]);
}

TEST_CASE("restriction keeps the selected atoms in order") {
    AtomicMeasure mu;
    mu.d = 1;
    mu.points = {{0.0}, {1.0}, {2.0}, {3.0}};
    mu.masses = {1.0, 2.0, 3.0, 4.0};
    AtomicMeasure sub = mu.restricted({1, 3});
    REQUIRE(sub.size() == 2);
    CHECK(sub.points[0][0] == 1.0);
    CHECK(sub.masses[1] == 4.0);
}
