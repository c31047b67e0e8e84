#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include <wolffcap/common.hpp>
#include <wolffcap/lp.hpp>

using namespace wolffcap;

TEST_CASE("two-variable box program solves exactly") {
    LinearProgram lp(2);
    lp.c = {1.0, 1.0};
    lp.add_constraint({1.0, 0.0}, 1.0);
    lp.add_constraint({0.0, 1.0}, 2.0);
    LpResult res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == Catch::Approx(3.0).epsilon(1e-12));
    CHECK(res.x[0] == Catch::Approx(1.0));
    CHECK(res.x[1] == Catch::Approx(2.0));
    CHECK(res.certified);
    CHECK(res.duality_gap <= 1e-9);
    // duals: both rows bind with unit prices
    CHECK(res.dual[0] == Catch::Approx(1.0));
    CHECK(res.dual[1] == Catch::Approx(1.0));
}

TEST_CASE("negative objective coordinates stay at zero") {
    LinearProgram lp(2);
    lp.c = {1.0, -5.0};
    lp.add_constraint({1.0, 1.0}, 1.0);
    LpResult res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == Catch::Approx(1.0));
    CHECK(res.x[1] == 0.0);
}

TEST_CASE("an uncapped direction is reported unbounded") {
    LinearProgram lp(2);
    lp.c = {1.0, 0.0};
    lp.add_constraint({0.0, 1.0}, 1.0);
    LpResult res = solve_lp(lp);
    CHECK(res.status == LpStatus::Unbounded);
}

TEST_CASE("constraint widths and negative right-hand sides are rejected") {
    LinearProgram lp(2);
    CHECK_THROWS(lp.add_constraint({1.0}, 1.0));
    CHECK_THROWS(lp.add_constraint({1.0, 1.0}, -1.0));
    CHECK_THROWS(lp.add_constraint({1.0, 1.0}, kInf));
}

TEST_CASE("degenerate ties terminate under the lowest-index rule") {
    // many redundant rows through the same vertex
    LinearProgram lp(2);
    lp.c = {1.0, 1.0};
    for (int k = 0; k < 6; ++k) lp.add_constraint({1.0, double(k) / 10.0}, 1.0);
    lp.add_constraint({0.0, 1.0}, 0.0); // y = 0 at the optimum, degenerate from the start
    LpResult res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == Catch::Approx(1.0));
    CHECK(res.certified);
}

TEST_CASE("random programs match brute-force vertex enumeration") {
    Rng rng(67);
    for (int inst = 0; inst < 25; ++inst) {
        std::size_t n = 2 + rng.below(3);
        std::size_t m = 2 + rng.below(6);
        LinearProgram lp(n);
        for (auto& v : lp.c) v = rng.uniform(-1.0, 1.0);
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> row(n);
            for (auto& v : row) v = rng.uniform(-1.0, 1.0);
            lp.add_constraint(row, rng.uniform(0.2, 2.0));
        }
        lp.add_constraint(std::vector<double>(n, 1.0), 4.0);

        LpResult res = solve_lp(lp);
        REQUIRE(res.status == LpStatus::Optimal);
        REQUIRE(res.certified);

        const std::size_t rows = lp.rows.size();
        const std::size_t total = rows + n;
        std::vector<std::size_t> combo(n);
        std::iota(combo.begin(), combo.end(), std::size_t{0});
        double best = 0.0;
        bool more = true;
        while (more) {
            std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
            std::vector<double> b(n, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                if (combo[k] < rows) {
                    A[k] = lp.rows[combo[k]];
                    b[k] = lp.rhs[combo[k]];
                } else {
                    A[k][combo[k] - rows] = 1.0;
                }
            }
            if (auto x = solve_linear(A, b)) {
                bool feas = true;
                for (std::size_t j = 0; j < n && feas; ++j)
                    if ((*x)[j] < -1e-9) feas = false;
                for (std::size_t i = 0; i < rows && feas; ++i) {
                    double ax = 0.0;
                    for (std::size_t j = 0; j < n; ++j) ax += lp.rows[i][j] * (*x)[j];
                    if (ax > lp.rhs[i] + 1e-9) feas = false;
                }
                if (feas) {
                    double cx = 0.0;
                    for (std::size_t j = 0; j < n; ++j) cx += lp.c[j] * (*x)[j];
                    best = std::max(best, cx);
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
        CHECK(res.objective == Catch::Approx(best).epsilon(1e-10).margin(1e-12));
    }
}

TEST_CASE("linear solves round-trip and flag singular systems") {
    auto x = solve_linear({{2.0, 1.0}, {1.0, 3.0}}, {5.0, 10.0});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Catch::Approx(1.0).epsilon(1e-14));
    CHECK((*x)[1] == Catch::Approx(3.0).epsilon(1e-14));
    CHECK_FALSE(solve_linear({{1.0, 2.0}, {2.0, 4.0}}, {1.0, 2.0}).has_value());
}
