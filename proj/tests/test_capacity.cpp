#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <wolffcap/capacity.hpp>
#include <wolffcap/config.hpp>

using namespace wolffcap;

TEST_CASE("single candidate at resolution h is worth phi(h)") {
    PhiFunction phi = PhiFunction::power(0.5);
    GammaOptions opt;
    opt.seed = 3;
    CapacityEstimate est = gamma_phi_plus_lower({{0.0}}, phi, 0.1, opt);
    CHECK(est.value == Catch::Approx(0.31622776601683793).epsilon(1e-9));
    CHECK(est.certified);
    CHECK_FALSE(est.unbounded_at_resolution);
    CHECK(est.masses.size() == 1);
    CHECK(est.masses[0] == Catch::Approx(est.value).epsilon(1e-9));
}

TEST_CASE("two candidates bind at the midpoint growth cap") {
    // atoms at 0 and 1/2, h = 0.1, evaluation only at the midpoint: the
    // midpoint mass cap  m0 + m1 <= phi(1/4) = 1/2  is the tight row
    PhiFunction phi = PhiFunction::power(0.5);
    std::vector<Point> pts = {{0.0}, {0.5}};
    GammaOptions opt;
    opt.seed = 3;
    opt.eval_points = {{0.25}};
    CapacityEstimate plus = gamma_phi_plus_lower(pts, phi, 0.1, opt);
    CHECK(plus.value == Catch::Approx(0.5).epsilon(1e-9));
    CHECK(plus.certified);

    CapacityEstimate star = gamma_star_estimate(pts, phi, 0.1, opt);
    CHECK(star.value <= plus.value * (1 + 1e-9));
    CHECK(star.value == Catch::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("star never exceeds plus on random sets") {
    Rng rng(71);
    for (int rep = 0; rep < 12; ++rep) {
        std::size_t d = 1 + rep % 2;
        PhiFunction phi = (rep % 2 == 0) ? PhiFunction::power(0.5) : PhiFunction::log_sqrt();
        auto pts = generate_set(SetKind::Random, d, 2 + rng.below(5), 1.0, 0.05, rng);
        GammaOptions opt;
        opt.seed = 71;
        opt.eval_points = detail::lattice_eval_points(pts, 0.25, 1);
        opt.eval_points.insert(opt.eval_points.end(), pts.begin(), pts.end());
        CapacityEstimate plus = gamma_phi_plus_lower(pts, phi, 0.02, opt);
        CapacityEstimate star = gamma_star_estimate(pts, phi, 0.02, opt);
        REQUIRE(plus.certified);
        REQUIRE(star.certified);
        CHECK(star.value <= plus.value * (1 + 1e-9) + 1e-12);
    }
}

TEST_CASE("inclusion is monotone under shared constraint families") {
    Rng rng(73);
    PhiFunction phi = PhiFunction::power(0.6);
    auto big = generate_set(SetKind::Random, 2, 8, 1.0, 0.05, rng);
    std::vector<Point> small(big.begin(), big.end() - 3);
    GammaOptions opt;
    opt.seed = 73;
    opt.growth_centers = detail::default_growth_centers(big, 512, 73);
    opt.eval_points = detail::lattice_eval_points(big, 0.25, 1);
    opt.eval_points.insert(opt.eval_points.end(), big.begin(), big.end());
    double ve = gamma_phi_plus_lower(small, phi, 0.02, opt).value;
    double vf = gamma_phi_plus_lower(big, phi, 0.02, opt).value;
    CHECK(ve <= vf * (1 + 1e-9) + 1e-12);
}

TEST_CASE("power-gauge estimates scale as lambda^s under dilation") {
    Rng rng(79);
    PhiFunction phi = PhiFunction::power(0.3);
    auto pts = generate_set(SetKind::Random, 2, 5, 1.0, 0.05, rng);
    GammaOptions opt;
    opt.seed = 79;
    double base = gamma_phi_plus_lower(pts, phi, 0.02, opt).value;
    std::vector<Point> scaled = pts;
    for (auto& p : scaled)
        for (auto& c : p) c *= 2.0;
    double big = gamma_phi_plus_lower(scaled, phi, 0.04, opt).value;
    CHECK(big == Catch::Approx(std::pow(2.0, 0.3) * base).epsilon(1e-9));
}

TEST_CASE("candidates below the resolution are rejected") {
    PhiFunction phi = PhiFunction::power(0.5);
    CHECK_THROWS(gamma_phi_plus_lower({{0.0}, {0.05}}, phi, 0.1, {}));
    CHECK_THROWS(gamma_phi_plus_lower({}, phi, 0.1, {}));
    CHECK_THROWS(gamma_phi_plus_lower({{0.0}}, phi, 0.0, {}));
}

TEST_CASE("operator-normalized estimate is consistent with its parts") {
    PhiFunction phi = PhiFunction::power(0.5);
    std::vector<Point> pts = {{0.0}, {0.5}};
    GammaOptions opt;
    opt.seed = 3;
    opt.eval_points = {{0.25}};
    CapacityEstimate star = gamma_star_estimate(pts, phi, 0.1, opt);
    CapacityEstimate op = gamma_op_estimate(pts, phi, 0.1, opt);
    CHECK(op.value > 0.0);
    // the star face m0 + m1 = 1/2 carries the profile; the antisymmetric pair
    // block of whatever vertex the solver returns has norm sqrt(m0 m1)/phi(1/2)
    REQUIRE(star.masses.size() == 2);
    double profile_norm =
        std::sqrt(star.masses[0] * star.masses[1]) * kernel_magnitude(phi, 0.5);
    CHECK(op.op_norm == Catch::Approx(profile_norm).epsilon(1e-8));
    double kappa = std::min(1.0 / op.growth_ratio, 1.0 / op.op_norm);
    CHECK(op.kappa == Catch::Approx(kappa).epsilon(1e-12));
    double total = star.masses[0] + star.masses[1];
    CHECK(total == Catch::Approx(0.5).epsilon(1e-9));
    CHECK(op.value == Catch::Approx(total * kappa).epsilon(1e-8));
}

TEST_CASE("functional value of a pair matches the balanced closed form") {
    // F(m) = |m|^{3/2} / sqrt(m0 m1^2 W-type + m1 m0^2 ...); balanced optimum
    // on a two-atom support is 2^{3/2} phi(l)
    PhiFunction phi = PhiFunction::power(0.5);
    WolffFunctionalOptions wopt;
    wopt.seed = 5;
    CapacityEstimate est = wolff_capacity_functional({{0.0}, {0.25}}, phi, wopt);
    CHECK(est.value == Catch::Approx(1.4142135623730951).epsilon(1e-7));
    CHECK(est.certified);
    CHECK_FALSE(est.unbounded_at_resolution);
    // certificate reproduces the value
    CHECK(wolff_functional_value(est.support, est.masses, false, &phi) ==
          Catch::Approx(est.value).epsilon(1e-12));
}

TEST_CASE("log surrogate of a pair at distance 1/e is exactly 2") {
    WolffFunctionalOptions wopt;
    wopt.seed = 5;
    CapacityEstimate est = bessel_surrogate({{0.0}, {std::exp(-1.0)}}, wopt);
    CHECK(est.value == Catch::Approx(2.0).epsilon(1e-7));
    CHECK(est.certified);
}

TEST_CASE("degenerate supports come back flagged, not infinite-ish") {
    WolffFunctionalOptions wopt;
    wopt.seed = 5;
    // single atom: no interaction energy at any masses
    CapacityEstimate one = wolff_capacity_functional({{0.0}}, PhiFunction::power(0.5), wopt);
    CHECK(one.unbounded_at_resolution);
    CHECK(one.value == kInf);
    // pair fully beyond the unit cut: the log surrogate sees nothing
    CapacityEstimate far = bessel_surrogate({{0.0}, {1.5}}, wopt);
    CHECK(far.unbounded_at_resolution);
    CHECK(far.value == kInf);
    CHECK(far.diameter_warning);
}

TEST_CASE("comparability experiment rejects radii beyond the gauge knee") {
    GammaOptions gopt;
    WolffFunctionalOptions wopt;
    CHECK_THROWS(corollary22_experiment({0.5}, 8, gopt, wopt));
    CHECK_THROWS(corollary22_experiment({}, 8, gopt, wopt));
}

TEST_CASE("comparability rows populate on a tiny grid") {
    GammaOptions gopt;
    gopt.seed = 83;
    WolffFunctionalOptions wopt;
    wopt.seed = 83;
    Corollary22Result res =
        corollary22_experiment({std::exp(-3.0), std::exp(-4.0)}, 16, gopt, wopt);
    REQUIRE(res.rows.size() == 2);
    for (const auto& row : res.rows) {
        CHECK(row.atoms == 16);
        CHECK(row.gamma_plus > 0.0);
        CHECK(row.bessel > 0.0);
        CHECK(row.ratio == Catch::Approx(row.gamma_plus / row.bessel));
    }
    CHECK(res.ratio_spread >= 1.0);
}
