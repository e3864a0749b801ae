#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "esstime/ess.hpp"

using namespace esstime;

// Reference roots of K(1, e^a, p) = 1/p, computed independently with
// high-precision quadrature and bisection.
static constexpr double kAm01 = 6.865865377577549;
static constexpr double kAm02 = 3.3031425509615002;
static constexpr double kAm03 = 2.0446625621057427;
static constexpr double kAm05 = 0.9449636317370302;

TEST_CASE("parameter validation") {
    const CompetitionParams ok{1.0, 0.0};
    CHECK_NOTHROW(ok.validate());
    for (auto [a, p] : {std::pair{0.0, 0.5}, {-1.0, 0.5}, {1.0, 1.0}, {1.0, -0.1}}) {
        const CompetitionParams bad{a, p};
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    }
}

TEST_CASE("phase transition level") {
    CHECK(!compute_a_M(0.0).has_value());  // +infinity
    CHECK(*compute_a_M(0.1) == doctest::Approx(kAm01).epsilon(1e-9));
    CHECK(*compute_a_M(0.2) == doctest::Approx(kAm02).epsilon(1e-9));
    CHECK(*compute_a_M(0.3) == doctest::Approx(kAm03).epsilon(1e-9));
    CHECK(*compute_a_M(0.5) == doctest::Approx(kAm05).epsilon(1e-9));
    // Decreasing in p, vanishing toward p = 1.
    CHECK(*compute_a_M(0.9) < *compute_a_M(0.5));
    CHECK(*compute_a_M(0.999) < 0.01);
    CHECK_THROWS_AS(compute_a_M(1.0), std::invalid_argument);
}

TEST_CASE("p_M inverts a_M") {
    CHECK(compute_p_M(kAm03) == doctest::Approx(0.3).epsilon(1e-9));
    // Independently computed root of p K(1, e^2, p) = 1.
    CHECK(compute_p_M(2.0) == doctest::Approx(0.3052142992579632).epsilon(1e-9));
    CHECK(*compute_a_M(compute_p_M(4.0)) == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("regime trichotomy") {
    CHECK(classify_regime({1.0, 0.2}) == Regime::Subcritical);
    CHECK(classify_regime({5.0, 0.2}) == Regime::Supercritical);
    CHECK(classify_regime({kAm02, 0.2}) == Regime::Critical);
    CHECK(classify_regime({100.0, 0.0}) == Regime::Subcritical);  // a_M infinite
    CHECK(to_string(Regime::Critical) == "critical");
}

TEST_CASE("atom mass") {
    CHECK(compute_gamma({1.0, 0.2}) == 0.0);
    CHECK(compute_gamma({kAm02, 0.2}) == 0.0);
    // Figure values.
    CHECK(compute_gamma({5.0, 0.2}) == doctest::Approx(0.1014199100155801).epsilon(1e-8));
    CHECK(compute_gamma({5.0, 0.5}) == doctest::Approx(0.45643288933475995).epsilon(1e-8));
    // gamma in (0, min(1 - a_M/a, p)) in the supercritical regime.
    for (double a : {4.0, 6.0, 10.0}) {
        const double g = compute_gamma({a, 0.2});
        CHECK(g > 0.0);
        CHECK(g < std::min(1.0 - kAm02 / a, 0.2));
    }
}

TEST_CASE("common fitness level") {
    CHECK(compute_lambda({1.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(compute_lambda({3.0, 0.0}) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(compute_lambda({0.2, 0.2}) == doctest::Approx(0.8331584610685061).epsilon(1e-8));
    CHECK(compute_lambda({5.0, 0.2}) == doctest::Approx(0.12044796289567127).epsilon(1e-8));
    CHECK(compute_lambda({5.0, 0.5}) == doctest::Approx(0.051031528711895736).epsilon(1e-8));
    CHECK(compute_lambda({1.0, 0.4}) == doctest::Approx(0.48733885636492724).epsilon(1e-8));
    // lambda = p exactly at the transition, from both sides.
    CHECK(compute_lambda({kAm02, 0.2}) == doctest::Approx(0.2).epsilon(1e-8));
    CHECK(compute_lambda({kAm02 * (1.0 + 1e-7), 0.2}) == doctest::Approx(0.2).epsilon(1e-5));
}

TEST_CASE("first arrival date, uniform disturbance") {
    const auto d = Disturbance::uniform(0.0, 1.0);
    // p = 0: tail(x_c) = a/(1+a).
    CHECK(compute_x_c({1.0, 0.0}, d) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(compute_x_c({3.0, 0.0}, d) == doctest::Approx(0.25).epsilon(1e-9));
    // Supercritical: continuous arrivals start at 0.
    CHECK(compute_x_c({5.0, 0.2}, d) == 0.0);
    // Critical: arrivals start at the beginning of the disturbance.
    CHECK(compute_x_c({kAm02, 0.2}, d) == doctest::Approx(0.0).epsilon(1e-6));
    // Subcritical: x_c sits inside the disturbance window.
    const double xc = compute_x_c({0.2, 0.2}, d);
    CHECK(xc > 0.0);
    CHECK(xc < 1.0);
    CHECK(d.tail(xc) == doctest::Approx(0.20855192366436734).epsilon(1e-8));
}

TEST_CASE("first arrival date takes the right end of a flat tail span") {
    // Two triangular blocks with a dead zone; cdf is flat at 0.6 on [0.4,0.6].
    const auto d = Disturbance::piecewise_linear(
        {{0.0, 0.0}, {0.2, 3.0}, {0.4, 0.0}, {0.6, 0.0}, {0.8, 2.0}, {1.0, 0.0}});
    // At this a the tail level is exactly 0.4: K(1, e^a, 0.2) = 1/1.7.
    const double a_gap = 0.4675823597883096;
    CHECK(compute_x_c({a_gap, 0.2}, d) == doctest::Approx(0.6).epsilon(1e-6));
    // Slightly stronger competition pushes x_c below the gap.
    CHECK(compute_x_c({a_gap * 1.05, 0.2}, d) < 0.4);
    // Slightly weaker competition pushes it above.
    CHECK(compute_x_c({a_gap * 0.95, 0.2}, d) > 0.6);
}

TEST_CASE("interval ratio for uniform disturbances") {
    const auto ar = uniform_alpha_R({0.2, 0.2});
    CHECK(ar.R == doctest::Approx(0.20855192366436734).epsilon(1e-8));
    // alpha ties x_c to the window affinely.
    const auto d = Disturbance::uniform(0.3, 1.0);
    CHECK(compute_x_c({0.2, 0.2}, d) ==
          doctest::Approx(0.3 + ar.alpha * 0.7).epsilon(1e-8));
    CHECK_THROWS_AS(uniform_alpha_R({5.0, 0.2}), std::invalid_argument);
}

TEST_CASE("full solve, subcritical") {
    const auto d = Disturbance::uniform(0.0, 1.0);
    const auto sol = solve_ess({0.2, 0.2}, d);
    CHECK(sol.regime == Regime::Subcritical);
    CHECK(sol.gamma == 0.0);
    CHECK(sol.lambda == doctest::Approx(0.8331584610685061).epsilon(1e-8));
    CHECK(sol.strategy.atom_at_zero() == 0.0);
    // Continuous arrivals start at x_c and end with the disturbance.
    CHECK(sol.strategy.knot_x().front() == doctest::Approx(sol.x_c).epsilon(1e-10));
    CHECK(sol.strategy.knot_x().back() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sol.residuals.endpoint < 1e-8);
    CHECK(sol.residuals.max_inversion < 1e-8);
    // p = 0 closed form: F_nu = ((1+a)/a)(cdf - cdf(x_c)).
    const auto sol0 = solve_ess({1.0, 0.0}, d);
    for (double x : {0.55, 0.7, 0.85, 0.95})
        CHECK(sol0.strategy.F_nu(x) == doctest::Approx(2.0 * (x - 0.5)).epsilon(1e-9));
}

TEST_CASE("full solve, supercritical") {
    const auto d = Disturbance::uniform(0.5, 0.9);
    const auto sol = solve_ess({5.0, 0.2}, d);
    CHECK(sol.regime == Regime::Supercritical);
    CHECK(sol.gamma == doctest::Approx(0.1014199100155801).epsilon(1e-7));
    CHECK(sol.lambda == doctest::Approx(0.12044796289567127).epsilon(1e-7));
    CHECK(sol.x_c == 0.0);
    CHECK(sol.strategy.atom_at_zero() == doctest::Approx(sol.gamma));
    // The continuous part spans the whole disturbance window.
    CHECK(sol.strategy.knot_x().front() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(sol.strategy.knot_x().back() == doctest::Approx(0.9).epsilon(1e-10));
    CHECK(sol.residuals.endpoint < 1e-8);
}

TEST_CASE("solution is equivariant under affine rescaling") {
    const CompetitionParams params{0.7, 0.3};
    const auto base = solve_ess(params, Disturbance::uniform(0.0, 1.0));
    const auto moved = solve_ess(params, Disturbance::uniform(0.3, 1.0));
    CHECK(moved.lambda == doctest::Approx(base.lambda).epsilon(1e-10));
    for (double q : {0.1, 0.35, 0.6, 0.9}) {
        const double xb = base.strategy.quantile_nu(q);
        CHECK(moved.strategy.quantile_nu(q) == doctest::Approx(0.3 + 0.7 * xb).epsilon(1e-8));
    }
}

TEST_CASE("degenerate edges") {
    const auto d = Disturbance::uniform(0.0, 1.0);
    CHECK(degenerate_cases(0.0, 1.0, d).kind == DegenerateKind::EveryStrategy);
    CHECK(degenerate_cases(0.0, 0.4, d).kind == DegenerateKind::AnyAfterDisturbance);
    CHECK(degenerate_cases(2.0, 1.0, d).kind == DegenerateKind::AtomAtZero);
    CHECK_THROWS_AS(degenerate_cases(2.0, 0.4, d), std::invalid_argument);
}
